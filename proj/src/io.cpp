#include "d2dsim/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "d2dsim/errors.hpp"

namespace d2dsim {

namespace {

// Writes through a temp file and renames on success, so a failed command
// never leaves a partial output behind.
class AtomicWriter {
 public:
  explicit AtomicWriter(const std::filesystem::path& path)
      : final_path_(path), tmp_path_(path.string() + ".tmp"), out_(tmp_path_) {
    if (!out_)
      throw FormatError("cannot open output file '" + path.string() + "'");
  }

  ~AtomicWriter() {
    if (!committed_) {
      out_.close();
      std::error_code ec;
      std::filesystem::remove(tmp_path_, ec);
    }
  }

  std::ofstream& stream() { return out_; }

  void commit() {
    out_.flush();
    if (!out_)
      throw FormatError("write failed for '" + final_path_.string() + "'");
    out_.close();
    std::filesystem::rename(tmp_path_, final_path_);
    committed_ = true;
  }

 private:
  std::filesystem::path final_path_;
  std::filesystem::path tmp_path_;
  std::ofstream out_;
  bool committed_ = false;
};

}  // namespace

std::string format_double(double value) {
  char buf[64];
  // 17 significant digits round-trip any double exactly.
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_graph_csv(const std::filesystem::path& path,
                     const ClosenessGraph& graph) {
  AtomicWriter writer(path);
  writer.stream() << "node_i,node_j,weight\n";
  for (const auto& [pair, w] : graph.edges)
    writer.stream() << pair.first << ',' << pair.second << ','
                    << format_double(w) << '\n';
  writer.commit();
}

ClosenessGraph read_graph_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open graph file '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line))
    throw FormatError("empty graph file: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "node_i,node_j,weight")
    throw FormatError("bad graph header, expected 'node_i,node_j,weight'");

  ClosenessGraph graph;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string a, b, w_str;
    if (!std::getline(fields, a, ',') || !std::getline(fields, b, ',') ||
        !std::getline(fields, w_str))
      throw ParseError(line_no, "expected 3 fields");
    double w = 0.0;
    const auto [ptr, ec] =
        std::from_chars(w_str.data(), w_str.data() + w_str.size(), w);
    if (ec != std::errc{} || ptr != w_str.data() + w_str.size())
      throw ParseError(line_no, "invalid weight '" + w_str + "'");
    if (a == b) throw ParseError(line_no, "self-edge");
    if (w < 0.0 || w > 1.0)
      throw ParseError(line_no, "weight out of [0,1]");
    graph.nodes.insert(a);
    graph.nodes.insert(b);
    graph.edges.emplace(PairKey::canonical(a, b), w);
  }
  return graph;
}

void write_partition_json(const std::filesystem::path& path,
                          const OffsnPartition& partition) {
  nlohmann::ordered_json doc;
  doc["clusters"] = partition.clusters;
  doc["white"] = partition.white_nodes;
  doc["w_T"] = partition.threshold;
  AtomicWriter writer(path);
  writer.stream() << doc.dump(2) << '\n';
  writer.commit();
}

void write_topology_csv(const std::filesystem::path& path,
                        const Topology& topology) {
  AtomicWriter writer(path);
  writer.stream() << "ue_id,x,y\n";
  for (const auto& [id, pos] : topology.ue_positions)
    writer.stream() << id << ',' << format_double(pos.x) << ','
                    << format_double(pos.y) << '\n';
  writer.commit();
}

void write_results_csv(const std::filesystem::path& path,
                       const std::vector<SweepRow>& rows) {
  AtomicWriter writer(path);
  writer.stream() << "param_value,seed,enb_sum_rate,d2d_sum_rate,"
                     "offloaded_fraction,mean_utility\n";
  for (const auto& row : rows)
    writer.stream() << format_double(row.param_value) << ',' << row.seed << ','
                    << format_double(row.metrics.enb_sum_rate) << ','
                    << format_double(row.metrics.d2d_sum_rate) << ','
                    << format_double(row.metrics.offloaded_fraction) << ','
                    << format_double(row.metrics.mean_utility()) << '\n';
  writer.commit();
}

void write_decisions_csv(const std::filesystem::path& path,
                         const std::vector<ServiceDecision>& decisions) {
  AtomicWriter writer(path);
  writer.stream() << "user,content,route,provider,rate,cost\n";
  for (const auto& d : decisions)
    writer.stream() << d.user << ',' << d.content << ',' << route_name(d.route)
                    << ',' << d.provider << ','
                    << format_double(d.rate_delivered) << ','
                    << format_double(d.control_cost_charged) << '\n';
  writer.commit();
}

void write_selections_csv(const std::filesystem::path& path,
                          const std::vector<SelectionRow>& rows) {
  AtomicWriter writer(path);
  writer.stream() << "user_index,content_id,was_new\n";
  for (const auto& row : rows)
    writer.stream() << row.user_index << ',' << row.content << ','
                    << (row.was_new ? 1 : 0) << '\n';
  writer.commit();
}

void write_table_csv(const std::filesystem::path& path,
                     const DistributionTable& table) {
  AtomicWriter writer(path);
  writer.stream() << "k,exact_pmf,exact_cdf,sp_pmf,sp_cdf,empirical_cdf,"
                     "chernoff_bound_on_cdf\n";
  for (std::size_t i = 0; i < table.support.size(); ++i)
    writer.stream() << table.support[i] << ','
                    << format_double(table.exact_pmf[i]) << ','
                    << format_double(table.exact_cdf[i]) << ','
                    << format_double(table.saddlepoint_pmf[i]) << ','
                    << format_double(table.saddlepoint_cdf[i]) << ','
                    << format_double(table.empirical_cdf[i]) << ','
                    << format_double(table.bound_on_cdf[i]) << '\n';
  writer.commit();
}

}  // namespace d2dsim
