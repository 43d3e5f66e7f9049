#include "d2dsim/trace.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

namespace d2dsim {

namespace {

constexpr const char* kHeader = "node_a,node_b,start,end";

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t comma = line.find(',', pos);
    if (comma == std::string::npos) {
      out.push_back(line.substr(pos));
      return out;
    }
    out.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
}

double parse_time(const std::string& field, std::size_t line_no,
                  const char* what) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value))
    throw ParseError(line_no, std::string("invalid ") + what + " '" + field + "'");
  return value;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace

std::vector<EncounterRecord> parse_trace(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw FormatError("empty trace: missing header '" + std::string(kHeader) + "'");
  if (strip_cr(line) != kHeader)
    throw FormatError("bad trace header, expected '" + std::string(kHeader) + "'");

  std::vector<EncounterRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 4)
      throw ParseError(line_no, "expected 4 fields, got " +
                                    std::to_string(fields.size()));
    EncounterRecord rec;
    rec.node_a = fields[0];
    rec.node_b = fields[1];
    rec.start = parse_time(fields[2], line_no, "start time");
    rec.end = parse_time(fields[3], line_no, "end time");
    if (rec.node_a.empty() || rec.node_b.empty())
      throw ParseError(line_no, "empty node identifier");
    if (rec.node_a == rec.node_b)
      throw ParseError(line_no, "self-contact: node_a equals node_b ('" +
                                    rec.node_a + "')");
    if (rec.start < 0.0)
      throw ParseError(line_no, "negative start time");
    if (!(rec.end > rec.start))
      throw ParseError(line_no, "end must be strictly greater than start");
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<EncounterRecord> parse_trace_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw FormatError("cannot open trace file '" + p.string() + "'");
  return parse_trace(in);
}

std::map<PairKey, ContactStats> aggregate_contacts(
    const std::vector<EncounterRecord>& records) {
  std::map<PairKey, std::vector<double>> durations;
  for (const auto& rec : records)
    durations[PairKey::canonical(rec.node_a, rec.node_b)].push_back(
        rec.duration());

  std::map<PairKey, ContactStats> stats;
  for (auto& [pair, xs] : durations) {
    // Fixed summation order regardless of input order.
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / n;
    double sq = 0.0;
    for (double x : xs) sq += (x - mean) * (x - mean);
    stats.emplace(pair, ContactStats{pair, xs.size(), mean, sq / n});
  }
  return stats;
}

}  // namespace d2dsim
