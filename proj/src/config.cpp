#include "d2dsim/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "d2dsim/errors.hpp"

namespace d2dsim {

namespace {

using nlohmann::json;

// ---- TOML subset -----------------------------------------------------

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

class TomlValueParser {
 public:
  TomlValueParser(const std::string& text, std::size_t line_no)
      : text_(text), line_no_(line_no) {}

  json parse() {
    json value = parse_value();
    skip_space();
    if (pos_ != text_.size())
      throw ParseError(line_no_, "trailing characters after value");
    return value;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  json parse_value() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError(line_no_, "missing value");
    const char c = text_[pos_];
    if (c == '[') return parse_array();
    if (c == '"') return parse_string();
    return parse_scalar();
  }

  json parse_array() {
    ++pos_;  // consume '['
    json arr = json::array();
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == ']') {
      ++pos_;
      return arr;
    }
    for (;;) {
      arr.push_back(parse_value());
      skip_space();
      if (pos_ >= text_.size())
        throw ParseError(line_no_, "unterminated array");
      if (text_[pos_] == ',') {
        ++pos_;
        continue;
      }
      if (text_[pos_] == ']') {
        ++pos_;
        return arr;
      }
      throw ParseError(line_no_, "expected ',' or ']' in array");
    }
  }

  json parse_string() {
    ++pos_;  // consume '"'
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '"') out.push_back(text_[pos_++]);
    if (pos_ >= text_.size()) throw ParseError(line_no_, "unterminated string");
    ++pos_;  // consume closing '"'
    return json(out);
  }

  json parse_scalar() {
    std::size_t end = pos_;
    while (end < text_.size() && text_[end] != ',' && text_[end] != ']' &&
           !std::isspace(static_cast<unsigned char>(text_[end])))
      ++end;
    const std::string token = text_.substr(pos_, end - pos_);
    pos_ = end;
    if (token == "true") return json(true);
    if (token == "false") return json(false);
    if (token.find_first_of(".eE") == std::string::npos) {
      long long iv = 0;
      const auto [p, ec] =
          std::from_chars(token.data(), token.data() + token.size(), iv);
      if (ec == std::errc{} && p == token.data() + token.size()) return json(iv);
    }
    double dv = 0.0;
    const auto [p, ec] =
        std::from_chars(token.data(), token.data() + token.size(), dv);
    if (ec == std::errc{} && p == token.data() + token.size()) return json(dv);
    throw ParseError(line_no_, "invalid value '" + token + "'");
  }

  const std::string& text_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

}  // namespace

json parse_toml_subset(const std::string& text) {
  json doc = json::object();
  json* current = &doc;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError(line_no, "malformed section header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) throw ParseError(line_no, "empty section name");
      current = &doc[name];
      if (!current->is_object()) *current = json::object();
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ParseError(line_no, "empty key");
    const std::string value = trim(line.substr(eq + 1));
    (*current)[key] = TomlValueParser(value, line_no).parse();
  }
  return doc;
}

namespace {

double require_number(const json& obj, const std::string& path,
                      const std::string& key) {
  if (!obj.contains(key))
    throw ConfigError(path + key + ": missing required field");
  const auto& v = obj.at(key);
  if (!v.is_number())
    throw ConfigError(path + key + ": expected a number");
  return v.get<double>();
}

double optional_number(const json& obj, const std::string& path,
                       const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number())
    throw ConfigError(path + key + ": expected a number");
  return v.get<double>();
}

std::size_t require_count(const json& obj, const std::string& path,
                          const std::string& key) {
  const double v = require_number(obj, path, key);
  if (v < 0 || v != std::floor(v))
    throw ConfigError(path + key + ": expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

std::size_t optional_count(const json& obj, const std::string& path,
                           const std::string& key, std::size_t fallback) {
  if (!obj.contains(key)) return fallback;
  return require_count(obj, path, key);
}

}  // namespace

SimConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
  SimConfig config;
  config.alpha = require_number(doc, "", "alpha");
  config.n_users = require_count(doc, "", "n_users");
  config.warmup_users = optional_count(doc, "", "warmup_users", 0);
  config.w_threshold = require_number(doc, "", "w_t");
  config.x_min = require_number(doc, "", "x_min");
  config.n_min = optional_count(doc, "", "n_min", 2);
  config.d_max = require_number(doc, "", "d_max");
  config.control_cost = optional_number(doc, "", "c_c", 0.0);
  if (doc.contains("seed")) {
    const auto& seed = doc.at("seed");
    if (!seed.is_number_integer() && !seed.is_number_unsigned())
      throw ConfigError("seed: expected an integer");
    config.seed = seed.get<std::uint64_t>();
  }

  if (!doc.contains("channel"))
    throw ConfigError("channel: missing required section");
  const auto& channel = doc.at("channel");
  config.channel.p_enb = require_number(channel, "channel.", "p_enb");
  config.channel.p_d2d = require_number(channel, "channel.", "p_d2d");
  config.channel.noise = require_number(channel, "channel.", "noise");
  config.channel.path_loss_exponent =
      optional_number(channel, "channel.", "path_loss_exponent", 3.5);

  if (!doc.contains("placement"))
    throw ConfigError("placement: missing required section");
  const auto& placement = doc.at("placement");
  config.placement.cell_radius =
      require_number(placement, "placement.", "cell_radius");
  config.placement.min_separation =
      optional_number(placement, "placement.", "min_separation", 0.5);
  if (placement.contains("hotspots")) {
    const auto& hotspots = placement.at("hotspots");
    if (!hotspots.is_array())
      throw ConfigError("placement.hotspots: expected an array");
    for (std::size_t i = 0; i < hotspots.size(); ++i) {
      const std::string path =
          "placement.hotspots[" + std::to_string(i) + "]";
      const auto& entry = hotspots.at(i);
      if (!entry.is_array() || entry.size() != 4)
        throw ConfigError(path + ": expected [x, y, radius, fraction]");
      for (const auto& field : entry)
        if (!field.is_number())
          throw ConfigError(path + ": expected numeric entries");
      config.placement.hotspots.push_back(
          Hotspot{Point{entry[0].get<double>(), entry[1].get<double>()},
                  entry[2].get<double>(), entry[3].get<double>()});
    }
  }

  const bool has_trace = doc.contains("trace");
  const bool has_synth = doc.contains("synthetic");
  if (has_trace == has_synth)
    throw ConfigError("config: exactly one of [trace] or [synthetic] is required");
  if (has_trace) {
    const auto& trace = doc.at("trace");
    if (!trace.contains("path") || !trace.at("path").is_string())
      throw ConfigError("trace.path: expected a string");
    config.trace_path = trace.at("path").get<std::string>();
  } else {
    const auto& synth = doc.at("synthetic");
    SyntheticTraceParams params;
    params.n_ues = require_count(synth, "synthetic.", "n_ues");
    params.encounters_per_pair =
        require_count(synth, "synthetic.", "encounters_per_pair");
    params.duration_shape =
        require_number(synth, "synthetic.", "duration_shape");
    params.duration_scale =
        require_number(synth, "synthetic.", "duration_scale");
    params.pair_fraction =
        optional_number(synth, "synthetic.", "pair_fraction", 1.0);
    config.synthetic = params;
  }

  config.validate();
  return config;
}

SimConfig config_from_json_string(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  return config_from_json(doc);
}

json config_to_json(const SimConfig& config) {
  json doc;
  doc["alpha"] = config.alpha;
  doc["n_users"] = config.n_users;
  doc["warmup_users"] = config.warmup_users;
  doc["w_t"] = config.w_threshold;
  doc["x_min"] = config.x_min;
  doc["n_min"] = config.n_min;
  doc["d_max"] = config.d_max;
  doc["c_c"] = config.control_cost;
  doc["seed"] = config.seed;
  doc["channel"] = {{"p_enb", config.channel.p_enb},
                    {"p_d2d", config.channel.p_d2d},
                    {"noise", config.channel.noise},
                    {"path_loss_exponent", config.channel.path_loss_exponent}};
  doc["placement"] = {{"cell_radius", config.placement.cell_radius},
                      {"min_separation", config.placement.min_separation}};
  json hotspots = json::array();
  for (const auto& h : config.placement.hotspots)
    hotspots.push_back({h.center.x, h.center.y, h.radius, h.fraction});
  doc["placement"]["hotspots"] = hotspots;
  if (config.trace_path) doc["trace"] = {{"path", *config.trace_path}};
  if (config.synthetic) {
    const auto& s = *config.synthetic;
    doc["synthetic"] = {{"n_ues", s.n_ues},
                        {"encounters_per_pair", s.encounters_per_pair},
                        {"duration_shape", s.duration_shape},
                        {"duration_scale", s.duration_scale},
                        {"pair_fraction", s.pair_fraction}};
  }
  return doc;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string ext = path.extension().string();
  if (ext == ".json") return config_from_json_string(buffer.str());
  if (ext == ".toml") return config_from_json(parse_toml_subset(buffer.str()));
  throw ConfigError("config file must end in .toml or .json, got '" +
                    path.string() + "'");
}

}  // namespace d2dsim
