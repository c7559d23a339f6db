#include "hawkes/config.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <vector>

#include "hawkes/error.hpp"

namespace hawkes::config {

namespace {

using io::Json;

enum class Kind { kNumber, kInteger, kBool, kString, kArray, kObject };

struct ParamRule {
  const char *name;
  Kind kind;
  Json fallback; // null: optional without default
};

const std::map<std::string, std::vector<ParamRule>> &schemas() {
  static const std::map<std::string, std::vector<ParamRule>> s = {
      {"simulate",
       {{"n_events", Kind::kInteger, 1000},
        {"horizon", Kind::kNumber, nullptr},
        {"inversion_tol", Kind::kNumber, 1e-10},
        {"min_gap", Kind::kNumber, 1e-12},
        {"eps_tail", Kind::kNumber, 1e-15},
        {"initial_state", Kind::kObject,
         Json{{"gaps", Json::array()}, {"tail_infinite", true}}},
        {"check_compensator", Kind::kBool, true},
        {"random_walk_margin", Kind::kNumber, nullptr}}},
      {"stationary-linear",
       {{"k", Kind::kInteger, 1},
        {"n_samples", Kind::kInteger, 1000},
        {"tol", Kind::kNumber, 1e-9},
        {"depth_cap", Kind::kInteger, 100000},
        {"inversion_tol", Kind::kNumber, 1e-12}}},
      {"cesaro",
       {{"checkpoints", Kind::kArray, Json::array({1000, 10000})},
        {"k", Kind::kInteger, 3},
        {"inversion_tol", Kind::kNumber, 1e-10}}},
      {"expmem-stationary",
       {{"n_burn", Kind::kInteger, 1000},
        {"n_keep", Kind::kInteger, 10000},
        {"tol", Kind::kNumber, 1e-10}}},
      {"transient-scaling",
       {{"n_events", Kind::kInteger, 10000},
        {"windows", Kind::kInteger, 1000},
        {"histogram_bins", Kind::kInteger, 40},
        {"tol", Kind::kNumber, 1e-10}}},
      {"couple",
       {{"mode", Kind::kString, "clocks"},
        {"trials", Kind::kInteger, 10000},
        {"f", Kind::kObject,
         Json{{"breaks", Json::array({0.1})}, {"values", Json::array({2, 1})}}},
        {"g", Kind::kObject,
         Json{{"breaks", Json::array()}, {"values", Json::array({1})}}},
        {"z_gaps", Kind::kArray, Json::array({1.0})},
        {"max_steps", Kind::kInteger, 10000},
        {"margin", Kind::kNumber, 0.05}}},
      {"validate", {{"quick", Kind::kBool, false}}},
  };
  return s;
}

const char *kind_name(Kind k) {
  switch (k) {
  case Kind::kNumber: return "a number";
  case Kind::kInteger: return "a non-negative integer";
  case Kind::kBool: return "a boolean";
  case Kind::kString: return "a string";
  case Kind::kArray: return "an array";
  case Kind::kObject: return "an object";
  }
  return "a value";
}

bool has_kind(const Json &v, Kind k) {
  switch (k) {
  case Kind::kNumber: return v.is_number();
  case Kind::kInteger: return v.is_number_unsigned();
  case Kind::kBool: return v.is_boolean();
  case Kind::kString: return v.is_string();
  case Kind::kArray: return v.is_array();
  case Kind::kObject: return v.is_object();
  }
  return false;
}

void check_rate_table(const Json &table, const std::string &where) {
  io::only_keys(table, {"breaks", "values"}, where);
  if (!table.contains("breaks") || !table.at("breaks").is_array() ||
      !table.contains("values") || !table.at("values").is_array())
    throw ConfigError("rate needs arrays 'breaks' and 'values'", where);
  const Json &b = table.at("breaks");
  const Json &v = table.at("values");
  if (v.size() != b.size() + 1)
    throw ConfigError("rate needs one more value than breaks",
                      where + "/values");
  double prev = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (!b[i].is_number() || !(b[i].get<double>() > prev))
      throw ConfigError("breaks must be positive and increasing",
                        where + "/breaks/" + std::to_string(i));
    prev = b[i].get<double>();
  }
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_number() || !(v[i].get<double>() >= 0.0))
      throw ConfigError("rate values must be numbers >= 0",
                        where + "/values/" + std::to_string(i));
}

void check_values(const std::string &experiment, Json &p) {
  auto positive = [&](const char *key) {
    if (p.contains(key) && !p.at(key).is_null() &&
        !(p.at(key).get<double>() > 0.0))
      throw ConfigError(std::string("'") + key + "' must be > 0",
                        std::string("/params/") + key);
  };
  for (const char *k : {"inversion_tol", "min_gap", "tol", "horizon",
                        "random_walk_margin", "margin"})
    positive(k);
  for (const char *k : {"n_events", "n_samples", "k", "n_keep", "windows",
                        "trials", "histogram_bins", "depth_cap", "max_steps"})
    if (p.contains(k) && p.at(k).get<std::uint64_t>() == 0)
      throw ConfigError(std::string("'") + k + "' must be >= 1",
                        std::string("/params/") + k);
  if (experiment == "simulate")
    io::state_from_json(p.at("initial_state"), "/params/initial_state");
  if (experiment == "cesaro") {
    const Json &c = p.at("checkpoints");
    std::uint64_t prev = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (!c[i].is_number_unsigned() || c[i].get<std::uint64_t>() <= prev)
        throw ConfigError("checkpoints must be increasing positive integers",
                          "/params/checkpoints/" + std::to_string(i));
      prev = c[i].get<std::uint64_t>();
    }
    if (c.empty())
      throw ConfigError("checkpoints must not be empty", "/params/checkpoints");
  }
  if (experiment == "transient-scaling" && p.at("windows").get<int>() < 30)
    throw ConfigError("'windows' must be >= 30", "/params/windows");
  if (experiment == "couple") {
    const std::string mode = p.at("mode").get<std::string>();
    if (mode != "clocks" && mode != "chains")
      throw ConfigError("'mode' must be \"clocks\" or \"chains\"",
                        "/params/mode");
    check_rate_table(p.at("f"), "/params/f");
    check_rate_table(p.at("g"), "/params/g");
    const Json &z = p.at("z_gaps");
    for (std::size_t i = 0; i < z.size(); ++i)
      if (!z[i].is_number() || !(z[i].get<double>() > 0.0))
        throw ConfigError("z_gaps entries must be > 0",
                          "/params/z_gaps/" + std::to_string(i));
  }
}

} // namespace

Json resolve_params(const std::string &experiment, const Json &params) {
  const auto it = schemas().find(experiment);
  if (it == schemas().end())
    throw ConfigError("unknown experiment '" + experiment + "'",
                      "/experiment");
  if (!params.is_object())
    throw ConfigError("'params' must be an object", "/params");
  for (auto p = params.begin(); p != params.end(); ++p) {
    const bool known =
        std::any_of(it->second.begin(), it->second.end(),
                    [&](const ParamRule &s) { return p.key() == s.name; });
    if (!known)
      throw ConfigError("unknown parameter '" + p.key() + "' for experiment '" +
                            experiment + "'",
                        "/params/" + p.key());
  }
  Json out = Json::object();
  for (const ParamRule &s : it->second) {
    if (params.contains(s.name)) {
      const Json &v = params.at(s.name);
      if (!has_kind(v, s.kind))
        throw ConfigError(std::string("parameter '") + s.name + "' must be " +
                              kind_name(s.kind),
                          std::string("/params/") + s.name);
      out[s.name] = v;
    } else {
      out[s.name] = s.fallback;
    }
  }
  check_values(experiment, out);
  return out;
}

ExperimentConfig parse(const std::string &text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error &e) {
    std::string msg = e.what();
    const auto colon = msg.find(": ", msg.find("parse error"));
    if (colon != std::string::npos) msg = msg.substr(colon + 2);
    throw ConfigError("invalid JSON: " + msg, "#" + std::to_string(e.byte));
  }
  io::only_keys(doc, {"experiment", "seed", "replicas", "output_dir", "model",
                      "params"},
                "");
  ExperimentConfig cfg;
  if (!doc.contains("experiment") || !doc.at("experiment").is_string())
    throw ConfigError("'experiment' is required and must be a string",
                      doc.contains("experiment") ? "/experiment" : "");
  cfg.experiment = doc.at("experiment").get<std::string>();
  if (!schemas().count(cfg.experiment))
    throw ConfigError("unknown experiment '" + cfg.experiment + "'",
                      "/experiment");
  if (!doc.contains("seed"))
    throw ConfigError("'seed' is required", "");
  if (!doc.at("seed").is_number_unsigned())
    throw ConfigError("'seed' must be a non-negative integer", "/seed");
  cfg.seed = doc.at("seed").get<std::uint64_t>();
  if (doc.contains("replicas")) {
    if (!doc.at("replicas").is_number_unsigned() ||
        doc.at("replicas").get<std::uint64_t>() == 0)
      throw ConfigError("'replicas' must be a positive integer", "/replicas");
    cfg.replicas = doc.at("replicas").get<std::uint64_t>();
  }
  if (doc.contains("output_dir")) {
    if (!doc.at("output_dir").is_string())
      throw ConfigError("'output_dir' must be a string", "/output_dir");
    cfg.output_dir = doc.at("output_dir").get<std::string>();
  }
  if (doc.contains("model")) {
    cfg.model = io::model_from_json(doc.at("model"), "/model");
  } else if (cfg.experiment != "validate") {
    throw ConfigError("'model' is required for experiment '" +
                          cfg.experiment + "'",
                      "");
  }
  cfg.params = resolve_params(cfg.experiment,
                              doc.value("params", Json::object()));
  return cfg;
}

Json to_json(const ExperimentConfig &cfg) {
  Json j{{"experiment", cfg.experiment},
         {"seed", cfg.seed},
         {"replicas", cfg.replicas},
         {"output_dir", cfg.output_dir},
         {"params", cfg.params}};
  if (cfg.model) j["model"] = io::model_to_json(*cfg.model);
  return j;
}

namespace {

// Walks a JSON text recording the line of every value, keyed by pointer.
class LineScanner {
public:
  explicit LineScanner(const std::string &t) : t_(t) {}

  std::map<std::string, std::size_t> run() {
    skip_ws();
    value("");
    return lines_;
  }

private:
  void skip_ws() {
    while (i_ < t_.size() && std::isspace(static_cast<unsigned char>(t_[i_]))) {
      if (t_[i_] == '\n') ++line_;
      ++i_;
    }
  }

  std::string string_token() {
    std::string s;
    ++i_; // opening quote
    while (i_ < t_.size() && t_[i_] != '"') {
      if (t_[i_] == '\\' && i_ + 1 < t_.size()) {
        s += t_[i_ + 1];
        i_ += 2;
        continue;
      }
      s += t_[i_++];
    }
    ++i_;
    return s;
  }

  void value(const std::string &ptr) {
    if (i_ >= t_.size()) return;
    lines_.emplace(ptr, line_);
    const char c = t_[i_];
    if (c == '{') {
      ++i_;
      skip_ws();
      while (i_ < t_.size() && t_[i_] != '}') {
        const std::size_t key_line = line_;
        const std::string key = string_token();
        skip_ws();
        ++i_; // ':'
        skip_ws();
        const std::string child = ptr + "/" + key;
        value(child);
        lines_[child] = key_line;
        skip_ws();
        if (i_ < t_.size() && t_[i_] == ',') {
          ++i_;
          skip_ws();
        }
      }
      ++i_;
    } else if (c == '[') {
      ++i_;
      skip_ws();
      std::size_t idx = 0;
      while (i_ < t_.size() && t_[i_] != ']') {
        value(ptr + "/" + std::to_string(idx++));
        skip_ws();
        if (i_ < t_.size() && t_[i_] == ',') {
          ++i_;
          skip_ws();
        }
      }
      ++i_;
    } else if (c == '"') {
      string_token();
    } else {
      while (i_ < t_.size() && t_[i_] != ',' && t_[i_] != '}' &&
             t_[i_] != ']' && !std::isspace(static_cast<unsigned char>(t_[i_])))
        ++i_;
    }
  }

  const std::string &t_;
  std::size_t i_ = 0;
  std::size_t line_ = 1;
  std::map<std::string, std::size_t> lines_;
};

} // namespace

std::size_t locate_line(const std::string &text, const std::string &pointer) {
  if (!pointer.empty() && pointer[0] == '#') {
    std::size_t byte = std::stoull(pointer.substr(1));
    byte = std::min(byte, text.size());
    // nlohmann reports the 1-based offset of the offending character.
    if (byte > 0) --byte;
    return 1 + static_cast<std::size_t>(
                   std::count(text.begin(),
                              text.begin() + static_cast<std::ptrdiff_t>(byte),
                              '\n'));
  }
  try {
    const auto lines = LineScanner(text).run();
    std::string p = pointer;
    // Fall back to the closest enclosing entry that exists in the text.
    for (;;) {
      const auto it = lines.find(p);
      if (it != lines.end()) return it->second;
      const auto slash = p.rfind('/');
      if (slash == std::string::npos) return 1;
      p = p.substr(0, slash);
    }
  } catch (...) {
    return 0;
  }
}

} // namespace hawkes::config
