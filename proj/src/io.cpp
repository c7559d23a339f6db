#include "hawkes/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "hawkes/error.hpp"

namespace hawkes::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::uint64_t fnv1a64(const std::string &bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char *digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = digits[v & 0xF];
    v >>= 4;
  }
  return s;
}

void CsvTable::comment(const std::string &text) {
  out_ += "# ";
  out_ += text;
  out_ += '\n';
}

void CsvTable::header(const std::vector<std::string> &cols) {
  for (const auto &c : cols) cell(c);
  end_row();
}

CsvTable &CsvTable::cell(const std::string &v) {
  if (row_open_) out_ += ',';
  out_ += v;
  row_open_ = true;
  return *this;
}

CsvTable &CsvTable::cell(double v) { return cell(format_double(v)); }

CsvTable &CsvTable::cell(std::uint64_t v) { return cell(std::to_string(v)); }

void CsvTable::end_row() {
  out_ += '\n';
  row_open_ = false;
}

namespace {

double get_number(const Json &j, const char *key, const std::string &where) {
  if (!j.contains(key))
    throw ConfigError("missing numeric parameter '" + std::string(key) + "'",
                      where);
  if (!j.at(key).is_number())
    throw ConfigError("parameter '" + std::string(key) + "' must be a number",
                      where + "/" + key);
  return j.at(key).get<double>();
}

std::vector<double> get_array(const Json &j, const char *key,
                              const std::string &where) {
  if (!j.contains(key))
    throw ConfigError("missing array parameter '" + std::string(key) + "'",
                      where);
  if (!j.at(key).is_array())
    throw ConfigError("parameter '" + std::string(key) + "' must be an array",
                      where + "/" + key);
  std::vector<double> v;
  std::size_t i = 0;
  for (const auto &e : j.at(key)) {
    if (!e.is_number())
      throw ConfigError("non-numeric entry in '" + std::string(key) + "'",
                        where + "/" + key + "/" + std::to_string(i));
    v.push_back(e.get<double>());
    ++i;
  }
  return v;
}

} // namespace

void only_keys(const Json &j, std::initializer_list<const char *> keys,
               const std::string &where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object", where);
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char *k : keys) known = known || it.key() == k;
    if (!known)
      throw ConfigError("unknown key '" + it.key() + "' in " + where,
                        where + "/" + it.key());
  }
}

Json model_to_json(const ModelParams &m) {
  Json j;
  std::visit(
      [&](const auto &k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, ExponentialKernel>) {
          j["kernel"] = {{"type", "exponential"},
                         {"params", {{"scale", k.scale}}}};
        } else {
          j["kernel"] = {{"type", "tabulated"},
                         {"params", {{"t", k.t}, {"h", k.h}}}};
        }
      },
      m.kernel.variant());
  std::visit(
      [&](const auto &a) {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, AffineActivation>) {
          j["activation"] = {{"type", "affine"},
                             {"params", {{"nu", a.nu}, {"beta", a.beta}}}};
        } else if constexpr (std::is_same_v<T, PolynomialActivation>) {
          j["activation"] = {
              {"type", "polynomial"},
              {"params", {{"nu", a.nu}, {"beta", a.beta}, {"gamma", a.gamma}}}};
        } else {
          j["activation"] = {
              {"type", "tabulated"},
              {"params", {{"x", a.x}, {"y", a.y}, {"slope", a.slope}}}};
        }
      },
      m.activation.variant());
  return j;
}

ModelParams model_from_json(const Json &j, const std::string &where) {
  only_keys(j, {"kernel", "activation"}, where);
  if (!j.contains("kernel") || !j.contains("activation"))
    throw ConfigError("model needs 'kernel' and 'activation'", where);
  const Json &kj = j.at("kernel");
  const Json &aj = j.at("activation");
  const std::string kw = where + "/kernel", aw = where + "/activation";
  only_keys(kj, {"type", "params"}, kw);
  only_keys(aj, {"type", "params"}, aw);
  if (!kj.contains("type") || !kj.at("type").is_string())
    throw ConfigError("kernel needs a string 'type'", kw);
  if (!aj.contains("type") || !aj.at("type").is_string())
    throw ConfigError("activation needs a string 'type'", aw);
  const std::string kpw = kw + "/params", apw = aw + "/params";
  const Json kp = kj.value("params", Json::object());
  const Json ap = aj.value("params", Json::object());
  const std::string kt = kj.at("type").get<std::string>();
  const std::string at = aj.at("type").get<std::string>();

  auto build_kernel = [&]() {
    if (kt == "exponential") {
      only_keys(kp, {"scale"}, kpw);
      return MemoryKernel(ExponentialKernel{get_number(kp, "scale", kpw)});
    }
    if (kt == "tabulated") {
      only_keys(kp, {"t", "h"}, kpw);
      return MemoryKernel(TabulatedKernel{get_array(kp, "t", kpw),
                                          get_array(kp, "h", kpw)});
    }
    throw ConfigError("unknown kernel type '" + kt + "'", kw + "/type");
  };
  auto build_activation = [&]() {
    if (at == "affine") {
      only_keys(ap, {"nu", "beta"}, apw);
      return Activation::affine(get_number(ap, "nu", apw),
                                get_number(ap, "beta", apw));
    }
    if (at == "polynomial") {
      only_keys(ap, {"nu", "beta", "gamma"}, apw);
      return Activation::polynomial(get_number(ap, "nu", apw),
                                    get_number(ap, "beta", apw),
                                    get_number(ap, "gamma", apw));
    }
    if (at == "tabulated") {
      only_keys(ap, {"x", "y", "slope"}, apw);
      return Activation(TabulatedActivation{get_array(ap, "x", apw),
                                            get_array(ap, "y", apw),
                                            get_number(ap, "slope", apw)});
    }
    throw ConfigError("unknown activation type '" + at + "'", aw + "/type");
  };
  std::optional<MemoryKernel> kernel;
  try {
    kernel.emplace(build_kernel());
  } catch (const DomainError &e) {
    throw ConfigError(std::string("invalid kernel: ") + e.what(), kw);
  }
  try {
    return ModelParams{*kernel, build_activation()};
  } catch (const DomainError &e) {
    throw ConfigError(std::string("invalid activation: ") + e.what(), aw);
  }
}

std::string model_hash(const ModelParams &m) {
  return hex64(fnv1a64(model_to_json(m).dump()));
}

Json state_to_json(const InterArrivalState &x) {
  return Json{{"gaps", x.gaps()}, {"tail_infinite", x.tail_infinite()}};
}

InterArrivalState state_from_json(const Json &j, const std::string &where) {
  only_keys(j, {"gaps", "tail_infinite"}, where);
  const std::vector<double> gaps =
      j.contains("gaps") ? get_array(j, "gaps", where) : std::vector<double>{};
  bool tail = true;
  if (j.contains("tail_infinite")) {
    if (!j.at("tail_infinite").is_boolean())
      throw ConfigError("'tail_infinite' must be a boolean",
                        where + "/tail_infinite");
    tail = j.at("tail_infinite").get<bool>();
  }
  try {
    return InterArrivalState(gaps, tail);
  } catch (const DomainError &e) {
    throw ConfigError(std::string("invalid state: ") + e.what(), where);
  }
}

Json test_result_to_json(const stats::TestResult &r) {
  Json j{{"statistic", r.statistic}, {"p_value", r.p_value}, {"n", r.n}};
  if (r.n2 > 0) j["n2"] = r.n2;
  return j;
}

std::string dump(const Json &j) { return j.dump(2) + "\n"; }

CsvTable path_to_csv(const PointPath &p, const std::string &hash,
                     std::uint64_t seed) {
  CsvTable t;
  t.comment("model_hash=" + hash + ",seed=" + std::to_string(seed) +
            ",status=" + path_status_name(p.status));
  t.header({"n", "T_n", "X_n", "E_n"});
  for (std::size_t i = 0; i < p.size(); ++i) {
    t.cell(static_cast<std::uint64_t>(i + 1))
        .cell(p.times[i])
        .cell(p.gaps[i])
        .cell(p.e_used[i]);
    t.end_row();
  }
  return t;
}

void write_file(const std::filesystem::path &path, const std::string &bytes) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec)
      throw IoError("cannot create directory " +
                    path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace hawkes::io
