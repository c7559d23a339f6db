#ifndef HAWKES_IO_HPP
#define HAWKES_IO_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "hawkes/history.hpp"
#include "hawkes/model.hpp"
#include "hawkes/simulator.hpp"
#include "hawkes/stats.hpp"

namespace hawkes::io {

using Json = nlohmann::json;

// Shortest round-trip decimal form; "inf", "-inf" and "nan" otherwise.
std::string format_double(double v);

std::uint64_t fnv1a64(const std::string &bytes);
std::string hex64(std::uint64_t v);

// Rows are joined with ',' and terminated with '\n'. Comment lines start
// with '#'.
class CsvTable {
public:
  void comment(const std::string &text);
  void header(const std::vector<std::string> &cols);
  CsvTable &cell(double v);
  CsvTable &cell(std::uint64_t v);
  CsvTable &cell(const std::string &v);
  void end_row();
  const std::string &str() const noexcept { return out_; }

private:
  std::string out_;
  bool row_open_ = false;
};

Json model_to_json(const ModelParams &m);
// Throws ConfigError carrying the JSON pointer (relative to `where`) of the
// offending entry.
ModelParams model_from_json(const Json &j, const std::string &where = "");
// FNV-1a of the canonical (sorted-key, compact) model JSON.
std::string model_hash(const ModelParams &m);

Json state_to_json(const InterArrivalState &x);
InterArrivalState state_from_json(const Json &j, const std::string &where = "");

// Rejects keys of object j outside `keys`.
void only_keys(const Json &j, std::initializer_list<const char *> keys,
               const std::string &where);

Json test_result_to_json(const stats::TestResult &r);

// Canonical text of a JSON document: sorted keys, two-space indent, LF.
std::string dump(const Json &j);

CsvTable path_to_csv(const PointPath &p, const std::string &model_hash,
                     std::uint64_t seed);

void write_file(const std::filesystem::path &path, const std::string &bytes);
std::string read_file(const std::filesystem::path &path);

} // namespace hawkes::io

#endif // HAWKES_IO_HPP
