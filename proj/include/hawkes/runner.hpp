#ifndef HAWKES_RUNNER_HPP
#define HAWKES_RUNNER_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hawkes/config.hpp"

namespace hawkes::runner {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitRuntime = 3;

struct OutputFile {
  std::string name; // relative to the output directory
  std::string bytes;
};

struct ExperimentOutput {
  std::vector<OutputFile> files;
  bool validation_failed = false;
};

using LogFn = std::function<void(const std::string &)>;

// Runs one configured experiment in memory. Replica r draws from stream
// (seed, r); replicas may run concurrently and are merged by index.
ExperimentOutput run_experiment(const config::ExperimentConfig &cfg,
                                const LogFn &log = {});

// Writes the files plus manifest.json (resolved config, model hash, toolkit
// version, and every file with its FNV-1a content hash).
void write_outputs(const std::filesystem::path &dir,
                   const config::ExperimentConfig &cfg,
                   const std::vector<OutputFile> &files);

struct Overrides {
  std::optional<std::string> out;
  std::optional<std::uint64_t> replicas;
  std::optional<std::uint64_t> seed;
};

struct RunOutcome {
  int exit_code = kExitOk;
  std::string message; // error text for non-zero exits
  std::filesystem::path out_dir;
};

// Output directory precedence: overrides.out, then $HAWKES_OUT, then the
// config's output_dir. Config errors are reported as "<path>:<line>: ...".
RunOutcome run_config_file(const std::string &config_path,
                           const Overrides &overrides, const LogFn &log = {});

// Acceptance suite as the "validate" experiment, written to `out`, then
// $HAWKES_OUT, then "hawkes_out".
RunOutcome run_validation(bool quick, const std::optional<std::string> &out,
                          const LogFn &log = {});

const char *toolkit_version() noexcept;

} // namespace hawkes::runner

#endif // HAWKES_RUNNER_HPP
