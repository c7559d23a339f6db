#ifndef HAWKES_CONFIG_HPP
#define HAWKES_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "hawkes/io.hpp"
#include "hawkes/model.hpp"

namespace hawkes::config {

// Experiment configuration file:
//   {
//     "experiment": "simulate" | "stationary-linear" | "cesaro" |
//                   "expmem-stationary" | "transient-scaling" | "couple" |
//                   "validate",
//     "seed": <non-negative integer, required>,
//     "replicas": <positive integer, default 1>,
//     "output_dir": <string, default "hawkes_out">,
//     "model": {"kernel": {...}, "activation": {...}},  (not for validate)
//     "params": {...experiment-specific, see resolve_params}
//   }
struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 0;
  std::uint64_t replicas = 1;
  std::string output_dir = "hawkes_out";
  std::optional<ModelParams> model;
  io::Json params; // resolved, defaults filled in
};

// Parses and validates a config document. Throws ConfigError carrying the
// JSON pointer of the offending entry; parse errors carry "#<byte offset>".
ExperimentConfig parse(const std::string &text);

// Fills defaults and rejects unknown or ill-typed keys for an experiment.
io::Json resolve_params(const std::string &experiment, const io::Json &params);

// Full resolved configuration as written to the manifest.
io::Json to_json(const ExperimentConfig &cfg);

// 1-based line of the entry at a JSON pointer in `text` (or of a
// "#<byte offset>" location); 0 when it cannot be located.
std::size_t locate_line(const std::string &text, const std::string &pointer);

} // namespace hawkes::config

#endif // HAWKES_CONFIG_HPP
