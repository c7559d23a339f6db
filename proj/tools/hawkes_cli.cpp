#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hawkes/hawkes.h"

namespace {

void print_line(const char *line, void *) {
  std::fprintf(stderr, "%s\n", line);
  std::fflush(stderr);
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Nonlinear Hawkes process toolkit"};
  app.set_version_flag("--version", std::string(hawkes_version()));
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out;
  std::optional<std::uint64_t> replicas, seed;
  auto *run = app.add_subcommand("run", "Run an experiment config");
  run->add_option("config", config_path, "Experiment config (JSON)")
      ->required();
  run->add_option("--out", out, "Output directory");
  run->add_option("--replicas", replicas, "Number of replicas")
      ->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "Master seed");

  bool quick = false;
  std::optional<std::string> vout;
  auto *validate = app.add_subcommand("validate", "Run the acceptance suite");
  validate->add_flag("--quick", quick, "Reduced sample sizes");
  validate->add_option("--out", vout, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  int code = 0;
  if (*run) {
    code = hawkes_run_config(config_path.c_str(), out ? out->c_str() : nullptr,
                             replicas.value_or(0), seed ? 1 : 0,
                             seed.value_or(0), print_line, nullptr);
  } else {
    code = hawkes_validate(quick ? 1 : 0, vout ? vout->c_str() : nullptr,
                           print_line, nullptr);
  }
  if (code != 0 && *hawkes_last_error())
    std::fprintf(stderr, "hawkes: %s\n", hawkes_last_error());
  return code;
}
