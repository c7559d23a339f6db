#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "hawkes/config.hpp"
#include "hawkes/error.hpp"
#include "hawkes/io.hpp"
#include "hawkes/runner.hpp"

using namespace hawkes;

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.125, -2.5})
    CHECK(std::stod(io::format_double(v)) == v);
  CHECK(io::format_double(INFINITY) == "inf");
  CHECK(io::format_double(-INFINITY) == "-inf");
  CHECK(io::format_double(NAN) == "nan");
}

TEST_CASE("CSV dialect") {
  io::CsvTable t;
  t.comment("series");
  t.header({"a", "b"});
  t.cell(0.5).cell(std::uint64_t{3});
  t.end_row();
  CHECK(t.str() == "# series\na,b\n0.5,3\n");
}

TEST_CASE("FNV-1a reference vectors") {
  CHECK(io::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(io::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(io::hex64(0xabcULL) == "0000000000000abc");
}

TEST_CASE("model JSON round trip and hash") {
  const auto j = io::Json::parse(R"({
    "kernel": {"type": "tabulated", "params": {"t": [0, 1, 2], "h": [1, 0.5, 0]}},
    "activation": {"type": "polynomial", "params": {"nu": 1, "beta": 2, "gamma": 0.5}}})");
  const ModelParams m = io::model_from_json(j);
  CHECK(m.kernel.alpha() == doctest::Approx(1.0));
  const ModelParams back = io::model_from_json(io::model_to_json(m));
  CHECK(io::model_hash(back) == io::model_hash(m));
  CHECK(io::model_hash(m).size() == 16);
  const ModelParams other{MemoryKernel::exponential(1.0),
                          Activation::affine(1.0, 0.5)};
  CHECK(io::model_hash(other) != io::model_hash(m));
}

TEST_CASE("model errors carry a JSON pointer") {
  const auto j = io::Json::parse(R"({
    "kernel": {"type": "exponential", "params": {"scale": -1}},
    "activation": {"type": "affine", "params": {"nu": 1, "beta": 0.5}}})");
  try {
    io::model_from_json(j, "/model");
    FAIL("expected ConfigError");
  } catch (const ConfigError &e) {
    CHECK(e.pointer().rfind("/model/kernel", 0) == 0);
  }
}

namespace {

std::string config_error_line(const std::string &text) {
  try {
    config::parse(text);
  } catch (const ConfigError &e) {
    return std::to_string(config::locate_line(text, e.pointer())) + ": " +
           e.what();
  }
  return "";
}

const char *kGood = R"({
  "experiment": "simulate",
  "seed": 42,
  "model": {
    "kernel": {"type": "exponential", "params": {"scale": 1}},
    "activation": {"type": "affine", "params": {"nu": 2, "beta": 0}}
  },
  "params": {"n_events": 100}
})";

} // namespace

TEST_CASE("config parsing fills defaults") {
  const auto cfg = config::parse(kGood);
  CHECK(cfg.experiment == "simulate");
  CHECK(cfg.seed == 42);
  CHECK(cfg.replicas == 1);
  CHECK(cfg.params.at("n_events") == 100);
  CHECK(cfg.params.at("inversion_tol") == 1e-10);
  CHECK(cfg.params.at("horizon").is_null());
  const auto v = config::parse(R"({"experiment": "validate", "seed": 0})");
  CHECK(v.params.at("quick") == false);
  CHECK_FALSE(v.model);
}

TEST_CASE("config errors are line-anchored") {
  std::string bad = kGood;
  bad.replace(bad.find("\"n_events\""), 10, "\"n_evnts\"");
  const std::string msg = config_error_line(bad);
  CHECK(msg.rfind("8: ", 0) == 0);
  CHECK(msg.find("n_evnts") != std::string::npos);

  std::string neg = kGood;
  neg.replace(neg.find("\"scale\": 1"), 10, "\"scale\": 0");
  CHECK(config_error_line(neg).rfind("5: ", 0) == 0);

  CHECK(config_error_line("{\"experiment\": \"simulate\",\n\"model\": {}}")
            .find("seed") != std::string::npos);
  CHECK(config_error_line("{\n\"seed\": 1,\n\"experiment\": \"warp\"}")
            .rfind("3: ", 0) == 0);
  // Syntax errors report the line of the offending byte.
  CHECK(config_error_line("{\n\"seed\": 1,\n\"experiment\" \"x\"}")
            .rfind("3: ", 0) == 0);
  CHECK(config_error_line("{\"seed\": 1, \"experiment\": \"simulate\", "
                          "\"bogus\": 1}")
            .find("bogus") != std::string::npos);
}

TEST_CASE("runner output and manifest") {
  const auto cfg = config::parse(kGood);
  const auto out = runner::run_experiment(cfg);
  REQUIRE(out.files.size() >= 2);
  CHECK(out.files[0].name == "path_r0.csv");
  const auto dir = std::filesystem::temp_directory_path() / "hawkes_test_runner";
  std::filesystem::remove_all(dir);
  runner::write_outputs(dir, cfg, out.files);
  const auto manifest = io::Json::parse(io::read_file(dir / "manifest.json"));
  CHECK(manifest.at("model_hash") == io::model_hash(*cfg.model));
  CHECK(manifest.at("toolkit_version") == runner::toolkit_version());
  CHECK(manifest.at("config").at("params").at("n_events") == 100);
  for (const auto &f : manifest.at("files")) {
    const std::string bytes = io::read_file(dir / f.at("path").get<std::string>());
    CHECK(f.at("fnv1a64") == io::hex64(io::fnv1a64(bytes)));
  }
  const std::string csv = io::read_file(dir / "path_r0.csv");
  CHECK(csv.find('\r') == std::string::npos);
  std::size_t rows = 0;
  for (char c : csv) rows += c == '\n';
  CHECK(rows == 102); // comment, header and 100 events
  std::filesystem::remove_all(dir);
}
