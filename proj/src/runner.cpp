#include "hawkes/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "hawkes/error.hpp"
#include "hawkes/expmem.hpp"
#include "hawkes/linear.hpp"
#include "hawkes/parallel.hpp"
#include "hawkes/simulator.hpp"
#include "hawkes/stats.hpp"
#include "hawkes/validation.hpp"

namespace hawkes::runner {

namespace {

using io::CsvTable;
using io::Json;

std::string replica_name(const std::string &stem, std::size_t r,
                         const std::string &ext) {
  return stem + "_r" + std::to_string(r) + ext;
}

Json mean_json(const std::vector<double> &x) {
  if (x.size() < 2) return Json{{"n", x.size()}};
  return Json{{"n", x.size()},
              {"mean", stats::mean(x)},
              {"standard_error", stats::standard_error(x)}};
}

// Stationary mean gap (1 - alpha beta) / nu for affine models.
std::optional<double> affine_mean_gap(const ModelParams &m) {
  const auto *a = std::get_if<AffineActivation>(&m.activation.variant());
  if (!a || !(m.kernel.alpha() * a->beta < 1.0)) return std::nullopt;
  return (1.0 - m.kernel.alpha() * a->beta) / a->nu;
}

std::vector<OutputFile> simulate_replica(const config::ExperimentConfig &cfg,
                                         std::size_t r) {
  const ModelParams &model = *cfg.model;
  const Json &p = cfg.params;
  const InterArrivalState x0 =
      io::state_from_json(p.at("initial_state"), "/params/initial_state");
  SimConfig sc;
  sc.seed = cfg.seed;
  sc.stream = r;
  sc.max_events = p.at("n_events").get<std::size_t>();
  if (!p.at("horizon").is_null()) sc.horizon = p.at("horizon").get<double>();
  sc.inversion_tol = p.at("inversion_tol").get<double>();
  sc.min_gap = p.at("min_gap").get<double>();
  const PointPath path = simulate(x0, model, sc);
  const std::string hash = io::model_hash(model);

  std::vector<OutputFile> out;
  out.push_back({replica_name("path", r, ".csv"),
                 io::path_to_csv(path, hash, cfg.seed).str()});

  Json rep{{"replica", r},
           {"status", path_status_name(path.status)},
           {"n_events", path.size()},
           {"gaps", mean_json(path.gaps)}};
  if (path.size() > 0) rep["final_time"] = path.times.back();
  out.push_back({replica_name("report_path", r, ".json"), io::dump(rep)});
  if (p.at("check_compensator").get<bool>() && path.size() >= 10) {
    Json comp{{"replica", r}};
    try {
      const auto inc = compensator_increments(
          path, x0, model, sc.inversion_tol, p.at("eps_tail").get<double>());
      comp["integrity"] = "ok";
      comp["ks_exp1"] = io::test_result_to_json(
          stats::ks_one_sample(inc, stats::exponential_cdf(1.0)));
      comp["lag1_autocorrelation"] = stats::lag1_autocorrelation(inc);
      comp["lag1_threshold"] = 3.0 / std::sqrt(static_cast<double>(inc.size()));
    } catch (const IntegrityError &e) {
      comp["integrity"] = e.what();
    }
    out.push_back(
        {replica_name("report_compensator", r, ".json"), io::dump(comp)});
  }
  if (!p.at("random_walk_margin").is_null() && x0.is_empty()) {
    Json rw_json{{"replica", r}};
    try {
      const RandomWalkCheck rw = random_walk_bound_check(
          path, model, p.at("random_walk_margin").get<double>(),
          sc.inversion_tol);
      rw_json["holds"] = rw.holds;
      rw_json["violations"] = rw.violations;
      rw_json["first_violation"] = rw.first_violation;
      rw_json["max_excess"] = rw.max_excess;
    } catch (const UnsupportedError &e) {
      rw_json["error"] = e.what();
    }
    out.push_back(
        {replica_name("report_random_walk", r, ".json"), io::dump(rw_json)});
  }
  return out;
}

std::vector<OutputFile> linear_replica(const config::ExperimentConfig &cfg,
                                       std::size_t r) {
  const ModelParams &model = *cfg.model;
  const Json &p = cfg.params;
  linear::BackwardOptions opt;
  opt.k = p.at("k").get<std::size_t>();
  opt.tol = p.at("tol").get<double>();
  opt.depth_cap = p.at("depth_cap").get<std::size_t>();
  opt.inversion_tol = p.at("inversion_tol").get<double>();
  const std::size_t n = p.at("n_samples").get<std::size_t>();

  CsvTable csv;
  csv.comment("backward-coupling samples of the stationary gap sequence");
  std::vector<std::string> cols{"sample", "depth", "converged", "residual"};
  for (std::size_t k = 1; k <= opt.k; ++k) cols.push_back("Y_" + std::to_string(k));
  cols.push_back("I_est");
  cols.push_back("I_tail_error");
  csv.header(cols);
  std::vector<double> first;
  bool monotone = true, converged = true;
  double max_increase = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    CounterRng rng = CounterRng(cfg.seed, r).split(i);
    const auto s = linear::backward_sample(model, opt, rng);
    const auto est = linear::stationary_intensity(s, model.kernel);
    csv.cell(static_cast<std::uint64_t>(i))
        .cell(static_cast<std::uint64_t>(s.depth_used))
        .cell(std::string(s.converged ? "1" : "0"))
        .cell(s.residual);
    for (double y : s.prefix) csv.cell(y);
    csv.cell(est.value).cell(est.tail_error);
    csv.end_row();
    first.push_back(s.prefix.front());
    monotone = monotone && s.monotone;
    converged = converged && s.converged;
    max_increase = std::max(max_increase, s.max_increase);
  }
  Json rep{{"replica", r},
           {"first_coordinate", mean_json(first)},
           {"all_monotone", monotone},
           {"all_converged", converged},
           {"max_increase_in_depth", max_increase}};
  if (const auto target = affine_mean_gap(model); target && first.size() >= 2) {
    const double se = stats::standard_error(first);
    rep["target_mean"] = *target;
    rep["z_score"] = se > 0 ? (stats::mean(first) - *target) / se : 0.0;
  }
  return {{replica_name("backward_samples", r, ".csv"), csv.str()},
          {replica_name("report_stationary_mean", r, ".json"), io::dump(rep)}};
}

std::vector<OutputFile> cesaro_replica(const config::ExperimentConfig &cfg,
                                       std::size_t r) {
  const Json &p = cfg.params;
  const auto checkpoints = p.at("checkpoints").get<std::vector<std::size_t>>();
  const auto rep = linear::cesaro_diagnostic(
      *cfg.model, checkpoints, p.at("k").get<std::size_t>(), cfg.seed, r,
      p.at("inversion_tol").get<double>());
  CsvTable q;
  q.comment("quantiles of Cesaro-averaged coordinate laws of the empty-start "
            "chain");
  q.header({"checkpoint", "coordinate", "p", "quantile"});
  for (std::size_t c = 0; c < rep.checkpoints.size(); ++c)
    for (std::size_t k = 0; k < rep.quantiles[c].size(); ++k)
      for (std::size_t j = 0; j < rep.probs.size(); ++j) {
        q.cell(static_cast<std::uint64_t>(rep.checkpoints[c]))
            .cell(static_cast<std::uint64_t>(k + 1))
            .cell(rep.probs[j])
            .cell(rep.quantiles[c][k][j]);
        q.end_row();
      }
  CsvTable w;
  w.comment("W1 distance of the first-coordinate Cesaro law between "
            "successive checkpoints (stabilisation of the averages)");
  w.header({"n", "W1"});
  for (std::size_t c = 0; c < rep.w1.size(); ++c) {
    w.cell(static_cast<std::uint64_t>(rep.checkpoints[c + 1])).cell(rep.w1[c]);
    w.end_row();
  }
  Json j{{"replica", r},
         {"checkpoints", rep.checkpoints},
         {"first_coordinate_mean", rep.first_mean},
         {"w1", rep.w1}};
  if (const auto target = affine_mean_gap(*cfg.model)) j["target_mean"] = *target;
  return {{replica_name("cesaro_quantiles", r, ".csv"), q.str()},
          {replica_name("cesaro_w1", r, ".csv"), w.str()},
          {replica_name("report_cesaro", r, ".json"), io::dump(j)}};
}

double exponential_scale(const ModelParams &m, const char *what) {
  if (!m.kernel.is_exponential())
    throw ConfigError(std::string(what) + " needs an exponential kernel",
                      "/model/kernel/type");
  return m.kernel.alpha();
}

std::vector<OutputFile> expmem_replica(const config::ExperimentConfig &cfg,
                                       std::size_t r) {
  const ModelParams &model = *cfg.model;
  const Json &p = cfg.params;
  const double alpha = exponential_scale(model, "expmem-stationary");
  const double tol = p.at("tol").get<double>();
  CounterRng rng(cfg.seed, r);
  const auto zp = expmem::stationary_z(model.activation, alpha,
                                       p.at("n_burn").get<std::size_t>(),
                                       p.at("n_keep").get<std::size_t>(), rng,
                                       tol);
  CsvTable csv;
  csv.comment("exponential-memory chain after burn-in: Z_n and the gap "
              "X_{n+1} it drives");
  csv.header({"n", "Z_n", "X_next", "E_next"});
  for (std::size_t i = 0; i < zp.gaps.size(); ++i) {
    csv.cell(static_cast<std::uint64_t>(i))
        .cell(zp.z[i])
        .cell(zp.gaps[i])
        .cell(zp.e[i]);
    csv.end_row();
  }
  const auto palm = expmem::palm_gaps_from_z(zp.z, zp.e, model.activation,
                                             alpha, tol);
  Json rep{{"replica", r},
           {"gaps", mean_json(palm)},
           {"z", mean_json(zp.z)},
           {"beta_e", beta_e(model.activation)}};
  if (palm.size() >= 20) {
    const std::size_t half = palm.size() / 2;
    rep["ks_first_vs_second_half"] = io::test_result_to_json(stats::ks_two_sample(
        std::vector<double>(palm.begin(), palm.begin() + half),
        std::vector<double>(palm.begin() + half, palm.end())));
  }
  if (zp.e.size() >= 3)
    rep["lag1_autocorrelation_increments"] = stats::lag1_autocorrelation(zp.e);
  if (const auto target = affine_mean_gap(model)) rep["target_mean"] = *target;
  return {{replica_name("z_series", r, ".csv"), csv.str()},
          {replica_name("report_expmem", r, ".json"), io::dump(rep)}};
}

std::vector<OutputFile> transient_replica(const config::ExperimentConfig &cfg,
                                          std::size_t r) {
  const ModelParams &model = *cfg.model;
  const Json &p = cfg.params;
  const double alpha = exponential_scale(model, "transient-scaling");
  const auto *poly =
      std::get_if<PolynomialActivation>(&model.activation.variant());
  if (!poly || poly->gamma < 2.0)
    throw ConfigError("transient-scaling needs a polynomial activation with "
                      "gamma >= 2",
                      "/model/activation");
  CounterRng rng(cfg.seed, r);
  const auto rep = expmem::transient_experiment(
      poly->gamma, poly->nu, poly->beta, alpha,
      p.at("n_events").get<std::size_t>(), rng, p.at("tol").get<double>(),
      p.at("windows").get<std::size_t>());

  CsvTable ratio;
  ratio.comment("ratio law Z_n / n -> 1 in the superlinear regime");
  ratio.header({"n", "Z_n", "ratio"});
  for (std::size_t n = 1; n < rep.z.size(); ++n) {
    ratio.cell(static_cast<std::uint64_t>(n))
        .cell(rep.z[n])
        .cell(rep.z[n] / static_cast<double>(n));
    ratio.end_row();
  }
  CsvTable rescaled;
  rescaled.comment("rescaled gaps beta^gamma n^gamma X_{n+1} over the last "
                   "quartile, asymptotically Exp(1)");
  rescaled.header({"n", "rescaled_gap"});
  for (std::size_t j = 0; j < rep.rescaled_gaps.size(); ++j) {
    rescaled.cell(static_cast<std::uint64_t>(rep.rescaled_index[j]))
        .cell(rep.rescaled_gaps[j]);
    rescaled.end_row();
  }
  const std::size_t bins = p.at("histogram_bins").get<std::size_t>();
  const double upper = 5.0, width = upper / static_cast<double>(bins);
  std::vector<double> counts(bins, 0.0);
  for (double g : rep.rescaled_gaps) {
    const auto b = static_cast<std::size_t>(g / width);
    if (b < bins) counts[b] += 1.0;
  }
  CsvTable hist;
  hist.comment("histogram of rescaled gaps against the Exp(1) limit density");
  hist.header({"bin_left", "density", "exp1_density"});
  const double total = static_cast<double>(rep.rescaled_gaps.size());
  for (std::size_t b = 0; b < bins; ++b) {
    const double left = width * static_cast<double>(b);
    hist.cell(left)
        .cell(counts[b] / (total * width))
        .cell((std::exp(-left) - std::exp(-(left + width))) / width);
    hist.end_row();
  }
  Json j2{{"replica", r},
          {"gamma", rep.gamma},
          {"beta", rep.beta},
          {"nu", rep.nu},
          {"alpha", rep.alpha},
          {"n_events", rep.n_events},
          {"final_ratio", rep.final_ratio},
          {"total_time", rep.total_time},
          {"rescaled_count", rep.rescaled_gaps.size()},
          {"rescaled_mean", stats::mean(rep.rescaled_gaps)},
          {"ks_stat", rep.ks.statistic},
          {"ks_p", rep.ks.p_value},
          {"windows", rep.windows},
          {"count_dispersion", rep.dispersion.statistic},
          {"count_dispersion_p", rep.dispersion.p_value}};
  return {{replica_name("ratio_series", r, ".csv"), ratio.str()},
          {replica_name("rescaled_gaps", r, ".csv"), rescaled.str()},
          {replica_name("rescaled_hist", r, ".csv"), hist.str()},
          {replica_name("report_transient", r, ".json"), io::dump(j2)}};
}

struct PiecewiseRate {
  std::vector<double> breaks, values;
  double operator()(double u) const {
    const auto i = static_cast<std::size_t>(
        std::upper_bound(breaks.begin(), breaks.end(), u) - breaks.begin());
    return values[i];
  }
  double cumulative(double t) const {
    double acc = 0.0, left = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double right = i < breaks.size() ? breaks[i] : t;
      if (t <= right) return acc + values[i] * (t - left);
      acc += values[i] * (right - left);
      left = right;
    }
    return acc;
  }
};

PiecewiseRate rate_from_json(const Json &j) {
  return PiecewiseRate{j.at("breaks").get<std::vector<double>>(),
                       j.at("values").get<std::vector<double>>()};
}

std::vector<OutputFile> couple_replica(const config::ExperimentConfig &cfg,
                                       std::size_t r) {
  const Json &p = cfg.params;
  CounterRng rng(cfg.seed, r);
  const std::size_t trials = p.at("trials").get<std::size_t>();
  if (p.at("mode").get<std::string>() == "clocks") {
    const PiecewiseRate f = rate_from_json(p.at("f"));
    const PiecewiseRate g = rate_from_json(p.at("g"));
    const linear::RateFunction rf{f, f.breaks}, rg{g, g.breaks};
    std::vector<double> tf, tg;
    std::size_t mismatch = 0;
    for (std::size_t i = 0; i < trials; ++i) {
      const auto c = linear::couple_clocks(rf, rg, rng);
      mismatch += c.coupled ? 0 : 1;
      tf.push_back(c.tau_f);
      tg.push_back(c.tau_g);
    }
    // L1 distance: both rates are piecewise constant.
    std::vector<double> marks = f.breaks;
    marks.insert(marks.end(), g.breaks.begin(), g.breaks.end());
    std::sort(marks.begin(), marks.end());
    double l1 = 0.0, left = 0.0;
    for (double m : marks) {
      l1 += std::abs(f(0.5 * (left + m)) - g(0.5 * (left + m))) * (m - left);
      left = m;
    }
    const double tail_gap = std::abs(f.values.back() - g.values.back());
    if (tail_gap > 0.0) l1 = std::numeric_limits<double>::infinity();
    const double rate = static_cast<double>(mismatch) / static_cast<double>(trials);
    Json rep{{"replica", r},
             {"mode", "clocks"},
             {"trials", trials},
             {"mismatch_rate", rate},
             {"standard_error",
              std::sqrt(rate * (1.0 - rate) / static_cast<double>(trials))},
             {"l1_bound", l1}};
    auto finite = [](std::vector<double> v) {
      v.erase(std::remove_if(v.begin(), v.end(),
                             [](double x) { return !std::isfinite(x); }),
              v.end());
      return v;
    };
    const auto ff = finite(tf), gg = finite(tg);
    if (ff.size() >= 10)
      rep["ks_tau_f"] = io::test_result_to_json(stats::ks_one_sample(
          ff, [&f](double t) { return -std::expm1(-f.cumulative(t)); }));
    if (gg.size() >= 10)
      rep["ks_tau_g"] = io::test_result_to_json(stats::ks_one_sample(
          gg, [&g](double t) { return -std::expm1(-g.cumulative(t)); }));
    return {{replica_name("report_couple", r, ".json"), io::dump(rep)}};
  }
  if (!cfg.model)
    throw ConfigError("couple in chains mode needs a model", "/model");
  linear::CouplingOptions opt;
  opt.trials = trials;
  opt.max_steps = p.at("max_steps").get<std::size_t>();
  opt.margin = p.at("margin").get<double>();
  const InterArrivalState z(p.at("z_gaps").get<std::vector<double>>(), true);
  const auto rep = linear::coupling_bound_estimate(z, *cfg.model, opt, rng);
  Json j{{"replica", r},
         {"mode", "chains"},
         {"z", io::state_to_json(z)},
         {"n_trials", rep.n_trials},
         {"n_coupled", rep.n_coupled},
         {"empirical_rate", rep.empirical_rate},
         {"standard_error", rep.standard_error},
         {"bound_value", rep.bound_value},
         {"lipschitz", rep.lipschitz},
         {"d1", rep.d1},
         {"d2", rep.d2}};
  return {{replica_name("report_couple", r, ".json"), io::dump(j)}};
}

ExperimentOutput run_validate(const config::ExperimentConfig &cfg,
                              const LogFn &log) {
  validation::Options opt;
  opt.quick = cfg.params.at("quick").get<bool>();
  const auto results = validation::run_all(opt, [&](const auto &res) {
    if (log) log(validation::format_line(res));
  });
  CsvTable csv;
  csv.header({"criterion", "name", "passed", "detail"});
  Json arr = Json::array();
  bool all = true;
  for (const auto &res : results) {
    std::string detail = res.detail;
    std::replace(detail.begin(), detail.end(), ',', ';');
    csv.cell(static_cast<std::uint64_t>(res.id))
        .cell(res.name)
        .cell(std::string(res.passed ? "1" : "0"))
        .cell(detail);
    csv.end_row();
    arr.push_back({{"criterion", res.id},
                   {"name", res.name},
                   {"passed", res.passed},
                   {"detail", res.detail}});
    all = all && res.passed;
  }
  ExperimentOutput out;
  out.files.push_back({"validation.csv", csv.str()});
  out.files.push_back(
      {"report_validation.json",
       io::dump(Json{{"quick", opt.quick}, {"all_passed", all}, {"criteria", arr}})});
  out.validation_failed = !all;
  return out;
}

} // namespace

const char *toolkit_version() noexcept { return HAWKES_VERSION; }

ExperimentOutput run_experiment(const config::ExperimentConfig &cfg,
                                const LogFn &log) {
  if (cfg.experiment == "validate") return run_validate(cfg, log);
  using ReplicaFn =
      std::vector<OutputFile> (*)(const config::ExperimentConfig &, std::size_t);
  ReplicaFn fn = nullptr;
  if (cfg.experiment == "simulate") fn = simulate_replica;
  else if (cfg.experiment == "stationary-linear") fn = linear_replica;
  else if (cfg.experiment == "cesaro") fn = cesaro_replica;
  else if (cfg.experiment == "expmem-stationary") fn = expmem_replica;
  else if (cfg.experiment == "transient-scaling") fn = transient_replica;
  else if (cfg.experiment == "couple") fn = couple_replica;
  else throw ConfigError("unknown experiment '" + cfg.experiment + "'", "/experiment");
  std::vector<std::vector<OutputFile>> per(cfg.replicas);
  parallel_for(cfg.replicas, [&](std::size_t r) { per[r] = fn(cfg, r); });
  ExperimentOutput out;
  for (auto &files : per)
    for (auto &f : files) out.files.push_back(std::move(f));
  if (log)
    log("experiment " + cfg.experiment + ": " +
        std::to_string(out.files.size()) + " files from " +
        std::to_string(cfg.replicas) + " replica(s)");
  return out;
}

void write_outputs(const std::filesystem::path &dir,
                   const config::ExperimentConfig &cfg,
                   const std::vector<OutputFile> &files) {
  Json listing = Json::array();
  std::vector<const OutputFile *> sorted;
  for (const auto &f : files) sorted.push_back(&f);
  std::sort(sorted.begin(), sorted.end(),
            [](const OutputFile *a, const OutputFile *b) { return a->name < b->name; });
  for (const OutputFile *f : sorted) {
    io::write_file(dir / f->name, f->bytes);
    listing.push_back({{"path", f->name},
                       {"bytes", f->bytes.size()},
                       {"fnv1a64", io::hex64(io::fnv1a64(f->bytes))}});
  }
  Json resolved = config::to_json(cfg);
  resolved.erase("output_dir");
  Json manifest{{"toolkit_version", toolkit_version()},
                {"config", resolved},
                {"files", listing}};
  manifest["model_hash"] =
      cfg.model ? Json(io::model_hash(*cfg.model)) : Json(nullptr);
  io::write_file(dir / "manifest.json", io::dump(manifest));
}

namespace {

std::string resolve_out_dir(const std::optional<std::string> &out,
                            const std::string &fallback) {
  if (out) return *out;
  const char *env = std::getenv("HAWKES_OUT");
  return env && *env ? std::string(env) : fallback;
}

void execute(config::ExperimentConfig &cfg, RunOutcome &outcome,
             const LogFn &log) {
  const ExperimentOutput out = run_experiment(cfg, log);
  write_outputs(cfg.output_dir, cfg, out.files);
  if (out.validation_failed) {
    outcome.exit_code = kExitValidation;
    outcome.message = "validation suite reported failures";
  }
}

} // namespace

RunOutcome run_validation(bool quick, const std::optional<std::string> &out,
                          const LogFn &log) {
  RunOutcome outcome;
  config::ExperimentConfig cfg;
  cfg.experiment = "validate";
  cfg.params = config::resolve_params("validate", Json{{"quick", quick}});
  cfg.output_dir = resolve_out_dir(out, cfg.output_dir);
  outcome.out_dir = cfg.output_dir;
  try {
    execute(cfg, outcome, log);
  } catch (const std::exception &e) {
    outcome.exit_code = kExitRuntime;
    outcome.message = e.what();
  }
  return outcome;
}

RunOutcome run_config_file(const std::string &config_path,
                           const Overrides &overrides, const LogFn &log) {
  RunOutcome outcome;
  std::string text;
  try {
    text = io::read_file(config_path);
  } catch (const IoError &e) {
    outcome.exit_code = kExitConfig;
    outcome.message = config_path + ": " + e.what();
    return outcome;
  }
  config::ExperimentConfig cfg;
  try {
    cfg = config::parse(text);
  } catch (const ConfigError &e) {
    outcome.exit_code = kExitConfig;
    outcome.message = config_path + ":" +
                      std::to_string(config::locate_line(text, e.pointer())) +
                      ": " + e.what();
    return outcome;
  }
  if (overrides.seed) cfg.seed = *overrides.seed;
  if (overrides.replicas) {
    if (*overrides.replicas == 0) {
      outcome.exit_code = kExitConfig;
      outcome.message = "--replicas must be a positive integer";
      return outcome;
    }
    cfg.replicas = *overrides.replicas;
  }
  cfg.output_dir = resolve_out_dir(overrides.out, cfg.output_dir);
  outcome.out_dir = cfg.output_dir;
  try {
    execute(cfg, outcome, log);
  } catch (const ConfigError &e) {
    outcome.exit_code = kExitConfig;
    outcome.message = config_path + ":" +
                      std::to_string(config::locate_line(text, e.pointer())) +
                      ": " + e.what();
  } catch (const std::exception &e) {
    outcome.exit_code = kExitRuntime;
    outcome.message = e.what();
  }
  return outcome;
}

} // namespace hawkes::runner
