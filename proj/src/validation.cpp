#include "hawkes/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <unistd.h>

#include "hawkes/config.hpp"
#include "hawkes/error.hpp"
#include "hawkes/expmem.hpp"
#include "hawkes/linear.hpp"
#include "hawkes/parallel.hpp"
#include "hawkes/runner.hpp"
#include "hawkes/simulator.hpp"
#include "hawkes/stats.hpp"

namespace hawkes::validation {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

ModelParams exp_model(const Activation &act, double alpha = 1.0) {
  return ModelParams{MemoryKernel::exponential(alpha), act};
}

struct Outcome {
  bool passed = false;
  std::string detail;
  double limit_seconds = 0.0; // 0: no runtime requirement
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// 1. Constant intensity 2: gaps are Exp(2).
Outcome poisson_baseline(const Options &opt) {
  const std::size_t n = opt.quick ? 10000 : 100000;
  const ModelParams m = exp_model(Activation::affine(2.0, 0.0));
  const auto t0 = std::chrono::steady_clock::now();
  SimConfig sc;
  sc.seed = 1001;
  sc.max_events = n;
  const PointPath path = simulate(InterArrivalState(), m, sc);
  const auto inc = compensator_increments(path, InterArrivalState(), m,
                                          sc.inversion_tol);
  const double secs = seconds_since(t0);
  const double mean = stats::mean(path.gaps);
  const double se = stats::standard_error(path.gaps);
  const auto ks = stats::ks_one_sample(inc, stats::exponential_cdf(1.0));
  const bool ok = path.size() == n && std::abs(mean - 0.5) <= 3.0 * se &&
                  ks.p_value > 0.01 && secs < 10.0;
  return {ok,
          "n=" + std::to_string(path.size()) + " mean_gap=" + num(mean) +
              " se=" + num(se) + " ks_p=" + num(ks.p_value),
          10.0};
}

// 2. Compensator increments of empty-start paths are i.i.d. Exp(1).
Outcome time_rescaling(const Options &) {
  const std::size_t n = 10000;
  const std::vector<std::pair<std::string, ModelParams>> models = {
      {"affine(1,0.5)", exp_model(Activation::affine(1.0, 0.5))},
      {"poly(0.5,1,1)", exp_model(Activation::polynomial(1.0, 1.0, 0.5))}};
  bool ok = true;
  std::string detail;
  std::uint64_t seed = 2001;
  for (const auto &[name, m] : models) {
    const auto t0 = std::chrono::steady_clock::now();
    SimConfig sc;
    sc.seed = seed++;
    sc.max_events = n;
    const PointPath path = simulate(InterArrivalState(), m, sc);
    const auto inc = compensator_increments(path, InterArrivalState(), m,
                                            sc.inversion_tol);
    const double secs = seconds_since(t0);
    const auto ks = stats::ks_one_sample(inc, stats::exponential_cdf(1.0));
    const double rho = stats::lag1_autocorrelation(inc);
    const double thr = 3.0 / std::sqrt(static_cast<double>(n));
    const bool pass = path.size() == n && ks.p_value > 0.01 &&
                      std::abs(rho) < thr && secs < 60.0;
    ok = ok && pass;
    if (!detail.empty()) detail += "; ";
    detail += name + " ks_p=" + num(ks.p_value) + " lag1=" + num(rho) +
              (pass ? "" : " FAIL");
  }
  return {ok, detail + " (lag1 limit " + num(3.0 / 100.0) + ")", 60.0};
}

// 3. Mean of the first stationary gap equals (1 - alpha beta) / nu.
Outcome stationary_mean(const Options &opt) {
  struct Set {
    double nu, beta, alpha;
  };
  const std::vector<Set> sets = {{1.0, 0.5, 1.0}, {2.0, 0.25, 1.0},
                                 {1.0, 0.8, 0.5}};
  const std::size_t reps = opt.quick ? 2000 : 10000;
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  std::uint64_t seed = 3001;
  for (const Set &s : sets) {
    const ModelParams m = exp_model(Activation::affine(s.nu, s.beta), s.alpha);
    linear::BackwardOptions bo;
    std::vector<double> first(reps);
    std::vector<char> conv(reps), mono(reps);
    const CounterRng base(seed++, 0);
    parallel_for(reps, [&](std::size_t i) {
      CounterRng rng = base.split(i);
      const auto b = linear::backward_sample(m, bo, rng);
      first[i] = b.prefix.front();
      conv[i] = b.converged;
      mono[i] = b.monotone;
    });
    const double target = (1.0 - s.alpha * s.beta) / s.nu;
    const double mean = stats::mean(first);
    const double se = stats::standard_error(first);
    const bool pass = std::abs(mean - target) <= 3.0 * se;
    ok = ok && pass;
    const auto n_conv = std::count(conv.begin(), conv.end(), 1);
    const auto n_mono = std::count(mono.begin(), mono.end(), 1);
    if (!detail.empty()) detail += "; ";
    detail += "(nu=" + num(s.nu) + " beta=" + num(s.beta) +
              " alpha=" + num(s.alpha) + ") mean=" + num(mean) +
              " target=" + num(target) + " se=" + num(se) +
              " converged=" + std::to_string(n_conv) +
              " monotone=" + std::to_string(n_mono) + (pass ? "" : " FAIL");
  }
  ok = ok && seconds_since(t0) < 300.0;
  return {ok, "replicas=" + std::to_string(reps) + " " + detail, 300.0};
}

// 4. The affine dominator's gaps never exceed the nonlinear chain's gaps.
Outcome domination(const Options &opt) {
  const std::size_t seeds = opt.quick ? 20 : 100, steps = 1000;
  const double tol = 1e-10;
  const Activation act = Activation::polynomial(1.0, 1.0, 0.5);
  const MemoryKernel kernel = MemoryKernel::exponential(1.0);
  const auto dom = affine_dominator(act, 0.5, kernel.alpha());
  if (!dom) return {false, "no affine dominator", 0.0};
  std::vector<std::size_t> violations(seeds, 0);
  std::vector<double> excess(seeds, -1e300);
  parallel_for(seeds, [&](std::size_t i) {
    CounterRng rng(4001 + i, 0);
    try {
      const auto pair = linear::dominated_pair(InterArrivalState(), act, *dom,
                                               kernel, steps, rng, tol);
      excess[i] = pair.max_excess;
    } catch (const InvariantViolation &) {
      violations[i] = 1;
    }
  });
  std::size_t total = 0;
  for (auto v : violations) total += v;
  const double worst = *std::max_element(excess.begin(), excess.end());
  return {total == 0,
          "paths=" + std::to_string(seeds) + "x" + std::to_string(steps) +
              " nu0=" + num(dom->nu0) + " beta0=" + num(dom->beta0) +
              " violating_paths=" + std::to_string(total) +
              " max(Y-X)=" + num(worst) + " slack=" + num(10 * tol),
          0.0};
}

// 5. Random-walk lower bound on T_n along empty-start affine paths.
Outcome random_walk_bound(const Options &opt) {
  const std::size_t seeds = opt.quick ? 10 : 100, steps = 10000;
  const ModelParams m = exp_model(Activation::affine(1.0, 0.5));
  std::vector<std::size_t> violations(seeds, 0);
  std::vector<double> excess(seeds, 0.0);
  parallel_for(seeds, [&](std::size_t i) {
    SimConfig sc;
    sc.seed = 5001 + i;
    sc.max_events = steps;
    const PointPath path = simulate(InterArrivalState(), m, sc);
    const auto rw = random_walk_bound_check(path, m, 0.05, sc.inversion_tol);
    violations[i] = rw.violations + (path.size() == steps ? 0 : 1);
    excess[i] = rw.max_excess;
  });
  std::size_t total = 0;
  for (auto v : violations) total += v;
  return {total == 0,
          "paths=" + std::to_string(seeds) + "x" + std::to_string(steps) +
              " violations=" + std::to_string(total) + " max_excess=" +
              num(*std::max_element(excess.begin(), excess.end())),
          0.0};
}

// 6. First-gap laws agree between inversion and thinning.
Outcome inversion_vs_thinning(const Options &opt) {
  const std::size_t n = opt.quick ? 2000 : 10000;
  MemoryKernel triangle = MemoryKernel::sampled(
      [](double t) { return std::max(0.0, 1.0 - 0.5 * t); }, 2.0, 0.05);
  struct Case {
    std::string name;
    ModelParams m;
    InterArrivalState x;
  };
  const std::vector<Case> cases = {
      {"affine/empty", exp_model(Activation::affine(1.0, 0.5)), {}},
      {"affine/3 gaps", exp_model(Activation::affine(1.0, 0.5)),
       InterArrivalState({0.3, 1.2, 0.7})},
      {"poly0.5/4 gaps", exp_model(Activation::polynomial(1.0, 1.0, 0.5)),
       InterArrivalState({0.1, 0.1, 0.1, 0.1})},
      {"affine/tabulated kernel",
       ModelParams{triangle, Activation::affine(0.5, 0.8)},
       InterArrivalState({0.5, 0.25})},
      {"poly2/1 gap", exp_model(Activation::polynomial(1.0, 1.0, 2.0)),
       InterArrivalState({1.0})}};
  std::vector<double> pvals(cases.size());
  parallel_for(cases.size(), [&](std::size_t c) {
    CounterRng ri(6001 + c, 0), rt(6101 + c, 0);
    std::vector<double> inv(n), thin(n);
    for (std::size_t i = 0; i < n; ++i) {
      inv[i] = next_gap_inverse(cases[c].x, ri.exponential(), cases[c].m);
      thin[i] = next_gap_thinning(cases[c].x, rt, cases[c].m);
    }
    pvals[c] = stats::ks_two_sample(inv, thin).p_value;
  });
  bool ok = true;
  std::string detail = "N=" + std::to_string(n);
  for (std::size_t c = 0; c < cases.size(); ++c) {
    ok = ok && pvals[c] > 0.01;
    detail += "; " + cases[c].name + " p=" + num(pvals[c]);
  }
  return {ok, detail, 0.0};
}

// 7. Generic stepper, explicit-sum inversion and the Z-chain agree.
Outcome expmem_equivalence(const Options &opt) {
  const std::size_t seeds = opt.quick ? 3 : 10, steps = 1000;
  const std::vector<std::pair<std::string, Activation>> acts = {
      {"affine(1,0.5)", Activation::affine(1.0, 0.5)},
      {"poly(0.5,1,1)", Activation::polynomial(1.0, 1.0, 0.5)}};
  bool ok = true;
  std::string detail;
  for (const auto &[name, act] : acts) {
    const ModelParams m = exp_model(act);
    std::vector<double> dz(seeds, 0.0), dd(seeds, 0.0);
    parallel_for(seeds, [&](std::size_t i) {
      SimConfig sc;
      sc.seed = 7001 + i;
      sc.max_events = steps;
      const PointPath path = simulate(InterArrivalState(), m, sc);
      CounterRng rng(sc.seed, 0);
      const auto zp = expmem::simulate_z(
          expmem::z_from_state(InterArrivalState(), 1.0), steps, act, 1.0, rng);
      double worst_z = path.size() == zp.gaps.size() ? 0.0 : INFINITY;
      for (std::size_t k = 0; k < std::min(path.size(), zp.gaps.size()); ++k)
        worst_z = std::max(worst_z, std::abs(path.gaps[k] - zp.gaps[k]));
      double worst_d = 0.0;
      std::vector<double> chron;
      for (std::size_t k = 0; k < path.size(); ++k) {
        const auto x = InterArrivalState::from_chronological(chron);
        const double g = next_gap_direct(x, path.e_used[k], m);
        worst_d = std::max(worst_d, std::abs(g - path.gaps[k]));
        chron.push_back(path.gaps[k]);
      }
      dz[i] = worst_z;
      dd[i] = worst_d;
    });
    const double mz = *std::max_element(dz.begin(), dz.end());
    const double md = *std::max_element(dd.begin(), dd.end());
    const bool pass = mz < 1e-8 && md < 1e-8;
    ok = ok && pass;
    if (!detail.empty()) detail += "; ";
    detail += name + " max|generic-zchain|=" + num(mz) +
              " max|generic-direct|=" + num(md) + (pass ? "" : " FAIL");
  }
  return {ok,
          std::to_string(seeds) + " seeds x " + std::to_string(steps) +
              " steps; " + detail,
          0.0};
}

struct Piecewise {
  std::vector<double> breaks, values;
  double operator()(double u) const {
    return values[static_cast<std::size_t>(
        std::upper_bound(breaks.begin(), breaks.end(), u) - breaks.begin())];
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

struct ClockRun {
  double rate = 0.0, se = 0.0, p_f = 0.0, p_g = 0.0;
};

ClockRun run_clocks(const Piecewise &f, const Piecewise &g, std::size_t n,
                    std::uint64_t seed) {
  const linear::RateFunction rf{f, f.breaks}, rg{g, g.breaks};
  CounterRng rng(seed, 0);
  std::vector<double> tf(n), tg(n);
  std::size_t mismatch = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = linear::couple_clocks(rf, rg, rng);
    mismatch += c.coupled ? 0 : 1;
    tf[i] = c.tau_f;
    tg[i] = c.tau_g;
  }
  ClockRun r;
  r.rate = static_cast<double>(mismatch) / static_cast<double>(n);
  r.se = std::sqrt(r.rate * (1.0 - r.rate) / static_cast<double>(n));
  r.p_f = stats::ks_one_sample(tf, [&](double t) {
            return -std::expm1(-f.cumulative(t));
          }).p_value;
  r.p_g = stats::ks_one_sample(tg, [&](double t) {
            return -std::expm1(-g.cumulative(t));
          }).p_value;
  return r;
}

// 8. Clock coupling: P(tau_f != tau_g) <= integral |f - g|.
Outcome clock_coupling(const Options &opt) {
  const std::size_t n = opt.quick ? 10000 : 100000;
  const Piecewise g{{}, {1.0}};
  const Piecewise f{{0.1}, {2.0, 1.0}};
  const Piecewise f_lit{{0.1}, {3.0, 1.0}};
  const ClockRun a = run_clocks(f, g, n, 8001);
  const ClockRun b = run_clocks(f_lit, g, n, 8002);
  const bool pass_a = a.rate <= 0.1 + 3.0 * a.se && a.p_f > 0.01 && a.p_g > 0.01;
  const bool pass_b = b.rate <= 0.2 + 3.0 * b.se && b.p_f > 0.01 && b.p_g > 0.01;
  return {pass_a && pass_b,
          "trials=" + std::to_string(n) + "; f=2 on [0,0.1] then 1: P=" +
              num(a.rate) + " se=" + num(a.se) + " bound=0.1 ks_p(f)=" +
              num(a.p_f) + " ks_p(g)=" + num(a.p_g) +
              "; f=3 on [0,0.1] then 1: P=" + num(b.rate) + " se=" +
              num(b.se) + " bound=0.2 ks_p(f)=" + num(b.p_f) +
              " ks_p(g)=" + num(b.p_g),
          0.0};
}

// 9. Superlinear regime: Z_n / n -> 1 and Poisson structure of rescaled gaps.
Outcome transient_scaling(const Options &) {
  const auto t0 = std::chrono::steady_clock::now();
  CounterRng rng(9001, 0);
  const auto rep =
      expmem::transient_experiment(2.0, 1.0, 1.0, 1.0, 10000, rng, 1e-10, 1000);
  const double secs = seconds_since(t0);
  const double disp = rep.dispersion.statistic;
  const bool ok = rep.final_ratio >= 0.95 && rep.final_ratio <= 1.05 &&
                  rep.ks.p_value > 0.01 && disp >= 0.8 && disp <= 1.2 &&
                  secs < 120.0;
  return {ok,
          "Z_n/n=" + num(rep.final_ratio) + " ks_p=" + num(rep.ks.p_value) +
              " rescaled=" + std::to_string(rep.rescaled_gaps.size()) +
              " dispersion=" + num(disp) + " windows=" +
              std::to_string(rep.windows),
          120.0};
}

// 10. Blow-up flagged for gamma = 2, never for the ergodic affine model.
Outcome blow_up(const Options &opt) {
  const std::size_t seeds_poly = opt.quick ? 10 : 100;
  const std::size_t seeds_aff = opt.quick ? 10 : 100;
  const std::size_t n_aff = opt.quick ? 100000 : 1000000;
  const ModelParams poly = exp_model(Activation::polynomial(1.0, 1.0, 2.0));
  const ModelParams aff = exp_model(Activation::affine(1.0, 0.5));
  std::vector<char> blown(seeds_poly), clean(seeds_aff);
  std::vector<std::size_t> at(seeds_poly);
  parallel_for(seeds_poly, [&](std::size_t i) {
    SimConfig sc;
    sc.seed = 10001 + i;
    sc.max_events = 1000000;
    const PointPath p = simulate(InterArrivalState(), poly, sc);
    blown[i] = p.status == PathStatus::kBlowUpSuspected;
    at[i] = p.size();
  });
  parallel_for(seeds_aff, [&](std::size_t i) {
    SimConfig sc;
    sc.seed = 10501 + i;
    sc.max_events = n_aff;
    const PointPath p = simulate(InterArrivalState(), aff, sc);
    clean[i] = p.status == PathStatus::kCompleted && p.size() == n_aff;
  });
  const auto n_blown = std::count(blown.begin(), blown.end(), 1);
  const auto n_clean = std::count(clean.begin(), clean.end(), 1);
  const std::size_t need =
      (95 * seeds_poly + 99) / 100; // 95 of every 100 seeds
  std::vector<double> sizes(at.begin(), at.end());
  const bool ok = static_cast<std::size_t>(n_blown) >= need &&
                  static_cast<std::size_t>(n_clean) == seeds_aff;
  return {ok,
          "gamma=2: " + std::to_string(n_blown) + "/" +
              std::to_string(seeds_poly) + " flagged (median event " +
              num(stats::quantiles(sizes, {0.5})[0]) + "); affine: " +
              std::to_string(n_clean) + "/" + std::to_string(seeds_aff) +
              " clean over " + std::to_string(n_aff) + " events",
          0.0};
}

std::map<std::string, std::string> read_tree(const std::filesystem::path &d) {
  std::map<std::string, std::string> out;
  for (const auto &e : std::filesystem::recursive_directory_iterator(d))
    if (e.is_regular_file())
      out[std::filesystem::relative(e.path(), d).generic_string()] =
          io::read_file(e.path());
  return out;
}

// 11. Reruns with the same config and seed are byte-identical.
Outcome determinism(const Options &) {
  const std::string model =
      R"("model": {"kernel": {"type": "exponential", "params": {"scale": 1}},
                   "activation": {"type": "affine", "params": {"nu": 1, "beta": 0.5}}})";
  const std::string poly2 =
      R"("model": {"kernel": {"type": "exponential", "params": {"scale": 1}},
                   "activation": {"type": "polynomial", "params": {"nu": 1, "beta": 1, "gamma": 2}}})";
  const std::vector<std::string> configs = {
      R"({"experiment": "simulate", "seed": 11, "replicas": 3, )" + model +
          R"(, "params": {"n_events": 500, "random_walk_margin": 0.05}})",
      R"({"experiment": "stationary-linear", "seed": 12, "replicas": 2, )" +
          model + R"(, "params": {"n_samples": 50, "k": 2}})",
      R"({"experiment": "cesaro", "seed": 13, "replicas": 2, )" + model +
          R"(, "params": {"checkpoints": [100, 200]}})",
      R"({"experiment": "expmem-stationary", "seed": 14, "replicas": 2, )" +
          model + R"(, "params": {"n_burn": 100, "n_keep": 300}})",
      R"({"experiment": "transient-scaling", "seed": 15, "replicas": 2, )" +
          poly2 + R"(, "params": {"n_events": 400, "windows": 30}})",
      R"({"experiment": "couple", "seed": 16, "replicas": 2, )" + model +
          R"(, "params": {"mode": "clocks", "trials": 2000}})",
      R"({"experiment": "couple", "seed": 17, "replicas": 2, )" + model +
          R"(, "params": {"mode": "chains", "trials": 50, "z_gaps": [0.5, 1.0]}})"};
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() /
                        ("hawkes_determinism_" + std::to_string(::getpid()));
  std::size_t files = 0, mismatched = 0;
  std::string first_bad;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    const auto cfg = config::parse(configs[c]);
    std::map<std::string, std::string> trees[2];
    for (int run = 0; run < 2; ++run) {
      const fs::path dir =
          root / ("c" + std::to_string(c) + "_" + std::to_string(run));
      fs::remove_all(dir);
      runner::write_outputs(dir, cfg, runner::run_experiment(cfg).files);
      trees[run] = read_tree(dir);
    }
    files += trees[0].size();
    if (trees[0] != trees[1]) {
      ++mismatched;
      if (first_bad.empty()) first_bad = cfg.experiment;
    }
  }
  fs::remove_all(root);
  return {mismatched == 0 && files > 0,
          std::to_string(configs.size()) + " configs with replicas>1, " +
              std::to_string(files) + " files per run, mismatched configs=" +
              std::to_string(mismatched) +
              (first_bad.empty() ? "" : " (first: " + first_bad + ")"),
          0.0};
}

} // namespace

std::vector<CriterionResult>
run_all(const Options &opt,
        const std::function<void(const CriterionResult &)> &on_result) {
  using Fn = Outcome (*)(const Options &);
  const std::vector<std::pair<std::string, Fn>> criteria = {
      {"Poisson baseline", poisson_baseline},
      {"Time rescaling", time_rescaling},
      {"Stationary mean identity", stationary_mean},
      {"Monotone domination", domination},
      {"Pathwise random-walk bound", random_walk_bound},
      {"Inversion vs thinning", inversion_vs_thinning},
      {"Exponential-memory equivalence", expmem_equivalence},
      {"Clock coupling bound", clock_coupling},
      {"Transient scaling", transient_scaling},
      {"Blow-up detection", blow_up},
      {"Determinism", determinism}};
  std::vector<CriterionResult> out;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    CriterionResult r;
    r.id = static_cast<int>(i + 1);
    r.name = criteria[i].first;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const Outcome o = criteria[i].second(opt);
      r.passed = o.passed;
      r.detail = o.detail;
      if (o.limit_seconds > 0.0)
        r.detail += " [runtime limit " + num(o.limit_seconds) + " s]";
    } catch (const std::exception &e) {
      r.passed = false;
      r.detail = std::string("error: ") + e.what();
    }
    r.seconds = seconds_since(t0);
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_line(const CriterionResult &r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", r.seconds);
  return std::string(r.passed ? "PASS" : "FAIL") + " [" +
         std::to_string(r.id) + "] " + r.name + ": " + r.detail + " (" + buf +
         " s)";
}

} // namespace hawkes::validation
