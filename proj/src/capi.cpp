#include "hawkes/hawkes.h"

#include <cstring>
#include <string>

#include "hawkes/error.hpp"
#include "hawkes/io.hpp"
#include "hawkes/runner.hpp"
#include "hawkes/simulator.hpp"

struct hawkes_model {
  hawkes::ModelParams params;
};

struct hawkes_path {
  hawkes::PointPath path;
};

namespace {

thread_local std::string g_last_error;

hawkes_status fail(hawkes_status code, const std::string &msg) {
  g_last_error = msg;
  return code;
}

template <typename Fn> hawkes_status guarded(Fn &&fn) {
  try {
    g_last_error.clear();
    fn();
    return HAWKES_OK;
  } catch (const hawkes::Error &e) {
    return fail(static_cast<hawkes_status>(e.code()), e.what());
  } catch (const std::exception &e) {
    return fail(HAWKES_E_INTERNAL, e.what());
  } catch (...) {
    return fail(HAWKES_E_INTERNAL, "unknown error");
  }
}

hawkes::runner::LogFn make_log(hawkes_line_fn log, void *user) {
  if (!log) return {};
  return [log, user](const std::string &line) { log(line.c_str(), user); };
}

size_t copy_out(const std::vector<double> &src, double *dst, size_t n) {
  const size_t k = std::min(n, src.size());
  if (dst && k) std::memcpy(dst, src.data(), k * sizeof(double));
  return k;
}

} // namespace

extern "C" {

const char *hawkes_version(void) { return hawkes::runner::toolkit_version(); }

const char *hawkes_last_error(void) { return g_last_error.c_str(); }

hawkes_status hawkes_model_from_json(const char *json, hawkes_model **out) {
  if (!json || !out) return fail(HAWKES_E_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    hawkes::io::Json j;
    try {
      j = hawkes::io::Json::parse(json);
    } catch (const hawkes::io::Json::parse_error &e) {
      throw hawkes::ConfigError(e.what());
    }
    *out = new hawkes_model{hawkes::io::model_from_json(j)};
  });
}

void hawkes_model_free(hawkes_model *m) { delete m; }

hawkes_status hawkes_model_hash(const hawkes_model *m, char *buf,
                                size_t size) {
  if (!m || !buf) return fail(HAWKES_E_ARGUMENT, "null argument");
  return guarded([&] {
    const std::string h = hawkes::io::model_hash(m->params);
    if (size < h.size() + 1)
      throw hawkes::DomainError("buffer too small for model hash");
    std::memcpy(buf, h.c_str(), h.size() + 1);
  });
}

hawkes_status hawkes_simulate(const hawkes_model *m, uint64_t seed,
                              uint64_t stream, size_t max_events,
                              double horizon, double inversion_tol,
                              hawkes_path **out) {
  if (!m || !out) return fail(HAWKES_E_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    hawkes::SimConfig sc;
    sc.seed = seed;
    sc.stream = stream;
    sc.max_events = max_events;
    if (horizon > 0.0) sc.horizon = horizon;
    if (inversion_tol > 0.0) sc.inversion_tol = inversion_tol;
    *out = new hawkes_path{
        hawkes::simulate(hawkes::InterArrivalState(), m->params, sc)};
  });
}

size_t hawkes_path_size(const hawkes_path *p) { return p ? p->path.size() : 0; }

size_t hawkes_path_gaps(const hawkes_path *p, double *dst, size_t n) {
  return p ? copy_out(p->path.gaps, dst, n) : 0;
}

size_t hawkes_path_times(const hawkes_path *p, double *dst, size_t n) {
  return p ? copy_out(p->path.times, dst, n) : 0;
}

size_t hawkes_path_increments(const hawkes_path *p, double *dst, size_t n) {
  return p ? copy_out(p->path.e_used, dst, n) : 0;
}

const char *hawkes_path_status(const hawkes_path *p) {
  return p ? hawkes::path_status_name(p->path.status) : "";
}

void hawkes_path_free(hawkes_path *p) { delete p; }

int hawkes_run_config(const char *config_path, const char *out_dir,
                      uint64_t replicas, int has_seed, uint64_t seed,
                      hawkes_line_fn log, void *user) {
  if (!config_path) {
    g_last_error = "null config path";
    return hawkes::runner::kExitConfig;
  }
  hawkes::runner::Overrides ov;
  if (out_dir) ov.out = out_dir;
  if (replicas) ov.replicas = replicas;
  if (has_seed) ov.seed = seed;
  const auto r = hawkes::runner::run_config_file(config_path, ov,
                                                 make_log(log, user));
  g_last_error = r.message;
  return r.exit_code;
}

int hawkes_validate(int quick, const char *out_dir, hawkes_line_fn log,
                    void *user) {
  std::optional<std::string> out;
  if (out_dir) out = out_dir;
  const auto r =
      hawkes::runner::run_validation(quick != 0, out, make_log(log, user));
  g_last_error = r.message;
  return r.exit_code;
}

} // extern "C"
