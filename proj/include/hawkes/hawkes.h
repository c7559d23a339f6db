#ifndef HAWKES_H
#define HAWKES_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define HAWKES_API __declspec(dllexport)
#else
#define HAWKES_API __attribute__((visibility("default")))
#endif

typedef enum hawkes_status {
  HAWKES_OK = 0,
  HAWKES_E_DOMAIN = 1,
  HAWKES_E_DIVERGENCE = 2,
  HAWKES_E_UNBOUNDED_SEARCH = 3,
  HAWKES_E_INTEGRITY = 4,
  HAWKES_E_UNSUPPORTED = 5,
  HAWKES_E_INVARIANT = 6,
  HAWKES_E_CONFIG = 7,
  HAWKES_E_IO = 8,
  HAWKES_E_INTERNAL = 9,
  HAWKES_E_ARGUMENT = 10
} hawkes_status;

typedef struct hawkes_model hawkes_model;
typedef struct hawkes_path hawkes_path;

/* Line sink for progress and validation output. */
typedef void (*hawkes_line_fn)(const char *line, void *user);

HAWKES_API const char *hawkes_version(void);

/* Message of the last failed call on this thread ("" if none). */
HAWKES_API const char *hawkes_last_error(void);

/* Model from a JSON object {"kernel": {...}, "activation": {...}}. */
HAWKES_API hawkes_status hawkes_model_from_json(const char *json,
                                                hawkes_model **out);
HAWKES_API void hawkes_model_free(hawkes_model *m);

/* Writes the 16-hex-digit model hash plus NUL into buf (size >= 17). */
HAWKES_API hawkes_status hawkes_model_hash(const hawkes_model *m, char *buf,
                                           size_t size);

/* Empty-start path of at most max_events events. horizon <= 0 means none. */
HAWKES_API hawkes_status hawkes_simulate(const hawkes_model *m, uint64_t seed,
                                         uint64_t stream, size_t max_events,
                                         double horizon, double inversion_tol,
                                         hawkes_path **out);
HAWKES_API size_t hawkes_path_size(const hawkes_path *p);
/* Copies up to n values; returns the number copied. */
HAWKES_API size_t hawkes_path_gaps(const hawkes_path *p, double *dst, size_t n);
HAWKES_API size_t hawkes_path_times(const hawkes_path *p, double *dst,
                                    size_t n);
HAWKES_API size_t hawkes_path_increments(const hawkes_path *p, double *dst,
                                         size_t n);
/* "Completed", "HorizonReached" or "BlowUpSuspected". */
HAWKES_API const char *hawkes_path_status(const hawkes_path *p);
HAWKES_API void hawkes_path_free(hawkes_path *p);

/* Runs a config file. out_dir may be NULL; replicas and seed are applied
   when non-zero / has_seed is set. Returns the process exit code
   (0 ok, 1 config error, 2 validation failure, 3 runtime error). */
HAWKES_API int hawkes_run_config(const char *config_path, const char *out_dir,
                                 uint64_t replicas, int has_seed,
                                 uint64_t seed, hawkes_line_fn log,
                                 void *user);

/* Acceptance suite; one line per criterion. Returns 0 or 2. */
HAWKES_API int hawkes_validate(int quick, const char *out_dir,
                               hawkes_line_fn log, void *user);

#ifdef __cplusplus
}
#endif

#endif /* HAWKES_H */
