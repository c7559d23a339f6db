/* Exercises the C API from plain C. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "hawkes/hawkes.h"

static int failures = 0;

#define EXPECT(cond)                                                          \
  do {                                                                        \
    if (!(cond)) {                                                            \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond);     \
      ++failures;                                                             \
    }                                                                         \
  } while (0)

static const char *kModel =
    "{\"kernel\": {\"type\": \"exponential\", \"params\": {\"scale\": 1}},"
    " \"activation\": {\"type\": \"affine\", \"params\": {\"nu\": 2, \"beta\": 0}}}";

int main(void) {
  hawkes_model *m = NULL;
  hawkes_path *p = NULL, *q = NULL;
  char hash[17];
  double gaps[1000], times[1000], inc[1000];
  size_t i, n;

  EXPECT(strlen(hawkes_version()) > 0);
  EXPECT(hawkes_model_from_json(kModel, &m) == HAWKES_OK);
  EXPECT(m != NULL);
  EXPECT(hawkes_model_hash(m, hash, sizeof hash) == HAWKES_OK);
  EXPECT(strlen(hash) == 16);
  EXPECT(hawkes_model_hash(m, hash, 4) == HAWKES_E_DOMAIN);

  EXPECT(hawkes_simulate(m, 42, 0, 1000, 0.0, 0.0, &p) == HAWKES_OK);
  EXPECT(hawkes_path_size(p) == 1000);
  EXPECT(strcmp(hawkes_path_status(p), "Completed") == 0);
  n = hawkes_path_gaps(p, gaps, 1000);
  EXPECT(n == 1000);
  EXPECT(hawkes_path_times(p, times, 1000) == 1000);
  EXPECT(hawkes_path_increments(p, inc, 1000) == 1000);
  /* Constant intensity 2: every gap is half its exponential. */
  for (i = 0; i < n; ++i) EXPECT(fabs(gaps[i] - inc[i] / 2.0) < 1e-9);
  EXPECT(fabs(times[999] - times[998] - gaps[999]) < 1e-9);

  EXPECT(hawkes_simulate(m, 42, 0, 1000, 0.0, 0.0, &q) == HAWKES_OK);
  hawkes_path_gaps(q, times, 1000);
  EXPECT(memcmp(gaps, times, sizeof gaps) == 0);
  EXPECT(hawkes_simulate(m, 42, 0, 100000, 5.0, 0.0, &q) == HAWKES_OK);
  EXPECT(strcmp(hawkes_path_status(q), "HorizonReached") == 0);
  hawkes_path_free(q);
  hawkes_path_free(p);

  hawkes_model_free(m);
  m = NULL;
  EXPECT(hawkes_model_from_json("{\"kernel\": 3}", &m) == HAWKES_E_CONFIG);
  EXPECT(m == NULL);
  EXPECT(strlen(hawkes_last_error()) > 0);
  EXPECT(hawkes_model_from_json("not json", &m) == HAWKES_E_CONFIG);
  EXPECT(hawkes_model_from_json(NULL, &m) == HAWKES_E_ARGUMENT);
  EXPECT(hawkes_run_config("/nonexistent/config.json", NULL, 0, 0, 0, NULL,
                           NULL) == 1);

  if (failures) fprintf(stderr, "%d failure(s)\n", failures);
  return failures ? EXIT_FAILURE : EXIT_SUCCESS;
}
