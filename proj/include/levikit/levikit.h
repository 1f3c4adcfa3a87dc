#ifndef LEVIKIT_LEVIKIT_H
#define LEVIKIT_LEVIKIT_H

/* C interface to the levikit core. Every function returns an lk_status; on
 * failure lk_last_error() describes the problem for the calling thread.
 * Strings returned through `char**` are owned by the caller and released with
 * lk_string_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(LEVIKIT_BUILDING)
#define LK_API __attribute__((visibility("default")))
#else
#define LK_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lk_status {
  LK_OK = 0,
  LK_INVALID_ARGUMENT = 1,
  LK_PARSE_ERROR = 2,
  LK_DIVISION_BY_ZERO = 3,
  LK_BRANCH_CUT = 4,
  LK_NON_REAL = 5,
  LK_DEGENERATE_GRADIENT = 6,
  LK_NO_BOUNDARY = 7,
  LK_NOT_FOUND = 8,
  LK_INTERNAL = 9
} lk_status;

typedef enum lk_format { LK_FORMAT_JSON = 0, LK_FORMAT_MARKDOWN = 1 } lk_format;

typedef enum lk_chart { LK_CHART_ORTHONORMAL = 0, LK_CHART_GRAPH = 1 } lk_chart;

typedef struct lk_domain lk_domain;
typedef struct lk_reports lk_reports;

typedef struct lk_verify_options {
  uint64_t seed;
  int samples;     /* <= 0: per-check defaults */
  double tol;      /* <= 0: per-check defaults */
  int threads;     /* <= 0: hardware concurrency */
  int timing;      /* nonzero: record runtime_ms */
  const char* config_json; /* optional {"tolerances": {...}} */
} lk_verify_options;

LK_API const char* lk_version(void);
LK_API const char* lk_last_error(void);
LK_API const char* lk_status_name(lk_status status);
LK_API void lk_string_free(char* s);
/* Worker threads for sampling (<= 0: hardware concurrency). */
LK_API void lk_set_threads(int threads);

/* Domains: "builtin:NAME[?k=v&...]" or a definitions file "PATH[#NAME]". */
LK_API lk_status lk_domain_load(const char* ref, lk_domain** out);
LK_API lk_status lk_domain_from_text(const char* text, const char* name, lk_domain** out);
LK_API void lk_domain_free(lk_domain* d);
LK_API lk_status lk_domain_dimension(const lk_domain* d, int* out);
LK_API lk_status lk_domain_name(const lk_domain* d, char** out);
LK_API lk_status lk_domain_rho(const lk_domain* d, char** out);

/* Coordinates are interleaved (re, im) pairs; `n` is the complex dimension. */
LK_API lk_status lk_parse_point(const char* text, double* coords, int capacity, int* n);
LK_API lk_status lk_domain_eval(const lk_domain* d, const double* coords, int n, double* re, double* im);

LK_API lk_status lk_levi(const lk_domain* d, const double* coords, int n, lk_chart chart, int pivot,
                         lk_format format, char** out);
LK_API lk_status lk_levi_rank(const lk_domain* d, const double* coords, int n, int* rank);

LK_API lk_status lk_enumerate(int n, int exclusions, lk_format format, char** out);
LK_API lk_status lk_profile(const double* eps, int count, lk_format format, char** out);

LK_API void lk_verify_options_init(lk_verify_options* opts);
/* scenario: theorem1 | theorem2 | lemma-a | all. `domain` may be NULL. */
LK_API lk_status lk_verify(const char* scenario, const lk_verify_options* opts, const lk_domain* domain,
                           lk_reports** out);
LK_API int lk_reports_passed(const lk_reports* r);
LK_API lk_status lk_reports_render(const lk_reports* r, lk_format format, char** out);
LK_API void lk_reports_free(lk_reports* r);

#ifdef __cplusplus
}
#endif

#endif
