/* evodich - spectral stability and exponential-dichotomy analysis of
 * linear differential systems y' = A(t) y.
 *
 * C API of the shared library. All functions that can fail return an
 * evodich_status; handles are opaque and every returned string is owned by
 * the caller and released with evodich_string_free(). Error messages, when
 * requested, are returned the same way.
 */
#ifndef EVODICH_H
#define EVODICH_H

#include <stdint.h>

#if defined(_WIN32)
#define EVODICH_API __declspec(dllexport)
#else
#define EVODICH_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum evodich_status {
  EVODICH_OK = 0,
  EVODICH_ERR_INVALID_ARGUMENT = 1,
  EVODICH_ERR_PARSE = 2,
  EVODICH_ERR_RANGE = 3,
  EVODICH_ERR_NUMERIC = 4,
  EVODICH_ERR_SIZE = 5,
  EVODICH_ERR_IO = 6,
  EVODICH_ERR_UNKNOWN = 7
} evodich_status;

/* Verdict classes reported by evodich_analyze; these double as CLI exit
 * codes. */
#define EVODICH_VERDICT_DEFINITE 0
#define EVODICH_VERDICT_DEGENERATE 2

typedef struct evodich_system evodich_system;

typedef struct evodich_options {
  int32_t grid_size;     /* cells per analysis window (N >= 2) */
  double step;           /* grid step; 0 derives it from the period/window */
  double p_exponent;     /* exponent for L_p norms, >= 1 */
  double tol;            /* integrator tolerance, > 0 */
  uint64_t seed;         /* RNG seed for sampled diagnostics */
  int32_t threads;       /* parallelism cap; 0 = auto (EVODICH_THREADS) */
  int32_t format_csv;    /* nonzero: emit CSV summaries alongside JSON */
} evodich_options;

EVODICH_API evodich_options evodich_options_default(void);

EVODICH_API const char *evodich_version(void);

/* Static description of a status code (not owned by the caller). */
EVODICH_API const char *evodich_status_name(evodich_status status);

/* Parses a system description from a UTF-8 JSON document:
 *   {"dimension": d, "kind": "constant"|"periodic"|"sampled",
 *    "matrix": [[...]] (constant),
 *    "period": T and "samples": [{"t": ..., "matrix": [[...]]}, ...]
 *        (periodic/sampled; periodic also accepts "harmonics"),
 *    entries are numbers or [re, im] pairs}. */
EVODICH_API evodich_status evodich_system_parse_json(const char *json_text,
                                                     evodich_system **out_system,
                                                     char **error_message);

EVODICH_API evodich_status evodich_system_load_file(const char *path,
                                                    evodich_system **out_system,
                                                    char **error_message);

EVODICH_API void evodich_system_free(evodich_system *system);

EVODICH_API int32_t evodich_system_dimension(const evodich_system *system);

/* Full dichotomy analysis: spectrum of the one-step evolution operator,
 * contour projection, pointwise projection family and the fitted verdict.
 * Any of the output pointers may be NULL when that artifact is not needed.
 * verdict_class receives EVODICH_VERDICT_DEFINITE or
 * EVODICH_VERDICT_DEGENERATE. */
EVODICH_API evodich_status evodich_analyze(const evodich_system *system,
                                           const evodich_options *options,
                                           char **dichotomy_json, char **spectrum_json,
                                           char **projections_csv, int32_t *verdict_class,
                                           char **error_message);

/* Eigenvalues of the one-step evolution operator as "re,im" CSV rows plus a
 * JSON metadata document with the unit-circle gap. */
EVODICH_API evodich_status evodich_spectrum(const evodich_system *system,
                                            const evodich_options *options,
                                            char **eigenvalues_csv, char **metadata_json,
                                            char **error_message);

/* Equivalence tables for every theorem check applicable to the system.
 * all_consistent receives 1 when no non-degenerate table mixes verdicts. */
EVODICH_API evodich_status evodich_verify(const evodich_system *system,
                                          const evodich_options *options, char **tables_json,
                                          char **summary_csv, int32_t *all_consistent,
                                          char **error_message);

/* Runs the built-in gallery of reference systems. */
EVODICH_API evodich_status evodich_gallery(const evodich_options *options, char **report_json,
                                           char **summary_csv, int32_t *all_consistent,
                                           char **error_message);

EVODICH_API void evodich_string_free(char *text);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* EVODICH_H */
