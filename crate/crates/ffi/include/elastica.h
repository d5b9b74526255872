#ifndef ELASTICA_H
#define ELASTICA_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum ElasticaStatus {
  ELASTICA_STATUS_OK = 0,
  ELASTICA_STATUS_NULL_POINTER = 1,
  ELASTICA_STATUS_INVALID_UTF8 = 2,
  ELASTICA_STATUS_PARSE = 3,
  ELASTICA_STATUS_CONTRACT = 4,
  ELASTICA_STATUS_PRECONDITION = 5,
  ELASTICA_STATUS_IO = 6,
  ELASTICA_STATUS_UNSUPPORTED = 7,
  ELASTICA_STATUS_PANIC = 8,
} ElasticaStatus;

typedef enum ElasticaVerdict {
  ELASTICA_VERDICT_EXTREMAL_UP_TO_TOL = 0,
  ELASTICA_VERDICT_NOT_EXTREMAL = 1,
  ELASTICA_VERDICT_INCONCLUSIVE = 2,
} ElasticaVerdict;

/**
 * Run configuration: seed, tolerances and budgets.
 */
typedef struct ElasticaConfig ElasticaConfig;

/**
 * Quadratic form on 3x3 matrices.
 */
typedef struct ElasticaForm ElasticaForm;

/**
 * Homogeneous polynomial with rational coefficients.
 */
typedef struct ElasticaPoly ElasticaPoly;

/**
 * Stiffness tensor.
 */
typedef struct ElasticaTensor ElasticaTensor;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next call into the library on the same thread.
 */
const char *elastica_last_error(void);

/**
 * Library version as a static string.
 */
const char *elastica_version(void);

void elastica_string_free(char *s);

struct ElasticaConfig *elastica_config_new(void);

/**
 * Parses a full JSON run configuration.
 */
enum ElasticaStatus elastica_config_from_json(const char *json, struct ElasticaConfig **out_cfg);

enum ElasticaStatus elastica_config_set_seed(struct ElasticaConfig *cfg, uint64_t seed);

enum ElasticaStatus elastica_config_to_json(const struct ElasticaConfig *cfg, char **out_json);

void elastica_config_free(struct ElasticaConfig *cfg);

/**
 * Parses text such as `y1^4*y2^2 - 3*y1^2*y2^2*y3^2` in `nvars` variables.
 */
enum ElasticaStatus elastica_poly_parse(const char *text,
                                        size_t nvars,
                                        struct ElasticaPoly **out_poly);

enum ElasticaStatus elastica_poly_from_json(const char *json, struct ElasticaPoly **out_poly);

enum ElasticaStatus elastica_poly_to_text(const struct ElasticaPoly *p, char **out_text);

enum ElasticaStatus elastica_poly_nvars(const struct ElasticaPoly *p, size_t *out_nvars);

/**
 * Evaluates at `y[0..len]`; `len` must equal the number of variables.
 */
enum ElasticaStatus elastica_poly_eval(const struct ElasticaPoly *p,
                                       const double *y,
                                       size_t len,
                                       double *out_value);

void elastica_poly_free(struct ElasticaPoly *p);

enum ElasticaStatus elastica_tensor_from_json(const char *json, struct ElasticaTensor **out_tensor);

void elastica_tensor_free(struct ElasticaTensor *t);

/**
 * Accepts either a `{"gram": ...}` form or a tensor JSON.
 */
enum ElasticaStatus elastica_form_from_json(const char *json, struct ElasticaForm **out_form);

enum ElasticaStatus elastica_tensor_form(const struct ElasticaTensor *t,
                                         struct ElasticaForm **out_form);

void elastica_form_free(struct ElasticaForm *f);

/**
 * Exact determinant of the acoustic tensor, a sextic in `y1, y2, y3`.
 */
enum ElasticaStatus elastica_acoustic_det(const struct ElasticaForm *f,
                                          struct ElasticaPoly **out_poly);

enum ElasticaStatus elastica_rank_one_convexity(const struct ElasticaForm *f,
                                                const struct ElasticaConfig *cfg,
                                                int *out_convex,
                                                double *out_min_eigenvalue);

enum ElasticaStatus elastica_poly_extremality(const struct ElasticaPoly *p,
                                              const struct ElasticaConfig *cfg,
                                              enum ElasticaVerdict *out_verdict,
                                              char **out_report);

enum ElasticaStatus elastica_perfect_square(const struct ElasticaPoly *p,
                                            const struct ElasticaConfig *cfg,
                                            int *out_is_square,
                                            char **out_report);

enum ElasticaStatus elastica_form_extremality(const struct ElasticaForm *f,
                                              const struct ElasticaConfig *cfg,
                                              enum ElasticaVerdict *out_verdict,
                                              char **out_report);

/**
 * Full hypothesis audit of an orthotropic tensor, as JSON.
 */
enum ElasticaStatus elastica_analyze(const struct ElasticaTensor *t,
                                     const struct ElasticaConfig *cfg,
                                     char **out_report);

/**
 * Runs the fixture battery; `out_all_passed` is 1 when every item passes.
 */
enum ElasticaStatus elastica_verify_fixtures(const struct ElasticaConfig *cfg,
                                             int *out_all_passed,
                                             char **out_report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ELASTICA_H */
