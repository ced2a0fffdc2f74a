/* cauchykit C API: regularized SVD inversion of elliptic Cauchy problems and
 * nonlinear boundary-law identification.  Opaque handle + status codes; all
 * heavy lifting happens behind this surface. */
#ifndef CAUCHYKIT_H
#define CAUCHYKIT_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ck_status {
  CK_OK = 0,
  CK_ERR_VALIDATION = 2,   /* bad config, bad arguments, I/O or parse failure */
  CK_ERR_NO_CONVERGENCE = 3 /* iterative solve missed its tolerance */
} ck_status;

typedef struct ck_experiment ck_experiment;

ck_experiment* ck_experiment_create(void);
void ck_experiment_destroy(ck_experiment* exp);

/* Load a JSON config file.  Without a call, built-in defaults apply. */
ck_status ck_experiment_load_config(ck_experiment* exp, const char* path);

/* Override a single option.  Keys: "seed", "gamma", "policy"
 * (mu-threshold | literal), "out", "eps" (comma-separated list). */
ck_status ck_experiment_set_option(ck_experiment* exp, const char* key,
                                   const char* value);

/* Run one of: simulate, cauchy, identify, pipeline, sweep, svdtable.
 * Artifacts are written to the configured output directory; any stdout-style
 * summary is retrievable via ck_experiment_output(). */
ck_status ck_experiment_run(ck_experiment* exp, const char* command);

/* Text produced by the last successful run (empty string if none). */
const char* ck_experiment_output(const ck_experiment* exp);

/* Message for the last failed call on this handle. */
const char* ck_experiment_last_error(const ck_experiment* exp);

/* Analytic singular values mu_k = 1/sinh(sqrt(lambda_k)) of the configured
 * cross-section, k = 1..count.  Returns the number written. */
int ck_singular_values(ck_experiment* exp, double* out, int count);

const char* ck_version(void);

#ifdef __cplusplus
}
#endif

#endif /* CAUCHYKIT_H */
