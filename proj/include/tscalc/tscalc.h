/* tscalc — time-scale calculus engine.
 *
 * C interface to the shared library. All handles are opaque; every function
 * returns a status code and reports results through out-parameters. Numeric
 * values cross this boundary as strings: exact rationals ("7/2", "-3") on
 * scales with the rational backend, shortest round-trip decimals on the float
 * backend. Strings returned through char** out-parameters are heap-allocated
 * and must be released with tsc_string_free.
 *
 * On any status other than TSC_OK, tsc_last_error() returns a human-readable
 * message for the failing call on the current thread.
 */

#ifndef TSCALC_H
#define TSCALC_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tsc_status {
  TSC_OK = 0,
  TSC_ERROR_INVALID_ARGUMENT = 1, /* malformed spec, JSON, or parameter */
  TSC_ERROR_DOMAIN = 2,           /* violated mathematical precondition */
  TSC_ERROR_UNSUPPORTED = 3,      /* no closed form / not applicable here */
  TSC_ERROR_INTERNAL = 4          /* unexpected failure inside the library */
} tsc_status;

typedef struct tsc_scale tsc_scale;
typedef struct tsc_function tsc_function;

/* Library version, static storage — do not free. */
const char* tsc_version(void);

/* Message for the last failing call on this thread, empty string if none.
 * Valid until the next tscalc call on the same thread; do not free. */
const char* tsc_last_error(void);

/* Releases a string returned through a char** out-parameter. NULL is a no-op. */
void tsc_string_free(char* s);

/* ----------------------------------------------------------------------- */
/* scales                                                                   */

/* Builds a scale from its JSON spec:
 *   {"components": [{"interval": ["0", "1"]}, {"point": "2"},
 *                   {"integers": {"a": 0, "b": 4}},
 *                   {"qlattice": {"q": "2", "m": 0, "n": 5}}],
 *    "backend": "rational" | "float", "tolerance": 1e-9}
 * Components are normalized (sorted, touching pieces merged); overlapping
 * interiors are rejected. "tolerance" is only allowed with the float backend. */
tsc_status tsc_scale_create(const char* spec_json, tsc_scale** out);
void tsc_scale_destroy(tsc_scale* scale);

/* Canonical JSON spec of a scale (normalized components). */
tsc_status tsc_scale_serialize(const tsc_scale* scale, char** out_json);

tsc_status tsc_scale_min(const tsc_scale* scale, char** out_value);
tsc_status tsc_scale_max(const tsc_scale* scale, char** out_value);

/* Forward/backward jump and graininess at a scale member t. */
tsc_status tsc_scale_sigma(const tsc_scale* scale, const char* t, char** out_value);
tsc_status tsc_scale_rho(const tsc_scale* scale, const char* t, char** out_value);
tsc_status tsc_scale_mu(const tsc_scale* scale, const char* t, char** out_value);
tsc_status tsc_scale_nu(const tsc_scale* scale, const char* t, char** out_value);

/* Point classification; flags are 0/1. in_kappa is 0 exactly when t is the
 * left-scattered maximum of the scale. */
tsc_status tsc_scale_classify(const tsc_scale* scale, const char* t, int* right_scattered,
                              int* left_scattered, int* in_kappa);

/* ----------------------------------------------------------------------- */
/* functions                                                                */

/* {"poly": ["c0", "c1", ...]} | {"builtin": "identity"}
 * | {"builtin": {"constant": "c"}} — coefficients as numeric strings. */
tsc_status tsc_function_create(const char* fn_json, tsc_function** out);
void tsc_function_destroy(tsc_function* fn);
tsc_status tsc_function_serialize(const tsc_function* fn, char** out_json);

/* ----------------------------------------------------------------------- */
/* calculus                                                                 */

/* Delta derivative of fn at t (t must not be the left-scattered maximum). */
tsc_status tsc_delta_derivative(const tsc_scale* scale, const tsc_function* fn, const char* t,
                                char** out_value);

/* Delta integral of fn (or fn∘sigma when compose_sigma is nonzero) from a to
 * b; both must be scale members. a > b integrates with reversed sign. */
tsc_status tsc_delta_integral(const tsc_scale* scale, const tsc_function* fn, const char* a,
                              const char* b, int compose_sigma, char** out_value);

/* Generalized monomial h_k(t, s) by the integral recursion. */
tsc_status tsc_monomial_hk(const tsc_scale* scale, unsigned k, const char* t, const char* s,
                           char** out_value);

/* Closed form of h_2(t, s) for the canonical families (reals, integers,
 * q-lattice). TSC_ERROR_UNSUPPORTED when the scale is not such a family. */
tsc_status tsc_h2_closed_form(const tsc_scale* scale, const char* t, const char* s,
                              char** out_value);

/* ----------------------------------------------------------------------- */
/* inequality engine (all over [min(scale), max(scale)])                    */

/* Weighted Montgomery identity at (lambda, t):
 * out_json = {"lhs": .., "rhs": .., "residual": ..}. The residual is exactly
 * "0" on the rational backend. */
tsc_status tsc_montgomery_identity(const tsc_scale* scale, const tsc_function* fn,
                                   const char* lambda, const char* t, char** out_json);

/* Weighted Ostrowski bound report at (lambda, t). mode is "direct" (kernel
 * integral) or "four-h2". The report carries lhs, rhs, margin, M, the mode
 * actually used, the four h2 components when applicable, and the sharpness/
 * equality flags. */
tsc_status tsc_ostrowski_bound(const tsc_scale* scale, const tsc_function* fn,
                               const char* lambda, const char* t, const char* mode,
                               char** out_json);

/* Named special case of the bound. kind is one of: "bohner-matthews",
 * "trapezoid", "third-family", "simpson", "half-family", "averaged",
 * "center-family", "midpoint". lambda/t may be NULL where the kind pins them
 * (passing a conflicting pin is an error); "center-family" requires lambda,
 * "bohner-matthews"/"third-family"/"half-family" require t. */
tsc_status tsc_special_case_bound(const tsc_scale* scale, const tsc_function* fn,
                                  const char* kind, const char* lambda, const char* t,
                                  const char* mode, char** out_json);

/* Whether the sharpness condition holds at lambda (out_holds 0/1). Errors
 * with TSC_ERROR_DOMAIN when the required split point is not a member. */
tsc_status tsc_sharpness_condition(const tsc_scale* scale, const char* lambda, int* out_holds);

/* Gruss-type bound report at t. gamma/Gamma either both NULL (tight bounds
 * are computed) or both set (validated against the actual derivative range). */
tsc_status tsc_gruss_bound(const tsc_scale* scale, const tsc_function* fn, const char* t,
                           const char* gamma, const char* Gamma, char** out_json);

/* ----------------------------------------------------------------------- */
/* verification                                                             */

/* Runs one property suite: "identity", "inequality", "calculus-rules",
 * "closed-forms", "sharpness", "gruss", "mode-agreement". config_json may be
 * NULL for defaults; see the docs for the config shape. The report embeds
 * every violation as a self-contained replay record. */
tsc_status tsc_run_suite(const char* suite, const char* config_json, char** out_json);

/* Re-executes one violation record. out_passes is 1 when the recorded check
 * passes now, 0 when it still fails. */
tsc_status tsc_replay_violation(const char* record_json, int* out_passes);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* TSCALC_H */
