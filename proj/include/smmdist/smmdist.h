/* C interface to the smmdist library.
 *
 * Conventions:
 *   - Every function returns an smm_status; SMM_OK means success.
 *   - Results are UTF-8 JSON strings allocated by the library; release them
 *     with smm_string_free. Models are opaque handles released with
 *     smm_model_free.
 *   - On failure, smm_last_error() returns a thread-local description of the
 *     most recent error raised on the calling thread.
 *
 * All numeric fields inside result JSON are either exact rationals encoded
 * as strings "p/q" (or "p") or decimal doubles with 17 significant digits.
 */

#ifndef SMMDIST_H
#define SMMDIST_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct smm_model smm_model;

typedef enum smm_status {
  SMM_OK = 0,
  SMM_ERR_PARSE = 1,         /* malformed JSON or spec text */
  SMM_ERR_INVALID_MODEL = 2, /* model violates a structural invariant */
  SMM_ERR_BAD_ARG = 3,       /* unknown state, bad option, precondition failure */
  SMM_ERR_NO_CONVERGE = 4,   /* fixed-point iteration hit its iteration cap */
  SMM_ERR_INTERNAL = 5
} smm_status;

/* Thread-local message for the last error on this thread; never NULL. */
const char* smm_last_error(void);

void smm_string_free(char* s);

/* ------------------------------------------------------------------ models */

/* Parses a model from its JSON description. Structural problems fail with
 * SMM_ERR_PARSE; semantic invariants are reported by smm_model_validate. */
smm_status smm_model_parse(const char* json, smm_model** out);

void smm_model_free(smm_model* model);

/* JSON array of {"state": ..., "message": ...} objects; empty when valid. */
smm_status smm_model_validate(const smm_model* model, char** violations_json);

/* -------------------------------------------------------------- operations */

/* Total variation distance between two residence-time distributions given as
 * JSON objects like {"exp":"3/2"}. Result: {"value", "exact", "method",
 * "rational"?}. */
smm_status smm_tv(const char* dist_a_json, const char* dist_b_json, char** result_json);

/* Bisimilarity blocks: {"blocks": [[state, ...], ...]}. */
smm_status smm_bisim(const smm_model* model, char** result_json);

/* Bisimilarity pseudometric by fixed-point iteration.
 * options_json (may be NULL): {"tolerance": 1e-9, "max_iter": 100000,
 * "threads": 0, "exact_lp": false, "lp_state_cap": 8}.
 * Result: {"states", "matrix", "iterations", "residual", "converged",
 * "exact_lp_matrix"?}. SMM_ERR_NO_CONVERGE when the iteration cap is hit
 * (the report is still returned). */
smm_status smm_theta(const smm_model* model, const char* options_json, char** result_json);

/* Monte-Carlo satisfaction estimate. spec_kind is "mtl" (spec_source is
 * formula text) or "dta" (spec_source is automaton JSON).
 * options_json (may be NULL): {"samples": 100000, "horizon": 1000,
 * "seed": 0, "confidence": 0.99, "threads": 0}.
 * Result: {"point", "lower", "upper", "samples", "unknown_fraction",
 * "confidence", "seed"}. */
smm_status smm_estimate(const smm_model* model, const char* start_state, const char* spec_kind,
                        const char* spec_source, const char* options_json, char** result_json);

/* Statistical lower bound on the trace distance from a family of specs.
 * specs_json: [{"kind":"mtl"|"dta","source":...}, ...]; options as above.
 * Result: {"lower_bound", "seed", ...}. */
smm_status smm_delta_lower_bound(const smm_model* model, const char* state_a,
                                 const char* state_b, const char* specs_json,
                                 const char* options_json, char** result_json);

/* Exact trace-distance interval on the shared-residence subclass:
 * {"lower", "upper", "exact", "depth"}. */
smm_status smm_delta_oracle(const smm_model* model, const char* state_a, const char* state_b,
                            int depth_cap, char** result_json);

/* ----------------------------------------------------------------- gadgets */

/* graph_json: {"n": 3, "edges": [[1,2], ...]}. kappa_json selects the shared
 * residence distribution (NULL means {"dirac":"0"}).
 * Result: {"clique_size", "counts", "gamma", "deltas"}. */
smm_status smm_clique(const char* graph_json, const char* kappa_json, int threads,
                      char** result_json);

/* Emits a compiled calibration model. what is "mg", "mv" or "mi" (index i
 * required for "mi"). Result is the model JSON, with start states under
 * "start_states" for "mi". */
smm_status smm_gadget_emit(const char* graph_json, const char* what, int index,
                           const char* kappa_json, char** result_json);

/* Absolute-error threshold for factor-alpha clique approximation. */
smm_status smm_inapprox_bound(int n, double alpha, char** result_json);

#ifdef __cplusplus
}
#endif

#endif /* SMMDIST_H */
