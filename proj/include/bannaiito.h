/* C interface to the Bannai-Ito realization engine.
 *
 * All functions returning bi_status follow the same conventions:
 *   - BI_OK          success
 *   - BI_ERR_ARGUMENT  malformed input (bad rational, bad permutation, bad
 *                      config, out-of-range level); *out untouched
 *   - BI_ERR_MATH      a mathematical check failed (nonzero residual,
 *                      unresolvable degeneracy, invalid gauge); when the
 *                      function produces a report, the report is still
 *                      written so the failure can be inspected
 *   - BI_ERR_INTERNAL  unexpected failure
 * bi_last_error() describes the most recent error on the calling thread.
 * Strings returned through char** are heap-allocated JSON documents; release
 * them with bi_string_free(). Reports are byte-deterministic for identical
 * inputs.
 */
#ifndef BANNAIITO_H
#define BANNAIITO_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct bi_space bi_space;

typedef enum bi_status {
  BI_OK = 0,
  BI_ERR_ARGUMENT = 1,
  BI_ERR_MATH = 2,
  BI_ERR_INTERNAL = 3
} bi_status;

const char* bi_version(void);
const char* bi_last_error(void);

/* A space of n lowest-weight modules with parameters mu[i] (rational strings
 * "p/q") and per-site truncations, keeping total levels <= max_level.
 * truncations may be NULL, in which case every site is truncated at
 * max_level (the smallest choice that keeps all retained blocks exact). */
bi_status bi_space_create(int32_t n_sites, const char* const* mu, const int32_t* truncations,
                          int32_t max_level, bi_space** out);

/* Same, from a JSON config:
 * {"n": 3, "sites": [{"mu": "1/2", "truncation": 4}, ...], "max_level": 4} */
bi_status bi_space_create_json(const char* config_json, bi_space** out);

void bi_space_free(bi_space* space);

int32_t bi_space_sites(const bi_space* space);
int32_t bi_space_max_level(const bi_space* space);
bi_status bi_level_dimension(const bi_space* space, int32_t level, int32_t* out_dim);

/* Exact Casimir operator of the subset {sites[0..n_subset-1]} as a JSON map
 * level -> sparse rational matrix. n_subset may be 0 (the scalar -1/2). */
bi_status bi_casimir_json(const bi_space* space, const int32_t* sites, int32_t n_subset,
                          char** out_json);

/* Exact verification of the quadratic structure relations over every ordered
 * pair of nonempty subsets, plus centrality of the single-site and full-set
 * Casimirs. max_threads <= 0 picks a thread count automatically; the report
 * does not depend on it. emit_timing adds a wall-clock field (and breaks
 * byte-for-byte reproducibility, which is why it is opt-in). */
bi_status bi_verify(const bi_space* space, int32_t max_threads, int32_t emit_timing,
                    char** out_json);

/* Joint eigenbasis of the chain labeled by the permutation chain[0..n-1] on
 * one level block. Fails with BI_ERR_MATH when some eigenvector residual
 * exceeds eig_tol. */
bi_status bi_spectrum(const bi_space* space, const int32_t* chain, int32_t level, double eig_tol,
                      char** out_json);

/* Matrix of the subset operator {op_sites[0..n_op-1]} in a chain eigenbasis,
 * reordered to be tridiagonal. sort_key picks the label that orders columns
 * inside common-label groups; pass -1 to derive it from the operator. Fails
 * with BI_ERR_MATH when the eigenbasis residual exceeds eig_tol or off-band
 * mass exceeds band_tol (relative to the block norm). */
bi_status bi_tridiag(const bi_space* space, const int32_t* chain, const int32_t* op_sites,
                     int32_t n_op, int32_t level, int32_t sort_key, double eig_tol,
                     double band_tol, char** out_json);

/* Connection coefficients between the eigenbases of two chains on one level:
 * per-common-label blocks of the direct overlap, checked against the
 * composed adjacent-swap path and the three-term recurrence of every swap.
 * Fails with BI_ERR_MATH when an eigenbasis residual exceeds eig_tol, when
 * block orthogonality or block-diagonality exceeds cc_tol, or when the
 * path/recurrence residuals exceed 10*cc_tol. */
bi_status bi_connection(const bi_space* space, const int32_t* from, const int32_t* to,
                        int32_t level, double eig_tol, double cc_tol, char** out_json);

void bi_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* BANNAIITO_H */
