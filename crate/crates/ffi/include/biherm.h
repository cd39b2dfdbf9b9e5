#ifndef BIHERM_H
#define BIHERM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum BihermStatus {
  BIHERM_STATUS_OK = 0,
  BIHERM_STATUS_NULL_POINTER = 1,
  BIHERM_STATUS_INVALID_ARGUMENT = 2,
  BIHERM_STATUS_DIMENSION_MISMATCH = 3,
  BIHERM_STATUS_BUFFER_TOO_SMALL = 4,
  BIHERM_STATUS_NOT_SYMMETRIC = 5,
  BIHERM_STATUS_NOT_POSITIVE = 6,
  BIHERM_STATUS_NOT_ADMISSIBLE = 7,
  BIHERM_STATUS_NOT_GENERIC = 8,
  BIHERM_STATUS_INVARIANT_VIOLATION = 9,
  BIHERM_STATUS_NUMERICAL = 10,
  BIHERM_STATUS_PANIC = 11,
} BihermStatus;

/**
 * Connecting operator of a pair of forms.
 */
typedef struct BihermConnecting BihermConnecting;

/**
 * Fibered decomposition over the spectrum of a connecting operator.
 */
typedef struct BihermDecomposition BihermDecomposition;

/**
 * Positive-definite Hermitian form.
 */
typedef struct BihermForm BihermForm;

/**
 * Numerical thresholds; see the library documentation for their meaning.
 */
typedef struct BihermTolerances {
  double tol_sym;
  double tol_j;
  double tol_eig;
  double tol_resid;
} BihermTolerances;

typedef struct BihermConnectingResiduals {
  double defining;
  double h1_self_adjoint;
  double h2_self_adjoint;
  double min_eigenvalue;
  double condition_number;
  bool ill_conditioned;
} BihermConnectingResiduals;

typedef struct BihermGenericity {
  /**
   * All eigenvalues of `G` simple.
   */
  bool simple_spectrum;
  /**
   * Commutant equals bicommutant.
   */
  bool commutant_equals_bicommutant;
  bool cyclic;
  size_t commutant_dimension;
  size_t bicommutant_dimension;
} BihermGenericity;

typedef struct BihermFiberInfo {
  double lambda;
  double sigma;
  size_t dim;
} BihermFiberInfo;

typedef struct BihermBiUnitaryReport {
  double h1_residual;
  double h2_residual;
  double commutator_residual;
  bool preserves_h1;
  bool preserves_h2;
  bool commutes;
  bool passed;
} BihermBiUnitaryReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread, or `NULL`. The
 * pointer stays valid until the next `biherm_*` call on the same thread.
 */
const char *biherm_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *biherm_version(void);

struct BihermTolerances biherm_tolerances_default(void);

/**
 * Creates a Hermitian form from an `n × n` complex Gram matrix
 * (`2·n²` doubles, interleaved).
 */
enum BihermStatus biherm_form_new(size_t n,
                                  const double *gram,
                                  const struct BihermTolerances *tol,
                                  struct BihermForm **out);

/**
 * Creates a Hermitian form from a real symmetric `n × n` Gram matrix.
 */
enum BihermStatus biherm_form_new_real(size_t n,
                                       const double *gram,
                                       const struct BihermTolerances *tol,
                                       struct BihermForm **out);

void biherm_form_free(struct BihermForm *form);

/**
 * Dimension of the form, or 0 for `NULL`.
 */
size_t biherm_form_dim(const struct BihermForm *form);

/**
 * Computes `G` with `h2(x, y) = h1(Gx, y)`.
 */
enum BihermStatus biherm_connecting_new(const struct BihermForm *h1,
                                        const struct BihermForm *h2,
                                        const struct BihermTolerances *tol,
                                        struct BihermConnecting **out);

void biherm_connecting_free(struct BihermConnecting *g);

size_t biherm_connecting_dim(const struct BihermConnecting *g);

/**
 * Writes `G` (`2·n²` doubles) into `out`, which holds `len` doubles.
 */
enum BihermStatus biherm_connecting_matrix(const struct BihermConnecting *g,
                                           double *out,
                                           size_t len);

/**
 * Writes the `n` eigenvalues of `G`, ascending.
 */
enum BihermStatus biherm_connecting_spectrum(const struct BihermConnecting *g,
                                             double *out,
                                             size_t len);

enum BihermStatus biherm_connecting_residuals(const struct BihermConnecting *g,
                                              struct BihermConnectingResiduals *out);

/**
 * Genericity verdicts, commutant dimensions and a seeded cyclicity test
 * with `trials` random vectors.
 */
enum BihermStatus biherm_genericity(const struct BihermConnecting *g,
                                    const struct BihermTolerances *tol,
                                    size_t trials,
                                    uint64_t seed,
                                    struct BihermGenericity *out);

/**
 * Multiplicities `(n₁, …, n_k)` of the bi-unitary group
 * `U(n₁) × … × U(n_k)`. `count` always receives `k`; the call fails with
 * `BUFFER_TOO_SMALL` if `len < k`. `out` may be `NULL` when `len` is 0.
 */
enum BihermStatus biherm_signature(const struct BihermConnecting *g,
                                   const struct BihermTolerances *tol,
                                   size_t *out,
                                   size_t len,
                                   size_t *count);

enum BihermStatus biherm_decomposition_new(const struct BihermConnecting *g,
                                           const struct BihermTolerances *tol,
                                           struct BihermDecomposition **out);

void biherm_decomposition_free(struct BihermDecomposition *dec);

size_t biherm_decomposition_fiber_count(const struct BihermDecomposition *dec);

enum BihermStatus biherm_decomposition_fiber(const struct BihermDecomposition *dec,
                                             size_t index,
                                             struct BihermFiberInfo *out);

/**
 * Writes a random bi-unitary transformation (`2·n²` doubles). The same
 * seed always gives the same matrix.
 */
enum BihermStatus biherm_sample_biunitary(const struct BihermDecomposition *dec,
                                          uint64_t seed,
                                          double *out,
                                          size_t len);

/**
 * Checks a complex `n × n` matrix `u` (`2·n²` doubles) against the forms
 * connected by `g`.
 */
enum BihermStatus biherm_verify_biunitary(const struct BihermConnecting *g,
                                          const double *u,
                                          size_t n,
                                          const struct BihermTolerances *tol,
                                          struct BihermBiUnitaryReport *out);

/**
 * Recovers the complex structure `J` (and the compatible metric) from a
 * metric `g` and a symplectic form `omega`, both real `m × m`. `g_out` may
 * be `NULL`.
 */
enum BihermStatus biherm_triple_from_g_omega(size_t m,
                                             const double *g,
                                             const double *omega,
                                             const struct BihermTolerances *tol,
                                             double *j_out,
                                             double *g_out);

/**
 * Hermitian form `h = g + i ω` of the triple generated by a metric `g` and
 * complex structure `j` (real `m × m`). Writes the `(m/2) × (m/2)` complex
 * Gram matrix (`m²/2` doubles) into `h_out`.
 */
enum BihermStatus biherm_hermitian_from_g_j(size_t m,
                                            const double *g,
                                            const double *j,
                                            const struct BihermTolerances *tol,
                                            double *h_out,
                                            size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BIHERM_H */
