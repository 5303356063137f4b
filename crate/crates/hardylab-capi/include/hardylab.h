#ifndef HARDYLAB_H
#define HARDYLAB_H

/* Generated by cbindgen from hardylab-capi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Extended-eigenvalue verdicts.
typedef enum HlEeStatus {
  HL_EE_STATUS_IN = 0,
  HL_EE_STATUS_OUT = 1,
  HL_EE_STATUS_UNDETERMINED = 2,
} HlEeStatus;

// Typed subordination outcomes (`Found` means a lift was produced).
typedef enum HlLiftOutcome {
  HL_LIFT_OUTCOME_FOUND = 0,
  HL_LIFT_OUTCOME_NO_ROOT = 1,
  HL_LIFT_OUTCOME_CRITICAL_POINT = 2,
  HL_LIFT_OUTCOME_BRANCH_CUT_HIT = 3,
  HL_LIFT_OUTCOME_NOT_SELF_MAP = 4,
} HlLiftOutcome;

// Status codes shared by every entry point.
typedef enum HlStatus {
  // Success.
  HL_STATUS_OK = 0,
  // Malformed input (bad spec text, bad parameters).
  HL_STATUS_USAGE = 1,
  // A precondition of the operation was rejected (not a self-map, not
  // inner, empty valid block, …).
  HL_STATUS_MATH = 2,
  // A required pointer was NULL.
  HL_STATUS_NULL_POINTER = 3,
  // Internal panic captured at the boundary.
  HL_STATUS_PANIC = 4,
} HlStatus;

// Opaque operator matrix on truncated H².
typedef struct HlOperator HlOperator;

// Opaque truncated power series.
typedef struct HlSeries HlSeries;

// Opaque symbol specification φ, ψ, ω, h.
typedef struct HlSymbol HlSymbol;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copy the thread-local message for the most recent failure into `buf`
// (NUL-terminated, truncated to `len`). Returns the full message length.
//
// # Safety
// `buf` must point to at least `len` writable bytes, or be NULL (then only
// the length is returned).
size_t hl_last_error(char *buf, size_t len);

// Parse a symbol from shorthand (`z`, `z2z`, `unit_singular`, `z+1`, …) or
// the JSON schema `{"tag": …}` with complex numbers as `[re, im]`.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be a valid pointer.
enum HlStatus hl_symbol_parse(const char *text, struct HlSymbol **out);

// # Safety
// `sym` must come from `hl_symbol_parse` and not have been freed.
void hl_symbol_free(struct HlSymbol *sym);

// Closed-form evaluation at a point of the open disc.
//
// # Safety
// `sym` must be a live handle; `out_re`/`out_im` must be valid pointers.
enum HlStatus hl_symbol_eval(const struct HlSymbol *sym,
                             double re,
                             double im,
                             double *out_re,
                             double *out_im);

// Sampled sup-norm estimate (a lower bound for ‖f‖_∞).
//
// # Safety
// `sym` must be a live handle; `out` must be valid.
enum HlStatus hl_symbol_sup_norm(const struct HlSymbol *sym, size_t mesh, double *out);

// First N Taylor coefficients of the symbol.
//
// # Safety
// `sym` must be a live handle; `out` must be valid.
enum HlStatus hl_symbol_to_series(const struct HlSymbol *sym, size_t n, struct HlSeries **out);

// # Safety
// `series` must come from this library and not have been freed.
void hl_series_free(struct HlSeries *series);

// Window length (truncation N).
//
// # Safety
// `series` must be a live handle.
size_t hl_series_len(const struct HlSeries *series);

// Coefficient k of the series (zero past the window).
//
// # Safety
// `series` must be a live handle; `out_re`/`out_im` must be valid.
enum HlStatus hl_series_coeff(const struct HlSeries *series,
                              size_t k,
                              double *out_re,
                              double *out_im);

// Lower-triangular Toeplitz matrix T_φ at truncation N.
//
// # Safety
// `sym` must be a live handle; `out` must be valid.
enum HlStatus hl_toeplitz_new(const struct HlSymbol *sym, size_t n, struct HlOperator **out);

// Weighted composition matrix C_{ω,h} at truncation N (ω must certify as a
// self-map unless ω(0) = 0; h must not vanish identically).
//
// # Safety
// `omega` and `weight` must be live handles; `out` must be valid.
enum HlStatus hl_weighted_comp_new(const struct HlSymbol *omega,
                                   const struct HlSymbol *weight,
                                   size_t n,
                                   struct HlOperator **out);

// # Safety
// `op` must come from this library and not have been freed.
void hl_operator_free(struct HlOperator *op);

// Leading column count that truncation provably did not disturb.
//
// # Safety
// `op` must be a live handle.
size_t hl_operator_valid_block(const struct HlOperator *op);

// Largest singular value by power iteration; `converged` reports whether
// the tolerance was met before the iteration cap (the value is a lower
// bound either way).
//
// # Safety
// `op` must be a live handle; out-pointers must be valid.
enum HlStatus hl_operator_norm(const struct HlOperator *op,
                               double *out_value,
                               int32_t *out_converged);

// Residual of XT_φ − T_ψX on the valid block, with the relative form
// residual / (‖X‖·max(‖T_φ‖, ‖T_ψ‖)).
//
// # Safety
// All handles must be live; out-pointers must be valid.
enum HlStatus hl_intertwine_residual(const struct HlOperator *x,
                                     const struct HlSymbol *phi,
                                     const struct HlSymbol *psi,
                                     double *out_residual,
                                     double *out_relative);

// Extended-eigenvalue membership verdict for λ against T_φ.
//
// # Safety
// `phi` must be a live handle; `out_status` must be valid.
enum HlStatus hl_ee_membership(const struct HlSymbol *phi,
                               double lambda_re,
                               double lambda_im,
                               enum HlEeStatus *out_status);

// Solve φ∘ω = ψ for a holomorphic self-map ω at truncation N.
//
// On success `*out_outcome` is `FOUND` and `*out_omega` holds the lift
// series; on a typed refusal the outcome code says why and `*out_omega` is
// NULL — both are `HL_STATUS_OK` at the ABI level.
//
// # Safety
// `phi` and `psi` must be live handles; out-pointers must be valid.
enum HlStatus hl_subordination_solve(const struct HlSymbol *phi,
                                     const struct HlSymbol *psi,
                                     size_t n,
                                     struct HlSeries **out_omega,
                                     enum HlLiftOutcome *out_outcome);

// Winding-number valence of w against φ(r𝕌): `out_valence` is the preimage
// count, `out_resolved` is 0 when the point sits in the mesh's unresolved
// band.
//
// # Safety
// `phi` must be a live handle; out-pointers must be valid.
enum HlStatus hl_valence(const struct HlSymbol *phi,
                         double w_re,
                         double w_im,
                         size_t mesh,
                         uint32_t *out_valence,
                         int32_t *out_resolved,
                         double *out_margin);

// Membership in the open cardioid image of z² + z (polar form
// r < 2cos(θ/3)). Returns 1 for inside.
int32_t hl_cardioid_membership(double re, double im);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* HARDYLAB_H */
