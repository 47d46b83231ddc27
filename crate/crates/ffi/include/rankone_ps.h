#ifndef RANKONE_PS_H
#define RANKONE_PS_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RpsModel {
  RPS_MODEL_H2 = 2,
  RPS_MODEL_H3 = 3,
} RpsModel;

// Status code of every call.
typedef enum RpsStatus {
  RPS_STATUS_OK = 0,
  RPS_STATUS_NULL_POINTER = 1,
  RPS_STATUS_INVALID_ARGUMENT = 2,
  RPS_STATUS_NOT_CONVERGED = 3,
  RPS_STATUS_DIAGONAL = 4,
  RPS_STATUS_NOT_UNIMODULAR = 5,
  RPS_STATUS_POLE = 6,
  RPS_STATUS_CONFIG = 7,
  RPS_STATUS_IO = 8,
  RPS_STATUS_NUMERICAL = 9,
  RPS_STATUS_PANIC = 10,
} RpsStatus;

// Opaque finite atomic boundary distribution.
typedef struct RpsDistribution RpsDistribution;

// Opaque group element.
typedef struct RpsGroupElement RpsGroupElement;

// Opaque symbol from the built-in family together with its cutoff.
typedef struct RpsSymbol RpsSymbol;

typedef struct RpsComplex {
  double re;
  double im;
} RpsComplex;

// Iwasawa coordinates `g = k a_t n_z`.
typedef struct RpsIwasawa {
  double t;
  struct RpsComplex n;
} RpsIwasawa;

// Point of the hyperbolic space in half-space coordinates (`zeta.im = 0` for h2).
typedef struct RpsSpacePoint {
  struct RpsComplex zeta;
  double y;
} RpsSpacePoint;

// Boundary point as a unit vector; h2 points have `v[2] = 0`.
typedef struct RpsBoundaryPoint {
  double v[3];
} RpsBoundaryPoint;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. Valid until the
// next call on the same thread.
const char *rps_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *rps_version(void);

// Frees a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be freed twice.
void rps_string_free(char *s);

// Group element from its entries in row-major order; `det` must be 1.
//
// # Safety
// `entries` points to four values; `out` is writable.
enum RpsStatus rps_group_new(enum RpsModel m,
                             const struct RpsComplex *entries,
                             struct RpsGroupElement **out);

// `a_t = diag(e^{t/2}, e^{-t/2})`.
//
// # Safety
// `out` is writable.
enum RpsStatus rps_group_a(enum RpsModel m, double t, struct RpsGroupElement **out);

// `n_z = [[1, z], [0, 1]]` (`z` real for h2).
//
// # Safety
// `out` is writable.
enum RpsStatus rps_group_n(enum RpsModel m, struct RpsComplex z, struct RpsGroupElement **out);

// Product `a * b`.
//
// # Safety
// Handles are valid; `out` is writable.
enum RpsStatus rps_group_mul(const struct RpsGroupElement *a,
                             const struct RpsGroupElement *b,
                             struct RpsGroupElement **out);

// Entries in row-major order.
//
// # Safety
// `g` is valid; `out` has room for four values.
enum RpsStatus rps_group_entries(const struct RpsGroupElement *g, struct RpsComplex *out);

// # Safety
// `g` comes from this library and is not used afterwards. Null is ignored.
void rps_group_free(struct RpsGroupElement *g);

// Iwasawa decomposition `g = k a_t n_z`; `k_out` may be null.
//
// # Safety
// `g` is valid; `out` is writable.
enum RpsStatus rps_iwasawa(const struct RpsGroupElement *g,
                           struct RpsIwasawa *out,
                           struct RpsGroupElement **k_out);

// `H(g)`, the `A`-coordinate of the Iwasawa decomposition.
//
// # Safety
// `g` is valid; `out` is writable.
enum RpsStatus rps_iwasawa_h(const struct RpsGroupElement *g, double *out);

// Harish-Chandra c-function `c(lambda)`.
//
// # Safety
// `out` is writable.
enum RpsStatus rps_c_function(enum RpsModel m, double lambda, struct RpsComplex *out);

// Plane wave `e^{(i lambda + rho) <z, b>}`.
//
// # Safety
// `out` is writable.
enum RpsStatus rps_plane_wave(enum RpsModel m,
                              struct RpsSpacePoint z,
                              double lambda,
                              struct RpsBoundaryPoint b,
                              struct RpsComplex *out);

// Empty distribution; add atoms with [`rps_distribution_add_atom`].
//
// # Safety
// `out` is writable.
enum RpsStatus rps_distribution_new(enum RpsModel m, struct RpsDistribution **out);

// Adds the atom `weight * delta_b`. Atoms closer than the minimal chordal
// gap to an existing one are rejected.
//
// # Safety
// `d` is valid.
enum RpsStatus rps_distribution_add_atom(struct RpsDistribution *d,
                                         struct RpsComplex weight,
                                         struct RpsBoundaryPoint b);

// # Safety
// `d` comes from this library and is not used afterwards. Null is ignored.
void rps_distribution_free(struct RpsDistribution *d);

// Poisson transform `P_lambda(T)(z)`.
//
// # Safety
// `d` is valid; `out` is writable.
enum RpsStatus rps_poisson(const struct RpsDistribution *d,
                           double lambda,
                           struct RpsSpacePoint z,
                           struct RpsComplex *out);

// Symbol from a TOML table with the fields of a suite config's `[symbol]`
// section, with a smooth cutoff of radius `cutoff_radius` around
// `cutoff_center`.
//
// # Safety
// `spec_toml` is a NUL-terminated string; `out` is writable.
enum RpsStatus rps_symbol_new(enum RpsModel m,
                              const char *spec_toml,
                              struct RpsSpacePoint cutoff_center,
                              double cutoff_radius,
                              struct RpsSymbol **out);

// # Safety
// `s` comes from this library and is not used afterwards. Null is ignored.
void rps_symbol_free(struct RpsSymbol *s);

// Wigner pairing `<chi Op(a) P_{lambda_k}(T_k), P_{lambda_j}(T_j)>` as a
// bilinear sum over the atoms. `err_out` may be null.
//
// # Safety
// Handles are valid; `out` is writable.
enum RpsStatus rps_wigner(const struct RpsSymbol *s,
                          double lambda_j,
                          const struct RpsDistribution *tj,
                          double lambda_k,
                          const struct RpsDistribution *tk,
                          double rel_tol,
                          struct RpsComplex *out,
                          double *err_out);

// Patterson-Sullivan pairing of the window `chi(g o) a(g o, g M)`, or of
// `L_{lambda_k}` applied to it when `apply_l_lambda` is non-zero.
//
// # Safety
// Handles are valid; `out` is writable.
enum RpsStatus rps_ps_pairing(const struct RpsSymbol *s,
                              double lambda_j,
                              const struct RpsDistribution *tj,
                              double lambda_k,
                              const struct RpsDistribution *tk,
                              int32_t apply_l_lambda,
                              double rel_tol,
                              struct RpsComplex *out);

// Runs a verification suite from a TOML config and returns the report as
// JSON (`format` 0) or CSV (`format` 1). `parallelism` 0 keeps the config
// value. Free `report_out` with [`rps_string_free`].
//
// # Safety
// `config_toml` is a NUL-terminated string; out pointers are writable.
enum RpsStatus rps_run_suite(const char *config_toml,
                             uintptr_t parallelism,
                             int32_t format,
                             char **report_out,
                             int32_t *passed_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RANKONE_PS_H */
