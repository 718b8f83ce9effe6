#ifndef CABTORSION_H
#define CABTORSION_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call. The nonzero library codes match the CLI
// exit codes.
typedef enum CabStatus {
  CAB_STATUS_OK = 0,
  CAB_STATUS_INVALID_INPUT = 1,
  CAB_STATUS_INAPPLICABLE = 2,
  CAB_STATUS_CAP_EXCEEDED = 3,
  CAB_STATUS_NULL_POINTER = 10,
  CAB_STATUS_INVALID_UTF8 = 11,
  CAB_STATUS_PANIC = 12,
} CabStatus;

// Opaque curve handle.
typedef struct CabCurve CabCurve;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or null. Valid until the
// next failing call on the same thread; do not free.
const char *cab_last_error(void);

// Parses a JSON curve spec and builds the curve.
//
// # Safety
// `json` is a NUL-terminated string; `out` points to writable storage.
enum CabStatus cab_curve_from_json(const char *json, struct CabCurve **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `h` is null or a handle from `cab_curve_from_json` not yet freed.
void cab_curve_free(struct CabCurve *h);

// Overrides the extension-degree and series-precision caps; zero keeps the
// current value.
//
// # Safety
// `h` is a live handle.
enum CabStatus cab_curve_set_caps(struct CabCurve *h, uintptr_t ext_cap, uintptr_t series_cap);

// Genus (a-1)(b-1)/2.
//
// # Safety
// `h` is a live handle; `out` points to writable storage.
enum CabStatus cab_curve_genus(const struct CabCurve *h, uintptr_t *out);

// Number of points over the degree-m extension of the base field.
//
// # Safety
// `h` is a live handle; `out` points to writable storage.
enum CabStatus cab_curve_count_points(const struct CabCurve *h, uintptr_t m, uint64_t *out);

// |X[N]|, the number of points of the curve that are N-torsion in the
// Jacobian. Fails with `CapExceeded` if some closed point lies beyond the
// extension cap.
//
// # Safety
// `h` is a live handle; `out` points to writable storage.
enum CabStatus cab_torsion_count(const struct CabCurve *h, uintptr_t n, uintptr_t *out);

// JSON report of genus, gaps and ramification.
//
// # Safety
// `h` is a live handle; `out` points to writable storage.
enum CabStatus cab_analyze_json(const struct CabCurve *h, char **out);

// JSON report of Δ_N and its minors for N in [n_lo, n_hi]; `r` < 0 means
// every truncation level.
//
// # Safety
// `h` is a live handle; `out` points to writable storage.
enum CabStatus cab_delta_json(const struct CabCurve *h,
                              uintptr_t n_lo,
                              uintptr_t n_hi,
                              int64_t r,
                              char **out);

// JSON report of X[N] with orbits and the bound check.
//
// # Safety
// `h` is a live handle; `out` points to writable storage.
enum CabStatus cab_torsion_json(const struct CabCurve *h,
                                uintptr_t n,
                                bool purely_inseparable,
                                char **out);

// JSON report of every bound for N in [n_lo, n_hi] from a manual
// ramification profile in characteristic `p`.
//
// # Safety
// `profile_json` is a NUL-terminated string; `out` points to writable storage.
enum CabStatus cab_bounds_profile_json(const char *profile_json,
                                       uint64_t p,
                                       uintptr_t n_lo,
                                       uintptr_t n_hi,
                                       bool purely_inseparable,
                                       bool delta_nonzero,
                                       char **out);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` is null or a string from this library not yet freed.
void cab_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CABTORSION_H */
