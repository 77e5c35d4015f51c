#ifndef FOLIATION_KIT_H
#define FOLIATION_KIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FkStatus {
  FK_STATUS_OK = 0,
  // An asserted identity failed.
  FK_STATUS_VERIFICATION = 1,
  // Malformed or non-generic input.
  FK_STATUS_INPUT = 2,
  // A search cap or numeric breakdown.
  FK_STATUS_CAP = 3,
  FK_STATUS_NULL_POINTER = 4,
  FK_STATUS_INVALID_UTF8 = 5,
  FK_STATUS_PANIC = 6,
} FkStatus;

// Opaque first integral `P^q / Q^p`.
typedef struct FkFirstIntegral FkFirstIntegral;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. Valid until the next call.
const char *fk_last_error(void);

// Library version, a static string.
const char *fk_version(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void fk_string_free(char *s);

// Global Milnor number `(m + n − 1)² − mn` for degrees `(m, n)`.
//
// # Safety
// `out` must be a valid pointer.
enum FkStatus fk_milnor_f(uint32_t m, uint32_t n, uint64_t *out);

// Builds `P^q / Q^p` from homogeneous `P, Q` in `x, y, z`. `p = q = 0` derives the
// exponents from the degrees.
//
// # Safety
// `p_text`, `q_text` must be NUL-terminated; `out` must be valid.
enum FkStatus fk_first_integral_new(const char *p_text,
                                    const char *q_text,
                                    uint32_t p,
                                    uint32_t q,
                                    struct FkFirstIntegral **out);

// # Safety
// `f` must come from [`fk_first_integral_new`] and not have been freed. Null is ignored.
void fk_first_integral_free(struct FkFirstIntegral *f);

// Degrees `m = deg P`, `n = deg Q`.
//
// # Safety
// All pointers must be valid.
enum FkStatus fk_first_integral_degrees(const struct FkFirstIntegral *f, uint32_t *m, uint32_t *n);

// Dimension of the relative module, from a Gröbner basis.
//
// # Safety
// All pointers must be valid.
enum FkStatus fk_module_dimension(const struct FkFirstIntegral *f, uint64_t *out);

// Genericity report as JSON. Free the result with [`fk_string_free`].
//
// # Safety
// All pointers must be valid.
enum FkStatus fk_check_conditions_json(const struct FkFirstIntegral *f, char **out);

// Runs a problem file given as JSON text and returns the report. `seed < 0`
// keeps the file's seed. The return value is the report's exit code as a
// status; the report is produced whenever the input parses.
//
// # Safety
// `problem` must be NUL-terminated; `out` must be valid.
enum FkStatus fk_run_json(const char *problem, int64_t seed, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FOLIATION_KIT_H */
