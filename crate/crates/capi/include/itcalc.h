/* C interface to the itcalc engine. */

#ifndef ITCALC_H
#define ITCALC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible entry point.
typedef enum ItcalcStatus {
  ITCALC_OK = 0,
  ITCALC_ERR_NULL_ARGUMENT = 1,
  ITCALC_ERR_INVALID_UTF8 = 2,
  ITCALC_ERR_PARSE = 3,
  ITCALC_ERR_COMPUTE = 4,
} ItcalcStatus;

// An immutable bound quiver algebra.
typedef struct ItcalcAlgebra ItcalcAlgebra;

// A relatively split exact structure `F = F_{add(A (+) G)}` over an algebra.
typedef struct ItcalcStructure ItcalcStructure;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the most recent failure on this thread, or null.
// The pointer is valid until the next failing call on the same thread.
const char *itcalc_last_error(void);

// Parse an algebra description (the `.alg` text format).
//
// # Safety
// `text` must be a valid NUL-terminated string and `out` a valid pointer.
enum ItcalcStatus itcalc_algebra_parse(const char *text, struct ItcalcAlgebra **out);

// # Safety
// `a` must come from `itcalc_algebra_parse` and not be freed twice.
void itcalc_algebra_free(struct ItcalcAlgebra *a);

// Total k-dimension of the algebra, or 0 for a null handle.
//
// # Safety
// `a` must be null or a live algebra handle.
size_t itcalc_algebra_dim(const struct ItcalcAlgebra *a);

// Build the structure `F_{add(A (+) G)}` from a generator expression
// (`A` for the trivial case, otherwise e.g. `S(1)+P(2)/rad^1`).
//
// # Safety
// `a` must be a live algebra handle; `generator` a valid string; `out` a
// valid pointer.
enum ItcalcStatus itcalc_structure_new(const struct ItcalcAlgebra *a,
                                       const char *generator,
                                       uint64_t seed,
                                       struct ItcalcStructure **out);

// # Safety
// `s` must come from `itcalc_structure_new` and not be freed twice.
void itcalc_structure_free(struct ItcalcStructure *s);

// Compute phi of a module given by an expression; the result is a JSON
// object `{"phi", "certified", "rank_sequence", "registry_size"}`.
//
// # Safety
// `s` must be a live structure handle; `module` a valid string; `json_out`
// a valid pointer. The returned string must be freed with
// `itcalc_string_free`.
enum ItcalcStatus itcalc_phi(const struct ItcalcStructure *s,
                             const char *module,
                             uint64_t seed,
                             size_t horizon,
                             char **json_out);

// Compute phi-dim over the full Nakayama family of indecomposables; the
// result has the same shape as `itcalc_phi` with `phi_dim` in place of
// `phi`.
//
// # Safety
// Same contract as `itcalc_phi`, without the module argument.
enum ItcalcStatus itcalc_phi_dim_nakayama(const struct ItcalcStructure *s,
                                          uint64_t seed,
                                          size_t horizon,
                                          char **json_out);

// `dim Ext_F^degree(module, target)`, written to `out`.
//
// # Safety
// `s` must be a live structure handle; `module` and `target` valid
// strings; `out` a valid pointer.
enum ItcalcStatus itcalc_ext_dim(const struct ItcalcStructure *s,
                                 const char *module,
                                 const char *target,
                                 size_t degree,
                                 size_t *out);

// Release a string returned by this library.
//
// # Safety
// `s` must be null or a string produced by this library, freed once.
void itcalc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ITCALC_H */
