#ifndef UAREA_H
#define UAREA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum UareaStatus {
  UAREA_STATUS_OK = 0,
  UAREA_STATUS_NULL_POINTER = 1,
  UAREA_STATUS_INVALID_UTF8 = 2,
  UAREA_STATUS_PARSE = 3,
  UAREA_STATUS_INVALID_ARGUMENT = 4,
  UAREA_STATUS_CHECK_FAILED = 5,
  UAREA_STATUS_PANIC = 6,
} UareaStatus;

/*
 An element of the module of area measures for a fixed n.
 */
typedef struct UareaMeasure UareaMeasure;

/*
 An element of the valuation algebra for a fixed n.
 */
typedef struct UareaValuation UareaValuation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread, or NULL. The pointer
 stays valid until the next call into the library on this thread.
 */
const char *uarea_last_error(void);

/*
 # Safety
 `s` must be NULL or a string returned by this library.
 */
void uarea_string_free(char *s);

/*
 Parses a valuation such as `"2*t^2 - mu[2,1]"` in dimension `n`.

 # Safety
 `src` must be a nul-terminated string and `out` a valid pointer.
 */
enum UareaStatus uarea_valuation_parse(uint32_t n, const char *src, struct UareaValuation **out);

/*
 # Safety
 `v` must be NULL or a handle from this library that was not yet freed.
 */
void uarea_valuation_free(struct UareaValuation *v);

/*
 # Safety
 `v` must be a valid handle.
 */
uint32_t uarea_valuation_dimension(const struct UareaValuation *v);

/*
 Display form of `v`; free with `uarea_string_free`. NULL on a null handle.

 # Safety
 `v` must be NULL or a valid handle.
 */
char *uarea_valuation_to_string(const struct UareaValuation *v);

/*
 # Safety
 `v` must be NULL or a valid handle.
 */
char *uarea_valuation_to_json(const struct UareaValuation *v);

/*
 # Safety
 `a` and `b` must be valid handles.
 */
bool uarea_valuation_equal(const struct UareaValuation *a, const struct UareaValuation *b);

/*
 Alesker product.

 # Safety
 `a`, `b` must be valid handles and `out` a valid pointer.
 */
enum UareaStatus uarea_valuation_product(const struct UareaValuation *a,
                                         const struct UareaValuation *b,
                                         struct UareaValuation **out);

/*
 Bernig-Fu convolution.

 # Safety
 `a`, `b` must be valid handles and `out` a valid pointer.
 */
enum UareaStatus uarea_valuation_convolution(const struct UareaValuation *a,
                                             const struct UareaValuation *b,
                                             struct UareaValuation **out);

/*
 # Safety
 `v` must be a valid handle and `out` a valid pointer.
 */
enum UareaStatus uarea_valuation_fourier(const struct UareaValuation *v,
                                         struct UareaValuation **out);

/*
 Parses an area measure such as `"B[3,1] - 2*Gamma[2,1]"` in dimension `n`.

 # Safety
 `src` must be a nul-terminated string and `out` a valid pointer.
 */
enum UareaStatus uarea_measure_parse(uint32_t n, const char *src, struct UareaMeasure **out);

/*
 # Safety
 `m` must be NULL or a handle from this library that was not yet freed.
 */
void uarea_measure_free(struct UareaMeasure *m);

/*
 # Safety
 `m` must be NULL or a valid handle.
 */
char *uarea_measure_to_string(const struct UareaMeasure *m);

/*
 # Safety
 `m` must be NULL or a valid handle.
 */
char *uarea_measure_to_json(const struct UareaMeasure *m);

/*
 # Safety
 `a` and `b` must be valid handles.
 */
bool uarea_measure_equal(const struct UareaMeasure *a, const struct UareaMeasure *b);

/*
 Convolution of a valuation with an area measure.

 # Safety
 `phi`, `m` must be valid handles and `out` a valid pointer.
 */
enum UareaStatus uarea_act(const struct UareaValuation *phi,
                           const struct UareaMeasure *m,
                           struct UareaMeasure **out);

/*
 Globalization of an area measure.

 # Safety
 `m` must be a valid handle and `out` a valid pointer.
 */
enum UareaStatus uarea_glob(const struct UareaMeasure *m, struct UareaValuation **out);

/*
 First variation of a valuation.

 # Safety
 `phi` must be a valid handle and `out` a valid pointer.
 */
enum UareaStatus uarea_first_variation(const struct UareaValuation *phi, struct UareaMeasure **out);

/*
 Writes whether `m` is angular.

 # Safety
 `m` must be a valid handle and `out` a valid pointer.
 */
enum UareaStatus uarea_measure_is_angular(const struct UareaMeasure *m, bool *out);

/*
 Dimension of the degree-`k` part of the valuation algebra.

 # Safety
 `out` must be a valid pointer.
 */
enum UareaStatus uarea_dim_val(uint32_t n, int64_t k, size_t *out);

/*
 Dimension of the degree-`k` part of the module of area measures.

 # Safety
 `out` must be a valid pointer.
 */
enum UareaStatus uarea_dim_area(uint32_t n, int64_t k, size_t *out);

/*
 Runs the named check for every n in `n_min..=n_max`. Returns
 `UAREA_STATUS_CHECK_FAILED` if any of them fails.

 # Safety
 `name` must be a nul-terminated string.
 */
enum UareaStatus uarea_verify(const char *name, uint32_t n_min, uint32_t n_max);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* UAREA_H */
