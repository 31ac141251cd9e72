#ifndef MSW_H
#define MSW_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum MswStatus {
  MSW_STATUS_OK = 0,
  MSW_STATUS_NULL_POINTER = 1,
  MSW_STATUS_INVALID_ARGUMENT = 2,
  MSW_STATUS_NOT_PRIME = 3,
  MSW_STATUS_SHAPE_MISMATCH = 4,
  MSW_STATUS_ENTRY_OUT_OF_RANGE = 5,
  MSW_STATUS_SINGULAR = 6,
  /*
   An enumeration or scan would exceed its cap.
   */
  MSW_STATUS_TOO_LARGE = 7,
  MSW_STATUS_PRECONDITION_VIOLATED = 8,
  /*
   A JSON document failed to parse or validate.
   */
  MSW_STATUS_MALFORMED = 9,
  MSW_STATUS_INTERNAL = 10,
} MswStatus;

typedef enum MswTheorem {
  MSW_THEOREM_GERSTENHABER = 0,
  MSW_THEOREM_GENERALIZED = 1,
  MSW_THEOREM_ATKINSON = 2,
} MswTheorem;

/*
 Opaque handle to a matrix space.
 */
typedef struct MswSpace MswSpace;

typedef struct MswClassification {
  size_t urk;
  bool condition_i;
  bool condition_ii;
  bool condition_iii;
  bool condition_iv;
  bool reduced;
  bool semi_primitive;
  bool primitive;
} MswClassification;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread; empty after a success.
 The pointer stays valid until the next call on the same thread.
 */
const char *msw_last_error(void);

/*
 Span of `count` matrices of shape `rows x cols`, given row-major and back to back in `data`.

 # Safety
 `data` must point to `count * rows * cols` readable values (it may be null when that is 0);
 `out` must be writable.
 */
enum MswStatus msw_space_new(uint32_t p,
                             size_t rows,
                             size_t cols,
                             size_t count,
                             const uint32_t *data,
                             struct MswSpace **out);

/*
 Build a named space: altn, strict-ut, wedge, p-alt, conj-strict-ut, transformed-wedge.

 # Safety
 `name` must be a nul-terminated string; `out` must be writable.
 */
enum MswStatus msw_space_construct(const char *name,
                                   size_t n,
                                   uint32_t p,
                                   uint64_t seed,
                                   struct MswSpace **out);

/*
 # Safety
 `space` must come from this library and not have been freed; null is ignored.
 */
void msw_space_free(struct MswSpace *space);

/*
 # Safety
 `space` must be a live handle; `out` must be writable.
 */
enum MswStatus msw_space_dim(const struct MswSpace *space, size_t *out);

/*
 # Safety
 `space` must be a live handle; `rows` and `cols` must be writable.
 */
enum MswStatus msw_space_shape(const struct MswSpace *space, size_t *rows, size_t *cols);

/*
 Largest rank of an element, enumerating at most `cap` elements.

 # Safety
 `space` must be a live handle; `out` must be writable.
 */
enum MswStatus msw_space_upper_rank(const struct MswSpace *space, uint64_t cap, size_t *out);

/*
 No element has a nonzero eigenvalue in the field.

 # Safety
 `space` must be a live handle; `out` must be writable.
 */
enum MswStatus msw_space_is_trivial_spectrum(const struct MswSpace *space, uint64_t cap, bool *out);

/*
 # Safety
 `space` must be a live handle; `out` must be writable.
 */
enum MswStatus msw_space_classify(const struct MswSpace *space,
                                  uint64_t cap,
                                  struct MswClassification *out);

/*
 Parse an msw-1 space document.

 # Safety
 `json` must be a nul-terminated string; `out` must be writable.
 */
enum MswStatus msw_space_from_json(const char *json, struct MswSpace **out);

/*
 The msw-1 document of a space, compact. Release with [`msw_string_free`].

 # Safety
 `space` must be a live handle; `out` must be writable.
 */
enum MswStatus msw_space_to_json(const struct MswSpace *space, char **out);

/*
 JSON report of a theorem verifier on `space`. `budget` and `seed` only
 affect the equivalence search of the Atkinson verifier.

 # Safety
 `space` must be a live handle; `out` must be writable.
 */
enum MswStatus msw_theorem_report_json(const struct MswSpace *space,
                                       enum MswTheorem which,
                                       uint64_t cap,
                                       uint64_t budget,
                                       uint64_t seed,
                                       char **out);

/*
 # Safety
 `s` must come from this library and not have been freed; null is ignored.
 */
void msw_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MSW_H */
