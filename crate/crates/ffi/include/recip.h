#ifndef RECIP_H
#define RECIP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RecipStatus {
  RECIP_STATUS_OK = 0,
  RECIP_STATUS_NULL_POINTER = 1,
  RECIP_STATUS_PARSE = 2,
  RECIP_STATUS_SHAPE = 3,
  RECIP_STATUS_DOMAIN = 4,
  RECIP_STATUS_SEPARABILITY = 5,
  RECIP_STATUS_RESOURCE = 6,
  RECIP_STATUS_IO = 7,
  RECIP_STATUS_PANIC = 8,
} RecipStatus;

/*
 Result of a census run.
 */
typedef struct RecipCensus RecipCensus;

/*
 Integer polynomial with ascending coefficients.
 */
typedef struct RecipPoly RecipPoly;

typedef struct RecipFlags {
  size_t n;
  bool g_irreducible;
  /*
   0 certified, 1 refuted, 2 undetermined.
   */
  int32_t gg_full_sn;
  bool in_g1;
  bool in_g2;
  /*
   0 yes, 1 no, 2 not applicable, 3 undetermined.
   */
  int32_t in_g3;
  bool reducible_f;
} RecipFlags;

typedef struct RecipCensusCounts {
  uint64_t total;
  uint64_t inseparable;
  uint64_t reducible_f;
  uint64_t g1;
  uint64_t g2;
  uint64_t g3;
  uint64_t gg_not_sn;
  uint64_t undetermined;
} RecipCensusCounts;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or null. Valid until the next call.
 */
const char *recip_last_error(void);

/*
 # Safety
 `s` must come from this library or be null.
 */
void recip_string_free(char *s);

/*
 # Safety
 `coeffs` must point to `len` readable values; `out` must be writable.
 */
enum RecipStatus recip_poly_new(const int64_t *coeffs, size_t len, struct RecipPoly **out);

/*
 Parses comma-separated ascending coefficients.

 # Safety
 `text` must be a NUL-terminated string; `out` must be writable.
 */
enum RecipStatus recip_poly_parse(const char *text, struct RecipPoly **out);

/*
 # Safety
 `poly` must come from [`recip_poly_new`] or [`recip_poly_parse`], or be null.
 */
void recip_poly_free(struct RecipPoly *poly);

/*
 Degree, or -1 for the zero polynomial.

 # Safety
 `poly` must be a live handle.
 */
int64_t recip_poly_degree(const struct RecipPoly *poly);

/*
 Discriminant of a reciprocal `f` computed through its symmetrized `g`, as a decimal string.

 # Safety
 `poly` must be a live handle; `out` must be writable.
 */
enum RecipStatus recip_disc_f(const struct RecipPoly *poly, char **out);

/*
 # Safety
 `poly` must be a live handle; `out` must be writable.
 */
enum RecipStatus recip_classify(const struct RecipPoly *poly,
                                size_t prime_budget,
                                struct RecipFlags *out);

/*
 Full flags, fingerprint included, as JSON.

 # Safety
 `poly` must be a live handle; `out` must be writable.
 */
enum RecipStatus recip_classify_json(const struct RecipPoly *poly, size_t prime_budget, char **out);

/*
 # Safety
 `out` must be writable.
 */
enum RecipStatus recip_count_xyz_square(uint64_t h, uint64_t *out);

/*
 Runs a census; `workers = 0` uses every core.

 # Safety
 `out` must be writable.
 */
enum RecipStatus recip_census_run(size_t n,
                                  uint64_t h,
                                  bool monic,
                                  size_t workers,
                                  uint64_t seed,
                                  struct RecipCensus **out);

/*
 # Safety
 `census` must be a live handle; `out` must be writable.
 */
enum RecipStatus recip_census_counts(const struct RecipCensus *census,
                                     struct RecipCensusCounts *out);

/*
 The census record as one JSON line.

 # Safety
 `census` must be a live handle; `out` must be writable.
 */
enum RecipStatus recip_census_json(const struct RecipCensus *census, char **out);

/*
 # Safety
 `census` must come from [`recip_census_run`] or be null.
 */
void recip_census_free(struct RecipCensus *census);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* RECIP_H */
