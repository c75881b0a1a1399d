#ifndef QUASIHULL_H
#define QUASIHULL_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define QH_OK 0

#define QH_ERR_NULL_POINTER -1

#define QH_ERR_INVALID_ARGUMENT -2

#define QH_ERR_BUFFER_TOO_SMALL -3

#define QH_ERR_PANIC -4

#define QH_ERR_DEGENERATE_QUADRUPLE 1

#define QH_ERR_DEGENERATE_TRIPLE 2

#define QH_ERR_NON_MONOTONE 3

#define QH_ERR_INVALID_SAMPLES 4

#define QH_ERR_COLLINEAR_INPUT 5

#define QH_ERR_NON_JORDAN_ORDER 6

#define QH_ERR_NOT_ACAUSAL 7

#define QH_ERR_PLANAR_HULL 8

#define QH_ERR_ROUTE_MISMATCH 9

#define QH_ERR_CHART_FAILURE 10

/**
 * Any other library error; the message has the details.
 */
#define QH_ERR_DOMAIN 99

/**
 * Convex hull of an acausal polygon in AdS^3.
 */
typedef struct QhAdsHull QhAdsHull;

/**
 * Sampled circle homeomorphism with Moebius interpolation between samples.
 */
typedef struct QhCircleMap QhCircleMap;

/**
 * Ideal convex hull of points of CP^1 in H^3.
 */
typedef struct QhIdealHull QhIdealHull;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *qh_version(void);

/**
 * Message for the last failing call on this thread; empty after a
 * success. Valid until the next call into this library on the same thread.
 */
const char *qh_last_error_message(void);

/**
 * Hull of the polygon with vertices (xs[i], ys[i]) in Ein^{1,1}, listed in
 * cyclic order. `marked` holds three vertex indices.
 *
 * # Safety
 * `xs` and `ys` must hold `n` doubles, `marked` three indices, and `out`
 * must be writable.
 */
int32_t qh_ads_hull_new(const double *xs,
                        const double *ys,
                        size_t n,
                        const size_t *marked,
                        struct QhAdsHull **out);

/**
 * # Safety
 * `hull` must be null or a handle from `qh_ads_hull_new` not yet freed.
 */
void qh_ads_hull_free(struct QhAdsHull *hull);

/**
 * Number of faces on both boundary components together.
 *
 * # Safety
 * `hull` must be a live handle and `count` writable.
 */
int32_t qh_ads_hull_face_count(const struct QhAdsHull *hull, size_t *count);

/**
 * Width bracket `lower <= w <= upper`.
 *
 * # Safety
 * `hull` must be a live handle; `lower` and `upper` writable.
 */
int32_t qh_ads_hull_width(const struct QhAdsHull *hull, double *lower, double *upper);

/**
 * Largest vertex deviation of the earthquake reconstruction of the
 * boundary map from the two bending laminations.
 *
 * # Safety
 * `hull` must be a live handle and `deviation` writable.
 */
int32_t qh_ads_hull_mess_deviation(const struct QhAdsHull *hull, double *deviation);

/**
 * Normalized gluing samples from the development route, plus the
 * disagreement with the earthquake route.
 *
 * # Safety
 * `hull` must be a live handle; `xs` and `ys` must have room for `cap`
 * doubles; `len` and `discrepancy` writable (`discrepancy` may be null).
 */
int32_t qh_ads_hull_gluing(const struct QhAdsHull *hull,
                           double *xs,
                           double *ys,
                           size_t cap,
                           size_t *len,
                           double *discrepancy);

/**
 * Ideal hull of the points re[i] + i im[i], in order along the curve.
 *
 * # Safety
 * `re` and `im` must hold `n` doubles, `marked` three indices, and `out`
 * must be writable.
 */
int32_t qh_ideal_hull_new(const double *re,
                          const double *im,
                          size_t n,
                          const size_t *marked,
                          struct QhIdealHull **out);

/**
 * # Safety
 * `hull` must be null or a handle from `qh_ideal_hull_new` not yet freed.
 */
void qh_ideal_hull_free(struct QhIdealHull *hull);

/**
 * Face count and whether the hull collapsed to a plane.
 *
 * # Safety
 * `hull` must be a live handle; `count` and `planar` writable.
 */
int32_t qh_ideal_hull_info(const struct QhIdealHull *hull, size_t *count, bool *planar);

/**
 * Normalized gluing samples between the two pleated boundary components.
 *
 * # Safety
 * As for `qh_ads_hull_gluing`, without the discrepancy.
 */
int32_t qh_ideal_hull_gluing(const struct QhIdealHull *hull,
                             double *xs,
                             double *ys,
                             size_t cap,
                             size_t *len);

/**
 * Circle map through the samples (xs[i], ys[i]), cyclically monotone.
 *
 * # Safety
 * `xs` and `ys` must hold `n` doubles and `out` must be writable.
 */
int32_t qh_circle_map_new(const double *xs, const double *ys, size_t n, struct QhCircleMap **out);

/**
 * # Safety
 * `map` must be null or a handle from `qh_circle_map_new` not yet freed.
 */
void qh_circle_map_free(struct QhCircleMap *map);

/**
 * Value of the map at `x`.
 *
 * # Safety
 * `map` must be a live handle and `y` writable.
 */
int32_t qh_circle_map_eval(const struct QhCircleMap *map, double x, double *y);

/**
 * Seeded lower estimate of the cross-ratio distortion over `count`
 * symmetric quadruples.
 *
 * # Safety
 * `map` must be a live handle and `estimate` writable.
 */
int32_t qh_circle_map_qs_estimate(const struct QhCircleMap *map,
                                  uint64_t seed,
                                  size_t count,
                                  double *estimate);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUASIHULL_H */
