#ifndef BOXLAB_H
#define BOXLAB_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BoxlabStatus {
  BOXLAB_STATUS_OK = 0,
  BOXLAB_STATUS_NULL_POINTER = 1,
  BOXLAB_STATUS_INVALID_ARGUMENT = 2,
  BOXLAB_STATUS_PARSE = 3,
  BOXLAB_STATUS_INVALID_BOX = 4,
  BOXLAB_STATUS_UNSUPPORTED = 5,
  BOXLAB_STATUS_NUMERICAL = 6,
  BOXLAB_STATUS_INCONSISTENT = 7,
  BOXLAB_STATUS_PANIC = 8,
} BoxlabStatus;

typedef enum BoxlabProtocol {
  /**
   * Party 2 answers first and its output becomes party 3's input.
   */
  BOXLAB_PROTOCOL_TWO_TO_THREE = 0,
  /**
   * Party 3 answers first and its output becomes party 2's input.
   */
  BOXLAB_PROTOCOL_THREE_TO_TWO = 1,
} BoxlabProtocol;

typedef enum BoxlabClass {
  BOXLAB_CLASS_FL = 0,
  BOXLAB_CLASS_NSBL = 1,
  BOXLAB_CLASS_TOBL = 2,
  BOXLAB_CLASS_ATOBL_LEFT = 3,
  BOXLAB_CLASS_ATOBL_RIGHT = 4,
  BOXLAB_CLASS_ATOBL_UNION = 5,
  BOXLAB_CLASS_ATOBL_HULL = 6,
  BOXLAB_CLASS_BL = 7,
  BOXLAB_CLASS_NS = 8,
} BoxlabClass;

/**
 * Opaque two-party box.
 */
typedef struct BoxlabBox2 BoxlabBox2;

/**
 * Opaque three-party box.
 */
typedef struct BoxlabBox3 BoxlabBox3;

/**
 * Opaque classification report.
 */
typedef struct BoxlabReport BoxlabReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *boxlab_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void boxlab_string_free(char *s);

/**
 * # Safety
 * `b` must be null or a live handle from this library.
 */
void boxlab_box3_free(struct BoxlabBox3 *b);

/**
 * # Safety
 * `b` must be null or a live handle from this library.
 */
void boxlab_box2_free(struct BoxlabBox2 *b);

/**
 * # Safety
 * `r` must be null or a live handle from this library.
 */
void boxlab_report_free(struct BoxlabReport *r);

/**
 * Validates 64 row-major probabilities into a box. Entries in `[-tol, 0)`
 * are clamped to zero.
 *
 * # Safety
 * `values` must point to 64 readable doubles; `out` must be writable.
 */
enum BoxlabStatus boxlab_box3_new(const double *values, double tol, struct BoxlabBox3 **out);

/**
 * Copies the 64 probabilities into `out`.
 *
 * # Safety
 * `b` must be a live handle; `out` must have room for 64 doubles.
 */
enum BoxlabStatus boxlab_box3_probabilities(const struct BoxlabBox3 *b, double *out);

/**
 * # Safety
 * `values` must point to 16 readable doubles; `out` must be writable.
 */
enum BoxlabStatus boxlab_box2_new(const double *values, double tol, struct BoxlabBox2 **out);

/**
 * # Safety
 * `b` must be a live handle; `out` must have room for 16 doubles.
 */
enum BoxlabStatus boxlab_box2_probabilities(const struct BoxlabBox2 *b, double *out);

/**
 * GHZ box with the default measurements.
 *
 * # Safety
 * `out` must be writable.
 */
enum BoxlabStatus boxlab_ghz(struct BoxlabBox3 **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum BoxlabStatus boxlab_noise(struct BoxlabBox3 **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum BoxlabStatus boxlab_peps_left(double eps, struct BoxlabBox3 **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum BoxlabStatus boxlab_peps_right(double eps, struct BoxlabBox3 **out);

/**
 * `alpha * left + (1 - alpha) * right`.
 *
 * # Safety
 * `out` must be writable.
 */
enum BoxlabStatus boxlab_peps_alpha(double eps, double alpha, struct BoxlabBox3 **out);

/**
 * PR box with `o xor o' = i i' xor a i xor b i' xor g`.
 *
 * # Safety
 * `out` must be writable.
 */
enum BoxlabStatus boxlab_pr(uint8_t a, uint8_t b, uint8_t g, struct BoxlabBox2 **out);

/**
 * # Safety
 * `b` must be a live handle; `out` must be writable.
 */
enum BoxlabStatus boxlab_wire(const struct BoxlabBox3 *b,
                              enum BoxlabProtocol protocol,
                              struct BoxlabBox2 **out);

/**
 * CHSH value under the canonical sign pattern `+,+,-,+`.
 *
 * # Safety
 * `b` must be a live handle; `out` must be writable.
 */
enum BoxlabStatus boxlab_chsh(const struct BoxlabBox2 *b, double *out);

/**
 * Largest CHSH value over the eight sign patterns.
 *
 * # Safety
 * `b` must be a live handle; `out` must be writable.
 */
enum BoxlabStatus boxlab_chsh_max(const struct BoxlabBox2 *b, double *out);

/**
 * # Safety
 * `b` must be a live handle; `is_ns` and `max_violation` must be writable.
 */
enum BoxlabStatus boxlab_no_signaling(const struct BoxlabBox3 *b,
                                      double tol,
                                      bool *is_ns,
                                      double *max_violation);

/**
 * Certified membership test; `is_in` receives the verdict.
 *
 * # Safety
 * `b` must be a live handle; `is_in` must be writable.
 */
enum BoxlabStatus boxlab_membership(const struct BoxlabBox3 *b,
                                    enum BoxlabClass class_,
                                    double tol,
                                    bool *is_in);

/**
 * # Safety
 * `b` must be a live handle; `out` must be writable.
 */
enum BoxlabStatus boxlab_classify(const struct BoxlabBox3 *b,
                                  double tol,
                                  struct BoxlabReport **out);

/**
 * # Safety
 * `r` must be a live handle; `is_in` must be writable.
 */
enum BoxlabStatus boxlab_report_verdict(const struct BoxlabReport *r,
                                        enum BoxlabClass class_,
                                        bool *is_in);

/**
 * Writes the smallest class containing the box; `found` is false when the
 * box is in no class (it signals outside the BL decomposition).
 *
 * # Safety
 * `r` must be a live handle; `found` and `class` must be writable.
 */
enum BoxlabStatus boxlab_report_finest_class(const struct BoxlabReport *r,
                                             bool *found,
                                             enum BoxlabClass *class_);

/**
 * Full report as JSON, including certificates. Free with
 * `boxlab_string_free`.
 *
 * # Safety
 * `r` must be a live handle; `out` must be writable.
 */
enum BoxlabStatus boxlab_report_json(const struct BoxlabReport *r, char **out);

/**
 * Box file text for a three-party box. Free with `boxlab_string_free`.
 *
 * # Safety
 * `b` must be a live handle; `out` must be writable.
 */
enum BoxlabStatus boxlab_box3_to_text(const struct BoxlabBox3 *b, char **out);

/**
 * # Safety
 * `b` must be a live handle; `out` must be writable.
 */
enum BoxlabStatus boxlab_box2_to_text(const struct BoxlabBox2 *b, char **out);

/**
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum BoxlabStatus boxlab_box3_from_text(const char *text, struct BoxlabBox3 **out);

/**
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum BoxlabStatus boxlab_box2_from_text(const char *text, struct BoxlabBox2 **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BOXLAB_H */
