#ifndef IRJOINT_H
#define IRJOINT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum IrjStatus {
  IRJ_STATUS_OK = 0,
  IRJ_STATUS_NULL_POINTER = 1,
  IRJ_STATUS_INVALID_INPUT = 2,
  IRJ_STATUS_DOMAIN = 3,
  IRJ_STATUS_MOMENT_OUT_OF_RANGE = 4,
  IRJ_STATUS_LIMIT_VIOLATION = 5,
  IRJ_STATUS_DEGENERATE_ROUTE = 6,
  IRJ_STATUS_TOO_FEW_SAMPLES = 7,
  IRJ_STATUS_INSUFFICIENT_SPAN = 8,
  IRJ_STATUS_EMPTY_REPORT = 9,
  IRJ_STATUS_SPACE_TOO_LARGE = 10,
  IRJ_STATUS_UNIT = 11,
  IRJ_STATUS_INVALID_UTF8 = 12,
  IRJ_STATUS_JSON = 13,
  IRJ_STATUS_PANIC = 14,
} IrjStatus;

/**
 * Serial chain of joints with tendon routes.
 */
typedef struct IrjChain IrjChain;

/**
 * Joint: section plus length, wrinkle strain and moment-rotation law.
 */
typedef struct IrjJoint IrjJoint;

/**
 * Cross-section of an inflated beam.
 */
typedef struct IrjSection IrjSection;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Free with
 * [`irj_string_free`].
 */
char *irj_last_error(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library and not yet freed.
 */
void irj_string_free(char *s);

/**
 * Moment scale factor of a band whose tensioned region spans `[theta0, theta2]`.
 *
 * # Safety
 * `out` must be a valid pointer to a `double`.
 */
enum IrjStatus irj_moment_scale_factor(double theta0, double theta2, double *out);

/**
 * Soft/stiff plateau ratio of a band of width `delta_theta`.
 *
 * # Safety
 * `out` must be a valid pointer to a `double`.
 */
enum IrjStatus irj_stiffness_ratio(double delta_theta, double *out);

/**
 * SI units throughout: m, Pa, rad.
 *
 * # Safety
 * `out` must be a valid pointer; on success it receives a handle to free
 * with [`irj_section_free`].
 */
enum IrjStatus irj_section_new(double radius,
                               double thickness,
                               double pressure,
                               double theta1,
                               double theta2,
                               struct IrjSection **out);

/**
 * Band of width `delta_theta` centred on the neutral axis.
 *
 * # Safety
 * As [`irj_section_new`].
 */
enum IrjStatus irj_section_symmetric(double radius,
                                     double thickness,
                                     double pressure,
                                     double delta_theta,
                                     struct IrjSection **out);

/**
 * # Safety
 * `section` must be NULL or a handle from this library not yet freed.
 */
void irj_section_free(struct IrjSection *section);

/**
 * # Safety
 * `section` must be a live handle and `out` a valid pointer.
 */
enum IrjStatus irj_section_max_moment(const struct IrjSection *section, double *out);

/**
 * # Safety
 * `section` must be a live handle and `out` a valid pointer.
 */
enum IrjStatus irj_section_onset_moment(const struct IrjSection *section, double *out);

/**
 * Wrinkle boundary and peak stress carrying `applied` N*m.
 *
 * # Safety
 * `section` must be a live handle; `theta0` and `sigma_m` valid pointers.
 */
enum IrjStatus irj_section_solve(const struct IrjSection *section,
                                 double applied,
                                 double *theta0,
                                 double *sigma_m);

/**
 * Joint with the default moment-rotation law. The section is copied.
 *
 * # Safety
 * `section` must be a live handle; `out` a valid pointer receiving a handle
 * to free with [`irj_joint_free`].
 */
enum IrjStatus irj_joint_new(const struct IrjSection *section,
                             double length,
                             double wrinkle_strain,
                             double mount_rotation,
                             struct IrjJoint **out);

/**
 * # Safety
 * `joint` must be NULL or a handle from this library not yet freed.
 */
void irj_joint_free(struct IrjJoint *joint);

/**
 * # Safety
 * `joint` must be a live handle and `out` a valid pointer.
 */
enum IrjStatus irj_joint_rotation_limit(const struct IrjJoint *joint, double *out);

/**
 * Plateau moment for deflection direction `psi` (rad from the soft plane).
 *
 * # Safety
 * `joint` must be a live handle and `out` a valid pointer.
 */
enum IrjStatus irj_joint_directional_max_moment(const struct IrjJoint *joint,
                                                double psi,
                                                double *out);

/**
 * # Safety
 * `joint` must be a live handle and `out` a valid pointer.
 */
enum IrjStatus irj_joint_moment_curve(const struct IrjJoint *joint,
                                      double psi,
                                      double angle,
                                      double *out);

/**
 * Tension at which the joint buckles for a tendon between two plate anchors
 * (m, plate coordinates). `reachable` is false when the tendon exerts no
 * bending moment; `tension` and `direction` are then left untouched.
 *
 * # Safety
 * `joint` must be a live handle; the out-pointers must be valid.
 */
enum IrjStatus irj_buckle_threshold(const struct IrjJoint *joint,
                                    double top_x,
                                    double top_y,
                                    double bottom_x,
                                    double bottom_y,
                                    bool *reachable,
                                    double *tension,
                                    double *direction);

/**
 * Parses a chain from its JSON form (same schema as a `chains` entry of a
 * spec document).
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` a valid pointer receiving a
 * handle to free with [`irj_chain_free`].
 */
enum IrjStatus irj_chain_from_json(const char *json, struct IrjChain **out);

/**
 * # Safety
 * `chain` must be NULL or a handle from this library not yet freed.
 */
void irj_chain_free(struct IrjChain *chain);

/**
 * # Safety
 * `chain` must be a live handle and `out` a valid pointer.
 */
enum IrjStatus irj_chain_len(const struct IrjChain *chain, size_t *out);

/**
 * Ramps tension to `max_tension` N and writes the sequence report as JSON.
 * `independent` evaluates thresholds in the undeformed chain only.
 *
 * # Safety
 * `chain` must be a live handle; `out_json` a valid pointer receiving a
 * string to free with [`irj_string_free`].
 */
enum IrjStatus irj_chain_simulate(const struct IrjChain *chain,
                                  double max_tension,
                                  bool independent,
                                  char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IRJOINT_H */
