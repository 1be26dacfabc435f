#ifndef SPINWORK_H
#define SPINWORK_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum SbStatus {
  SB_STATUS_OK = 0,
  SB_STATUS_NULL_POINTER = 1,
  SB_STATUS_POLE = 2,
  SB_STATUS_DOMAIN = 3,
  SB_STATUS_INVALID_PARAMETER = 4,
  SB_STATUS_UNSUPPORTED_SPECTRUM = 5,
  SB_STATUS_NOT_UNITARY = 6,
  SB_STATUS_QUADRATURE_NOT_CONVERGED = 7,
  SB_STATUS_DEGENERATE_TEMPERATURES = 8,
  SB_STATUS_INFINITE_FOR_ZERO_DISORDER = 9,
  SB_STATUS_CUTOFF_TOO_SMALL = 10,
  SB_STATUS_DIMENSION_MISMATCH = 11,
  SB_STATUS_RESTRICTION_VIOLATED = 12,
  SB_STATUS_CONFIG = 13,
  // A Rust panic was caught at the boundary. Treat as a bug.
  SB_STATUS_PANIC = 99,
} SbStatus;

typedef enum SbAxis {
  SB_AXIS_X = 0,
  SB_AXIS_Y = 1,
} SbAxis;

// Bath correlation kernels for one spectral density and bath temperature.
typedef struct SbKernelSet SbKernelSet;

// An ideal instantaneous pulse.
typedef struct SbPulse SbPulse;

typedef struct SbKernelValues {
  double k;
  double xi;
  double xi_dot;
  double g;
  double f;
} SbKernelValues;

// Work of a pulse sequence. Only the first `n_pulses` entries of `per_pulse` are set.
typedef struct SbWork {
  double per_pulse[3];
  size_t n_pulses;
  double spin_part;
  double bath_int_part;
  double total;
  // 2W/G∞, NaN for a decoupled bath.
  double w;
} SbWork;

typedef struct SbEfficiency {
  double eta;
  double carnot;
  // +1 spin hotter, −1 bath hotter, 0 equal.
  int32_t regime;
  double slack1;
  double slack2;
  bool extraction;
} SbEfficiency;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failure on this thread, or NULL if none.
//
// The pointer stays valid until the next failing call on the same thread.
const char *sb_last_error_message(void);

// Kernels of the ohmic density J(ω) = γω e^{−ω/Γ} at bath temperature T ≥ 0.
//
// # Safety
// The out-pointer must be NULL or valid for a pointer write.
enum SbStatus sb_kernels_new_ohmic(double gamma,
                                   double cutoff,
                                   double temperature,
                                   struct SbKernelSet **out_handle);

// Kernels of a discrete bath of `n` modes with couplings `g[i]` and frequencies `omega[i]`.
//
// # Safety
// `g` and `omega` must each point to `n` readable doubles; the out-pointer as above.
enum SbStatus sb_kernels_new_discrete(const double *g,
                                      const double *omega,
                                      size_t n,
                                      double temperature,
                                      struct SbKernelSet **out_handle);

// # Safety
// `handle` must be NULL or come from an `sb_kernels_new_*` call and not be freed twice.
void sb_kernels_free(struct SbKernelSet *handle);

// K, ξ, ξ̇, G and F at time t ≥ 0.
//
// # Safety
// `kernels` must be a live handle; the out-pointer valid for a write.
enum SbStatus sb_kernels_eval(const struct SbKernelSet *kernels,
                              double t,
                              struct SbKernelValues *out_values);

// G∞, the long-time limit of the backreaction kernel.
//
// # Safety
// `kernels` must be a live handle; the out-pointer valid for a write.
enum SbStatus sb_kernels_g_inf(const struct SbKernelSet *kernels, double *out_value);

// Pulse from Euler angles.
//
// # Safety
// The out-pointer must be valid for a pointer write.
enum SbStatus sb_pulse_new_euler(double phi, double psi, double theta, struct SbPulse **out_handle);

// Rotation by `angle` about an in-plane axis.
//
// # Safety
// The out-pointer must be valid for a pointer write.
enum SbStatus sb_pulse_new_rotation(double angle, enum SbAxis axis, struct SbPulse **out_handle);

// The π pulse used as the echo refocusing pulse.
//
// # Safety
// The out-pointer must be valid for a pointer write.
enum SbStatus sb_pulse_new_pi(struct SbPulse **out_handle);

// `first` applied, then `second`.
//
// # Safety
// Both pulses must be live handles; the out-pointer valid for a pointer write.
enum SbStatus sb_pulse_compose(const struct SbPulse *first,
                               const struct SbPulse *second,
                               struct SbPulse **out_handle);

// c_zz: the z component of the image of σ_z.
//
// # Safety
// `pulse` must be a live handle; the out-pointer valid for a write.
enum SbStatus sb_pulse_zz(const struct SbPulse *pulse, double *out_value);

// # Safety
// `handle` must be NULL or come from an `sb_pulse_new_*` or `sb_pulse_compose` call.
void sb_pulse_free(struct SbPulse *handle);

// Work of a single pulse on a spin with gap ε and initial ⟨σ_z⟩ = sz0.
// `prep_time` = INFINITY selects the ergodic preparation.
//
// # Safety
// Handles must be live; the out-pointer valid for a write.
enum SbStatus sb_work_first_pulse(const struct SbKernelSet *kernels,
                                  double spin_gap,
                                  double sz0,
                                  const struct SbPulse *p1,
                                  double prep_time,
                                  double *out_work);

// Two pulses separated by τ.
//
// # Safety
// Handles must be live; the out-pointer valid for a write.
enum SbStatus sb_work_two_pulse(const struct SbKernelSet *kernels,
                                double spin_gap,
                                double sz0,
                                const struct SbPulse *p1,
                                const struct SbPulse *p2,
                                double tau,
                                double prep_time,
                                struct SbWork *out_work);

// Echo sequence P1, τ, π, τ, P2 for spins described by the ensemble inputs.
//
// # Safety
// Handles must be live; the out-pointer valid for a write.
enum SbStatus sb_work_echo(const struct SbKernelSet *kernels,
                           double energy,
                           double magnetization,
                           double omega0,
                           const struct SbPulse *p1,
                           const struct SbPulse *p2,
                           double tau,
                           double prep_time,
                           struct SbWork *out_work);

// Echo inputs (E, m) of a Gaussian ensemble of spin frequencies with mean Ω₀ and
// variance d, each spin thermal at T_S.
//
// # Safety
// Both out-pointers must be valid for writes.
enum SbStatus sb_disorder_echo_inputs(double omega0,
                                      double variance,
                                      double spin_temperature,
                                      double *out_energy,
                                      double *out_magnetization);

// Efficiency of a work result. With `enforce` set, the two-temperature restrictions
// and the Carnot bound are checked and a violation is an error.
//
// # Safety
// `work` must point to a readable `SbWork`; the out-pointer valid for a write.
enum SbStatus sb_efficiency(const struct SbWork *work,
                            double bath_temperature,
                            double spin_temperature,
                            bool enforce,
                            struct SbEfficiency *out_report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPINWORK_H */
