#pragma once

// Parametric Gaussian pulses, schedules, and their propagators in the
// rotating frame of each qubit.
//
// Drive model (per qubit):  H(t) = pi*f*Z + (Omega(t)/2) (cos(phi) X + sin(phi) Y)
// Cross resonance (pair):   H(t) = (Omega(t)/2) (cos(phi) ZX + sin(phi) ZY) + pi*f*ZI
// with f the frequency shift in cycles per dt and Omega(t) = omega_max * envelope(t).
// Both are integrated step by step with a fourth-order Magnus exponent
// (two Gauss-Legendre envelope samples per step), closed form per step.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hybridpulse/backend.hpp"
#include "hybridpulse/linalg.hpp"

namespace hybridpulse {

inline constexpr int kDurationGranularity = 32;  // dt
inline constexpr double kMaxFreqShiftMhz = 100.0;

struct PulseParams {
  double amp = 0.0;
  double phase = 0.0;     // radians, [0, 2pi)
  double freq_mhz = 0.0;  // [-100, 100]
  int duration = 160;     // dt, positive multiple of 32
  double sigma = 40.0;    // dt

  /// sigma defaults to duration / 4.
  static PulseParams gaussian(double amp, double phase, double freq_mhz, int duration);

  nlohmann::json to_json() const;
  static PulseParams from_json(const nlohmann::json& j);

  friend bool operator==(const PulseParams&, const PulseParams&) = default;
};

struct Violation {
  std::string field;
  double value;
  std::string message;
};

std::vector<Violation> validate_pulse_params(const PulseParams& p);
/// Throws ParameterError joining every violation.
void require_valid(const PulseParams& p);

/// Lifted Gaussian: amp * (g(t) - g(-1)) / (1 - g(-1)), g centered at duration / 2.
double gaussian_envelope(double t, const PulseParams& p);

/// Two-point Gauss quadrature of the amp = 1 envelope per step (dt units).
double unit_envelope_area(int duration, double sigma, int n_steps = 0);

/// omega_max making a 160 dt, sigma 40 dt, amp 1 pulse a full 2*pi rotation.
double default_omega_max();

/// Frequency shift in cycles per dt.
double freq_cycles_per_dt(double freq_mhz, double dt_ns);

/// Single-qubit drive propagator; n_steps = 0 means one step per dt.
Mat2 pulse_propagator(const PulseParams& p, const BackendProfile& backend, int n_steps = 0);

/// Effective cross-resonance propagator on local index 2*bit(control) + bit(target).
Mat4 cr_propagator(const PulseParams& p, const BackendProfile& backend, int n_steps = 0);

/// Amplitude for which a (phase 0, no detuning) pulse realizes RX(theta), theta in [0, pi].
/// Throws InfeasibleDurationError when the rotation needs amp > 1.
double calibrate_amp_for_rx(double theta, int duration, const BackendProfile& backend,
                            std::optional<double> sigma = std::nullopt);

/// Largest rotation angle reachable at amp = 1.
double max_rotation(int duration, double sigma, const BackendProfile& backend);

struct Channel {
  enum class Kind { Drive, Control };
  Kind kind = Kind::Drive;
  int q0 = 0;   // drive qubit, or control qubit
  int q1 = -1;  // target qubit for Control

  static Channel drive(int q) { return {Kind::Drive, q, -1}; }
  static Channel control(int control, int target) { return {Kind::Control, control, target}; }

  friend bool operator==(const Channel&, const Channel&) = default;
  friend auto operator<=>(const Channel&, const Channel&) = default;
};

struct PulseInstruction {
  Channel channel;
  PulseParams params;
  int start_time = 0;

  int end_time() const { return start_time + params.duration; }
};

struct Schedule {
  int n_qubits = 0;
  std::vector<PulseInstruction> instructions;

  int makespan() const;
};

/// Checks channel operands, start times, and that no two instructions sharing a
/// channel or a qubit overlap in time. Throws ScheduleError.
void validate_schedule(const Schedule& s);

/// One simultaneous Drive(q) instruction per qubit, all starting at 0.
Schedule make_mixer_schedule(int n, const std::vector<PulseParams>& per_qubit);

}  // namespace hybridpulse
