#pragma once

// Machine calibration profiles. Error rates are per-machine scalars; T1/T2
// are stored in microseconds and converted to dt on demand.

#include <limits>
#include <string>
#include <vector>

#include "json.hpp"

#include "hybridpulse/circuit.hpp"

namespace hybridpulse {

inline constexpr double kDefaultDtNs = 0.2222;

struct BackendProfile {
  std::string name;
  int n_qubits = 0;
  CouplingMap coupling;
  double dt_ns = kDefaultDtNs;
  double pauli_x_error = 0.0;
  double cnot_error = 0.0;
  double readout_error = 0.0;
  // Optional asymmetric readout; negative means "use readout_error".
  double readout_p01 = -1.0;  // Pr(read 0 | prepared 1)
  double readout_p10 = -1.0;  // Pr(read 1 | prepared 0)
  double t1_us = std::numeric_limits<double>::infinity();
  double t2_us = std::numeric_limits<double>::infinity();
  double readout_length_ns = 0.0;  // carried for completeness; unused by the noise model
  double omega_max = 0.0;          // peak Rabi rate in rad per dt at amp = 1

  double t1_dt() const { return t1_us * 1000.0 / dt_ns; }
  double t2_dt() const { return t2_us * 1000.0 / dt_ns; }
  double p01() const { return readout_p01 >= 0 ? readout_p01 : readout_error; }
  double p10() const { return readout_p10 >= 0 ? readout_p10 : readout_error; }
  /// Copy with gate depolarization removed; readout and decoherence kept.
  BackendProfile without_gate_errors() const;

  nlohmann::json to_json() const;
  static BackendProfile from_json(const nlohmann::json& j);

  friend bool operator==(const BackendProfile& a, const BackendProfile& b);
};

/// Every violated invariant, human-readable; empty when valid.
std::vector<std::string> validate_profile(const BackendProfile& p);

/// Parses and validates; throws InputError listing every violation.
BackendProfile load_profile(const std::string& path);
void save_profile(const BackendProfile& p, const std::string& path);

/// auckland, toronto, montreal, guadalupe and the noiseless "ideal" profile.
std::vector<BackendProfile> builtin_profiles();

/// Builtin lookup; a <name>.json under $HYBRIDPULSE_PROFILE_DIR takes precedence,
/// and a path ending in .json is loaded directly.
BackendProfile find_profile(const std::string& name_or_path);

/// Connected run of `n` physical qubits used as the fixed experiment layout.
struct SubDevice {
  std::vector<int> physical;  // logical i -> physical[i]
  CouplingMap coupling;       // induced coupling, relabeled 0..n-1
};
SubDevice line_subdevice(const BackendProfile& p, int n);

}  // namespace hybridpulse
