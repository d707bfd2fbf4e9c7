#pragma once

#include <Eigen/Dense>

#include "hybridpulse/backend.hpp"
#include "hybridpulse/circuit.hpp"
#include "hybridpulse/pulse.hpp"

namespace hybridpulse {

inline constexpr int kMaxUnitaryQubits = 10;

/// Dense 2^n x 2^n unitary of `c` with qubit 0 as the least significant index bit.
/// BARRIER is ignored; MEASURE is rejected.
Eigen::MatrixXcd circuit_unitary(const Circuit& c);

/// Product of the coherent instruction propagators in start order (no decoherence).
Eigen::MatrixXcd schedule_unitary(const Schedule& s, const BackendProfile& backend);

/// max |a - e^{i phi} b| for the phase phi that best aligns b with a.
double distance_up_to_phase(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

/// Permutation taking logical basis states to physical ones (n_logical == n_physical).
Eigen::MatrixXcd layout_permutation(const Layout& layout);

}  // namespace hybridpulse
