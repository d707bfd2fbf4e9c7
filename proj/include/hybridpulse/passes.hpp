#pragma once

// Gate-level transpiler passes: RZZ lowering, SABRE-style routing under a
// fixed initial layout, and commutation-aware cancellation.

#include <cstddef>

#include "hybridpulse/circuit.hpp"

namespace hybridpulse {

/// RZZ(t; a, b) -> CX(a, b) RZ(t; b) CX(a, b). Other gates untouched.
Circuit decompose_rzz(const Circuit& c);

/// Lowers to the {RZ, SX, X, CX} basis (plus SWAP/MEASURE/BARRIER), equal up to global phase.
Circuit decompose_to_native(const Circuit& c);

struct SabreOptions {
  std::size_t lookahead_gates = 20;
  double lookahead_weight = 0.5;
  double decay_step = 0.001;
  int decay_reset_interval = 5;  // SWAP decisions between decay resets
};

struct RoutedCircuit {
  Circuit circuit;  // acts on physical qubits
  Layout final_layout;
  std::size_t swaps_inserted = 0;
};

/// Routes `c` onto `cm` starting from `initial` (no layout search). Requires
/// RZZ to be decomposed already whenever its operands may be uncoupled.
RoutedCircuit sabre_map(const Circuit& c, const CouplingMap& cm, const Layout& initial,
                        const SabreOptions& opts = {});

/// True when every two-qubit gate of `c` acts on a coupled pair.
bool satisfies_coupling(const Circuit& c, const CouplingMap& cm);

/// Sufficient (not necessary) commutation test used by the cancellation pass.
bool gates_commute(const Gate& a, const Gate& b);

/// Cancels self-inverse pairs and merges rotations through commuting gates, to fixpoint.
Circuit commutative_cancellation(const Circuit& c);

}  // namespace hybridpulse
