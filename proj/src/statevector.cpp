#include "hybridpulse/statevector.hpp"

#include "hybridpulse/error.hpp"

namespace hybridpulse {

StateVector::StateVector(int n_qubits) : n_(n_qubits) {
  if (n_qubits < 1 || n_qubits > 20) throw CapacityError("statevector supports 1..20 qubits");
  amps_.assign(std::size_t{1} << n_qubits, cd(0.0));
  amps_[0] = 1.0;
}

// Gather formulation: each output amplitude reads its row of the local matrix.
void StateVector::apply(int q, const Mat2& u) {
  std::vector<cd> out(amps_.size());
  const std::size_t bit = std::size_t{1} << q;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    const std::size_t r = (i & bit) ? 1 : 0;
    out[i] = u(r, 0) * amps_[i & ~bit] + u(r, 1) * amps_[i | bit];
  }
  amps_.swap(out);
}

void StateVector::apply(int qa, int qb, const Mat4& u) {
  std::vector<cd> out(amps_.size());
  const std::size_t ba = std::size_t{1} << qa, bb = std::size_t{1} << qb;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    const std::size_t r = ((i & ba) ? 2 : 0) + ((i & bb) ? 1 : 0);
    const std::size_t base = i & ~ba & ~bb;
    cd acc = 0.0;
    for (std::size_t c = 0; c < 4; ++c) acc += u(r, c) * amps_[base | ((c & 2) ? ba : 0) | ((c & 1) ? bb : 0)];
    out[i] = acc;
  }
  amps_.swap(out);
}

void StateVector::apply(const Gate& g) {
  if (g.kind == GateKind::BARRIER) return;
  if (g.kind == GateKind::MEASURE) throw InputError("statevector engine does not measure");
  if (g.qubits.size() == 1)
    apply(g.qubits[0], gate_matrix_1q(g));
  else
    apply(g.qubits[0], g.qubits[1], gate_matrix_2q(g));
}

void StateVector::run(const Circuit& c) {
  if (c.n_qubits() != n_) throw InputError("circuit and state sizes differ");
  for (const auto& g : c.ops()) apply(g);
}

std::vector<double> StateVector::probabilities() const {
  std::vector<double> p(amps_.size());
  for (std::size_t i = 0; i < amps_.size(); ++i) p[i] = std::norm(amps_[i]);
  return p;
}

}  // namespace hybridpulse
