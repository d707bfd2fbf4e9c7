#include "hybridpulse/unitary.hpp"

#include <algorithm>
#include <complex>
#include <limits>
#include <vector>

#include "hybridpulse/error.hpp"

namespace hybridpulse {

namespace {

// Left-multiply row pairs/quads directly; deliberately independent of the SIMD kernels.
void left_multiply(Eigen::MatrixXcd& u, int q, const Mat2& m) {
  const Eigen::Index dim = u.rows();
  const Eigen::Index bit = Eigen::Index{1} << q;
  for (Eigen::Index r = 0; r < dim; ++r) {
    if (r & bit) continue;
    const Eigen::RowVectorXcd r0 = u.row(r), r1 = u.row(r | bit);
    u.row(r) = m(0, 0) * r0 + m(0, 1) * r1;
    u.row(r | bit) = m(1, 0) * r0 + m(1, 1) * r1;
  }
}

void left_multiply(Eigen::MatrixXcd& u, int qa, int qb, const Mat4& m) {
  const Eigen::Index dim = u.rows();
  const Eigen::Index ba = Eigen::Index{1} << qa;
  const Eigen::Index bb = Eigen::Index{1} << qb;
  Eigen::MatrixXcd rows(4, u.cols());
  for (Eigen::Index r = 0; r < dim; ++r) {
    if ((r & ba) || (r & bb)) continue;
    const Eigen::Index idx[4] = {r, r | bb, r | ba, r | ba | bb};
    for (int k = 0; k < 4; ++k) rows.row(k) = u.row(idx[k]);
    for (int k = 0; k < 4; ++k) {
      Eigen::RowVectorXcd acc = Eigen::RowVectorXcd::Zero(u.cols());
      for (int j = 0; j < 4; ++j) acc += m(k, j) * rows.row(j);
      u.row(idx[k]) = acc;
    }
  }
}

Eigen::MatrixXcd identity_for(int n) {
  if (n > kMaxUnitaryQubits) throw CapacityError("dense unitaries limited to 10 qubits");
  const Eigen::Index dim = Eigen::Index{1} << n;
  return Eigen::MatrixXcd::Identity(dim, dim);
}

}  // namespace

Eigen::MatrixXcd circuit_unitary(const Circuit& c) {
  Eigen::MatrixXcd u = identity_for(c.n_qubits());
  for (const auto& g : c.ops()) {
    if (g.kind == GateKind::BARRIER) continue;
    if (g.kind == GateKind::MEASURE) throw InputError("circuit_unitary: MEASURE has no unitary");
    if (g.qubits.size() == 1)
      left_multiply(u, g.qubits[0], gate_matrix_1q(g));
    else
      left_multiply(u, g.qubits[0], g.qubits[1], gate_matrix_2q(g));
  }
  return u;
}

Eigen::MatrixXcd schedule_unitary(const Schedule& s, const BackendProfile& backend) {
  validate_schedule(s);
  Eigen::MatrixXcd u = identity_for(s.n_qubits);
  std::vector<const PulseInstruction*> order;
  for (const auto& ins : s.instructions) order.push_back(&ins);
  std::stable_sort(order.begin(), order.end(),
                   [](const auto* a, const auto* b) { return a->start_time < b->start_time; });
  for (const auto* ins : order) {
    if (ins->channel.kind == Channel::Kind::Drive)
      left_multiply(u, ins->channel.q0, pulse_propagator(ins->params, backend));
    else
      left_multiply(u, ins->channel.q0, ins->channel.q1, cr_propagator(ins->params, backend));
  }
  return u;
}

double distance_up_to_phase(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return std::numeric_limits<double>::infinity();
  const std::complex<double> overlap = (b.adjoint() * a).trace();
  const std::complex<double> phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : 1.0;
  return (a - phase * b).cwiseAbs().maxCoeff();
}

Eigen::MatrixXcd layout_permutation(const Layout& layout) {
  const int n = layout.n_physical();
  if (layout.n_logical() != n) throw InputError("layout_permutation needs a full layout");
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    Eigen::Index t = 0;
    for (int l = 0; l < n; ++l)
      if (s & (Eigen::Index{1} << l)) t |= Eigen::Index{1} << layout.physical(l);
    p(t, s) = 1.0;
  }
  return p;
}

}  // namespace hybridpulse
