#include "hybridpulse/density.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "hybridpulse/error.hpp"
#include "hybridpulse/kernels.hpp"

namespace hybridpulse {

namespace {

constexpr int kSymmetrizeInterval = 100;

double draw_unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

NoiseConfig NoiseConfig::from_profile(const BackendProfile& p, int n_qubits) {
  NoiseConfig cfg;
  cfg.enabled = true;
  cfg.gate_depol_1q = p.pauli_x_error;
  cfg.gate_depol_2q = p.cnot_error;
  cfg.readout.qubits.assign(static_cast<std::size_t>(n_qubits), Confusion::from_flips(p.p10(), p.p01()));
  cfg.t1_dt = p.t1_dt();
  cfg.t2_dt = p.t2_dt();
  return cfg;
}

void NoiseConfig::validate() const {
  if (!is_probability(gate_depol_1q) || !is_probability(gate_depol_2q))
    throw ParameterError("depolarizing probabilities must lie in [0, 1]");
  if (!(t1_dt > 0.0) || !(t2_dt > 0.0)) throw ParameterError("T1 and T2 must be positive");
  if (!(t2_dt <= 2.0 * t1_dt)) throw ParameterError("T2 exceeds 2*T1");
  for (const auto& c : readout.qubits)
    if (!c.is_stochastic(1e-9)) throw ParameterError("readout confusion is not column-stochastic");
}

template <std::size_t N>
KrausChannel<N>::KrausChannel(std::vector<SmallMatrix<N>> ops) : ops_(std::move(ops)) {
  if (completeness_error() > 1e-12) throw NumericalError("Kraus operators are not trace preserving");
}

template <std::size_t N>
double KrausChannel<N>::completeness_error() const {
  SmallMatrix<N> sum;
  for (const auto& k : ops_) sum = sum + k.dagger() * k;
  return (sum - SmallMatrix<N>::identity()).max_abs();
}

template class KrausChannel<2>;
template class KrausChannel<4>;

KrausChannel1 depolarizing_1q(double p) {
  if (!is_probability(p)) throw ParameterError("depolarizing probability outside [0, 1]");
  // (1 - p) rho + p I/2 == (1 - 3p/4) rho + (p/4) sum_P P rho P
  const double w0 = std::sqrt(1.0 - 3.0 * p / 4.0), w = std::sqrt(p / 4.0);
  return KrausChannel1({cd(w0) * pauli::I(), cd(w) * pauli::X(), cd(w) * pauli::Y(), cd(w) * pauli::Z()});
}

KrausChannel2 depolarizing_2q(double p) {
  if (!is_probability(p)) throw ParameterError("depolarizing probability outside [0, 1]");
  const Mat2 basis[4] = {pauli::I(), pauli::X(), pauli::Y(), pauli::Z()};
  std::vector<Mat4> ops;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const double w = (a == 0 && b == 0) ? std::sqrt(1.0 - 15.0 * p / 16.0) : std::sqrt(p / 16.0);
      ops.push_back(cd(w) * kron(basis[a], basis[b]));
    }
  return KrausChannel2(std::move(ops));
}

KrausChannel1 amplitude_damping(double gamma) {
  if (!is_probability(gamma)) throw ParameterError("damping probability outside [0, 1]");
  Mat2 k0, k1;
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  k1(0, 1) = std::sqrt(gamma);
  return KrausChannel1({k0, k1});
}

KrausChannel1 dephasing(double p) {
  if (!is_probability(p)) throw ParameterError("dephasing probability outside [0, 1]");
  return KrausChannel1({cd(std::sqrt(1.0 - p / 2.0)) * pauli::I(), cd(std::sqrt(p / 2.0)) * pauli::Z()});
}

DensityState::DensityState(int n_qubits) : n_(n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxDensityQubits)
    throw CapacityError("density matrices support 1..10 qubits, got " + std::to_string(n_qubits));
  rho_.assign(dim() * dim(), cd(0.0));
  rho_[0] = 1.0;
}

double DensityState::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) t += rho_[i + i * dim()].real();
  return t;
}

double DensityState::purity() const {
  // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
  double s = 0.0;
  for (const auto& v : rho_) s += std::norm(v);
  return s;
}

double DensityState::hermiticity_error() const {
  double e = 0.0;
  for (std::size_t r = 0; r < dim(); ++r)
    for (std::size_t c = r; c < dim(); ++c) e = std::max(e, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
  return e;
}

double DensityState::min_eigenvalue() const {
  const auto d = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXcd m(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) m(r, c) = (*this)(r, c);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void DensityState::count_op() {
  if (++ops_since_symmetrize_ >= kSymmetrizeInterval) symmetrize();
}

void DensityState::symmetrize() {
  const std::size_t d = dim();
  for (std::size_t r = 0; r < d; ++r) {
    rho_[r + r * d] = rho_[r + r * d].real();
    for (std::size_t c = r + 1; c < d; ++c) {
      const cd avg = 0.5 * (rho_[r + c * d] + std::conj(rho_[c + r * d]));
      rho_[r + c * d] = avg;
      rho_[c + r * d] = std::conj(avg);
    }
  }
  ops_since_symmetrize_ = 0;
}

void DensityState::apply_unitary(int q, const Mat2& u) {
  kernels::apply_mat2(rho_, static_cast<unsigned>(q), u);
  kernels::apply_mat2(rho_, static_cast<unsigned>(q + n_), u.conjugate());
  count_op();
}

void DensityState::apply_unitary(int qa, int qb, const Mat4& u) {
  kernels::apply_mat4(rho_, static_cast<unsigned>(qa), static_cast<unsigned>(qb), u);
  kernels::apply_mat4(rho_, static_cast<unsigned>(qa + n_), static_cast<unsigned>(qb + n_), u.conjugate());
  count_op();
}

void DensityState::apply_channel(int q, const KrausChannel1& ch) {
  accum_.assign(rho_.size(), cd(0.0));
  for (const auto& k : ch.ops()) {
    scratch_ = rho_;
    kernels::apply_mat2(scratch_, static_cast<unsigned>(q), k);
    kernels::apply_mat2(scratch_, static_cast<unsigned>(q + n_), k.conjugate());
    kernels::axpy(accum_, 1.0, scratch_);
  }
  rho_.swap(accum_);
  count_op();
}

void DensityState::apply_channel(int qa, int qb, const KrausChannel2& ch) {
  accum_.assign(rho_.size(), cd(0.0));
  for (const auto& k : ch.ops()) {
    scratch_ = rho_;
    kernels::apply_mat4(scratch_, static_cast<unsigned>(qa), static_cast<unsigned>(qb), k);
    kernels::apply_mat4(scratch_, static_cast<unsigned>(qa + n_), static_cast<unsigned>(qb + n_), k.conjugate());
    kernels::axpy(accum_, 1.0, scratch_);
  }
  rho_.swap(accum_);
  count_op();
}

DensityState init_plus_state(int n) {
  DensityState s(n);
  auto data = s.data();
  const double v = 1.0 / static_cast<double>(s.dim());
  std::fill(data.begin(), data.end(), cd(v));
  return s;
}

void apply_gate(DensityState& s, const Gate& g, const NoiseConfig& noise) {
  if (g.kind == GateKind::MEASURE) throw InputError("MEASURE is handled by sampling, not apply_gate");
  if (g.kind == GateKind::BARRIER) return;
  for (int q : g.qubits)
    if (q < 0 || q >= s.n_qubits()) throw InputError("gate operand out of range");
  const int weight = noise.enabled ? gate_error_weight(g.kind) : 0;
  if (g.qubits.size() == 1) {
    s.apply_unitary(g.qubits[0], gate_matrix_1q(g));
    if (noise.gate_depol_1q > 0.0)
      for (int k = 0; k < weight; ++k) s.apply_channel(g.qubits[0], depolarizing_1q(noise.gate_depol_1q));
  } else {
    s.apply_unitary(g.qubits[0], g.qubits[1], gate_matrix_2q(g));
    if (noise.gate_depol_2q > 0.0)
      for (int k = 0; k < weight; ++k) s.apply_channel(g.qubits[0], g.qubits[1], depolarizing_2q(noise.gate_depol_2q));
  }
}

void apply_circuit(DensityState& s, const Circuit& c, const NoiseConfig& noise) {
  if (c.n_qubits() != s.n_qubits()) throw InputError("circuit and state sizes differ");
  for (const auto& g : c.ops()) apply_gate(s, g, noise);
}

void apply_idle_decoherence(DensityState& s, double duration_dt, const NoiseConfig& noise) {
  if (!noise.enabled || !(duration_dt > 0.0)) return;
  const double p_damp = std::isinf(noise.t1_dt) ? 0.0 : 1.0 - std::exp(-duration_dt / noise.t1_dt);
  // 1/t_phi = 1/t2 - 1/(2 t1)
  const double inv_tphi = 1.0 / noise.t2_dt - 0.5 / noise.t1_dt;
  const double p_phi = inv_tphi > 0.0 ? 1.0 - std::exp(-duration_dt * inv_tphi) : 0.0;
  for (int q = 0; q < s.n_qubits(); ++q) {
    if (p_damp > 0.0) s.apply_channel(q, amplitude_damping(p_damp));
    if (p_phi > 0.0) s.apply_channel(q, dephasing(p_phi));
  }
}

void apply_pulse_schedule(DensityState& s, const Schedule& sched, const BackendProfile& backend,
                          const NoiseConfig& noise) {
  if (sched.n_qubits != s.n_qubits()) throw ScheduleError("schedule and state sizes differ");
  validate_schedule(sched);

  // Instructions sharing a qubit never overlap, so time order fixes the product.
  std::vector<const PulseInstruction*> order;
  for (const auto& ins : sched.instructions) order.push_back(&ins);
  std::stable_sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
    return a->start_time < b->start_time || (a->start_time == b->start_time && a->channel < b->channel);
  });
  for (const auto* ins : order) {
    if (ins->channel.kind == Channel::Kind::Drive) {
      s.apply_unitary(ins->channel.q0, pulse_propagator(ins->params, backend));
    } else {
      s.apply_unitary(ins->channel.q0, ins->channel.q1, cr_propagator(ins->params, backend));
    }
  }
  apply_idle_decoherence(s, static_cast<double>(sched.makespan()), noise);
}

std::vector<double> exact_probabilities(const DensityState& s) {
  std::vector<double> p(s.dim());
  double total = 0.0;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    p[i] = std::max(0.0, s(i, i).real());
    total += p[i];
  }
  if (!(total > 0.0)) throw NumericalError("density matrix has no probability mass");
  for (auto& v : p) v /= total;
  return p;
}

Counts sample_from_probabilities(const std::vector<double>& probs, int n_qubits, std::uint64_t shots,
                                 const NoiseConfig& noise, std::uint64_t seed) {
  if (shots < 1) throw ParameterError("need at least one shot");
  if (probs.size() != (std::size_t{1} << n_qubits)) throw InputError("probability vector size mismatch");
  const bool flip = noise.enabled && !noise.readout.qubits.empty();
  if (flip && noise.readout.size() != static_cast<std::size_t>(n_qubits))
    throw InputError("readout model size differs from qubit count");

  std::vector<double> cumulative(probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) cumulative[i] = acc += probs[i];

  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> hist(probs.size(), 0);
  for (std::uint64_t shot = 0; shot < shots; ++shot) {
    const double u = draw_unit(rng) * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    std::size_t idx = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), probs.size() - 1);
    while (probs[idx] == 0.0 && idx > 0) --idx;  // u landed exactly on a boundary
    if (flip) {
      std::size_t read = 0;
      for (int q = 0; q < n_qubits; ++q) {
        const int prepared = static_cast<int>((idx >> q) & 1u);
        if (draw_unit(rng) < noise.readout.qubits[q].m[1][prepared]) read |= std::size_t{1} << q;
      }
      idx = read;
    }
    ++hist[idx];
  }
  Counts counts;
  for (std::size_t i = 0; i < hist.size(); ++i)
    if (hist[i]) counts.add(index_to_bitstring(i, n_qubits), hist[i]);
  return counts;
}

Counts sample_counts(const DensityState& s, std::uint64_t shots, const NoiseConfig& noise, std::uint64_t seed) {
  return sample_from_probabilities(exact_probabilities(s), s.n_qubits(), shots, noise, seed);
}

}  // namespace hybridpulse
