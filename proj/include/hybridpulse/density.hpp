#pragma once

// Noisy density-matrix engine. rho is stored column-major as a vector of
// 4^n amplitudes, rho[r + c * 2^n]; a unitary U acts on the row index as
// qubit q and conj(U) on the column index as "qubit" q + n, so every channel
// reduces to the single/two-qubit kernels in kernels.hpp.

#include <cstdint>
#include <span>
#include <vector>

#include "hybridpulse/backend.hpp"
#include "hybridpulse/circuit.hpp"
#include "hybridpulse/linalg.hpp"
#include "hybridpulse/problem.hpp"
#include "hybridpulse/pulse.hpp"
#include "hybridpulse/readout.hpp"

namespace hybridpulse {

inline constexpr int kMaxDensityQubits = 10;

struct NoiseConfig {
  bool enabled = false;
  double gate_depol_1q = 0.0;
  double gate_depol_2q = 0.0;
  ConfusionSet readout;  // one entry per qubit; empty means perfect readout
  double t1_dt = std::numeric_limits<double>::infinity();
  double t2_dt = std::numeric_limits<double>::infinity();

  static NoiseConfig ideal() { return {}; }
  static NoiseConfig from_profile(const BackendProfile& p, int n_qubits);

  /// Throws ParameterError on out-of-range probabilities, t2 > 2 t1, or non-stochastic readout.
  void validate() const;
};

template <std::size_t N>
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<SmallMatrix<N>> ops);  // asserts sum K^dagger K = I within 1e-12
  const std::vector<SmallMatrix<N>>& ops() const { return ops_; }
  double completeness_error() const;

 private:
  std::vector<SmallMatrix<N>> ops_;
};

using KrausChannel1 = KrausChannel<2>;
using KrausChannel2 = KrausChannel<4>;

KrausChannel1 depolarizing_1q(double p);
KrausChannel2 depolarizing_2q(double p);
KrausChannel1 amplitude_damping(double gamma);
/// Phase flip with probability p/2: coherences scale by 1 - p.
KrausChannel1 dephasing(double p);

class DensityState {
 public:
  explicit DensityState(int n_qubits);  // |0...0><0...0|

  int n_qubits() const { return n_; }
  std::size_t dim() const { return std::size_t{1} << n_; }
  cd operator()(std::size_t r, std::size_t c) const { return rho_[r + c * dim()]; }
  std::span<cd> data() { return rho_; }
  std::span<const cd> data() const { return rho_; }

  double trace() const;
  double purity() const;
  double hermiticity_error() const;
  double min_eigenvalue() const;

  void apply_unitary(int q, const Mat2& u);
  void apply_unitary(int qa, int qb, const Mat4& u);
  void apply_channel(int q, const KrausChannel1& ch);
  void apply_channel(int qa, int qb, const KrausChannel2& ch);

  /// rho <- (rho + rho^dagger) / 2.
  void symmetrize();

 private:
  void count_op();

  int n_;
  std::vector<cd> rho_;
  std::vector<cd> scratch_;
  std::vector<cd> accum_;
  int ops_since_symmetrize_ = 0;
};

DensityState init_plus_state(int n);

/// U rho U^dagger, then gate_error_weight rounds of depolarizing noise on the operands when enabled.
void apply_gate(DensityState& s, const Gate& g, const NoiseConfig& noise);
void apply_circuit(DensityState& s, const Circuit& c, const NoiseConfig& noise);

/// Coherent propagators per instruction in start order, then makespan-based
/// amplitude damping and dephasing on every qubit (idle qubits wait too).
void apply_pulse_schedule(DensityState& s, const Schedule& sched, const BackendProfile& backend,
                          const NoiseConfig& noise);

/// Apply the decoherence accumulated over `duration_dt` to every qubit.
void apply_idle_decoherence(DensityState& s, double duration_dt, const NoiseConfig& noise);

/// Diagonal of rho, clipped at zero and renormalized; indexed by basis state.
std::vector<double> exact_probabilities(const DensityState& s);

/// Multinomial shots, then per-bit readout flips through noise.readout (if enabled).
Counts sample_counts(const DensityState& s, std::uint64_t shots, const NoiseConfig& noise, std::uint64_t seed);
Counts sample_from_probabilities(const std::vector<double>& probs, int n_qubits, std::uint64_t shots,
                                 const NoiseConfig& noise, std::uint64_t seed);

}  // namespace hybridpulse
