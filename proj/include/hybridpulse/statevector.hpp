#pragma once

// Pure-state reference engine. It shares no code with the density-matrix
// kernels so the two can serve as mutual oracles on noiseless circuits.

#include <vector>

#include "hybridpulse/circuit.hpp"
#include "hybridpulse/linalg.hpp"

namespace hybridpulse {

class StateVector {
 public:
  explicit StateVector(int n_qubits);  // |0...0>

  int n_qubits() const { return n_; }
  const std::vector<cd>& amplitudes() const { return amps_; }

  void apply(int q, const Mat2& u);
  void apply(int qa, int qb, const Mat4& u);
  void apply(const Gate& g);
  void run(const Circuit& c);

  std::vector<double> probabilities() const;

 private:
  int n_;
  std::vector<cd> amps_;
};

}  // namespace hybridpulse
