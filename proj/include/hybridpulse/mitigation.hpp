#pragma once

// Matrix-free measurement mitigation restricted to the observed bitstrings
// (the M3 scheme): the tensored confusion model is assembled only on the
// subspace S of distinct outcomes, column-normalized on S, and solved there.

#include <cstddef>
#include <cstdint>
#include <map>

#include "json.hpp"

#include "hybridpulse/backend.hpp"
#include "hybridpulse/density.hpp"
#include "hybridpulse/problem.hpp"
#include "hybridpulse/readout.hpp"

namespace hybridpulse {

struct QuasiDistribution {
  std::map<Bitstring, double> values;

  double sum() const;
  nlohmann::json to_json() const;
};

/// Estimate per-qubit confusion by preparing |0...0> and |1...1> and sampling through `noise`.
ConfusionSet calibrate_readout(const NoiseConfig& noise, int n_qubits, std::uint64_t shots, std::uint64_t seed);
ConfusionSet calibrate_readout(const BackendProfile& backend, int n_qubits, std::uint64_t shots, std::uint64_t seed);

struct M3Options {
  std::size_t dense_limit = 4096;  // |S| above this uses the iterative solver
  double max_condition = 1e8;
  double iterative_tol = 1e-12;
  int max_iterations = 500;
};

/// Throws MitigationFailedError when the reduced system is ill-conditioned or the solver stalls.
QuasiDistribution m3_mitigate(const Counts& counts, const ConfusionSet& conf, const M3Options& opts = {});

/// Linear expectation of the cut value; negative quasi-probabilities are allowed.
double mitigated_expectation(const Graph& g, const QuasiDistribution& quasi);

}  // namespace hybridpulse
