#pragma once

#include <array>
#include <vector>

#include "json.hpp"

namespace hybridpulse {

/// Single-qubit readout confusion: m[i][j] = Pr(read i | prepared j).
struct Confusion {
  std::array<std::array<double, 2>, 2> m{{{1.0, 0.0}, {0.0, 1.0}}};

  static Confusion identity() { return {}; }
  /// p10 = Pr(read 1 | 0), p01 = Pr(read 0 | 1).
  static Confusion from_flips(double p10, double p01) { return {{{{1.0 - p10, p01}, {p10, 1.0 - p01}}}}; }

  bool is_stochastic(double tol = 1e-12) const;

  friend bool operator==(const Confusion&, const Confusion&) = default;
};

/// Tensored per-qubit confusion model.
struct ConfusionSet {
  std::vector<Confusion> qubits;

  std::size_t size() const { return qubits.size(); }

  nlohmann::json to_json() const;
  static ConfusionSet from_json(const nlohmann::json& j);
};

/// Push an exact probability vector (basis-index order) through the readout model.
std::vector<double> apply_confusion(const std::vector<double>& probs, const ConfusionSet& conf);

}  // namespace hybridpulse
