#pragma once

// Derivative-free minimization under box bounds.
//
// Bounded coordinates are searched through x = lo + (hi - lo) (1 + sin u) / 2,
// which covers the closed interval (so amp = 0 stays reachable); periodic
// coordinates are searched directly and wrapped into [lo, hi) when finite.

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace hybridpulse {

struct Bound {
  double lower = 0.0;
  double upper = 0.0;
  bool periodic = false;
  double step = 0.1;  // initial simplex edge in search coordinates
};

using CostFn = std::function<double(const std::vector<double>&)>;

struct HistoryEntry {
  std::vector<double> x;
  double cost = 0.0;
};

struct OptResult {
  std::vector<double> best_x;
  double best_cost = 0.0;
  std::vector<HistoryEntry> history;  // one entry per evaluation, in call order
  std::size_t n_evals = 0;
  std::string stop_reason;  // "budget" or "converged"
};

class Optimizer {
 public:
  virtual ~Optimizer() = default;
  virtual std::string name() const = 0;
  /// `max_evals` counts calls of f; the initial simplex is always completed.
  virtual OptResult minimize(const CostFn& f, const std::vector<double>& x0, const std::vector<Bound>& bounds,
                             std::size_t max_evals, std::uint64_t seed) const = 0;
};

/// Adaptive Nelder-Mead (dimension-dependent coefficients).
class NelderMead final : public Optimizer {
 public:
  double min_diameter = 1e-6;

  std::string name() const override { return "nelder-mead"; }
  OptResult minimize(const CostFn& f, const std::vector<double>& x0, const std::vector<Bound>& bounds,
                     std::size_t max_evals, std::uint64_t seed) const override;
};

OptResult minimize(const CostFn& f, const std::vector<double>& x0, const std::vector<Bound>& bounds,
                   std::size_t max_evals, std::uint64_t seed);

}  // namespace hybridpulse
