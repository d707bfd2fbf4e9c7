#include "hybridpulse/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "hybridpulse/error.hpp"

namespace hybridpulse {

namespace {

struct Transform {
  const std::vector<Bound>& bounds;

  bool squashed(std::size_t i) const {
    const auto& b = bounds[i];
    return !b.periodic && std::isfinite(b.lower) && std::isfinite(b.upper);
  }

  double to_x(std::size_t i, double u) const {
    const auto& b = bounds[i];
    if (squashed(i)) return std::clamp(b.lower + (b.upper - b.lower) * 0.5 * (1.0 + std::sin(u)), b.lower, b.upper);
    if (b.periodic && std::isfinite(b.lower) && std::isfinite(b.upper)) {
      const double w = b.upper - b.lower;
      double r = std::fmod(u - b.lower, w);
      if (r < 0.0) r += w;
      if (r >= w) r = 0.0;
      return b.lower + r;
    }
    if (!b.periodic) return std::clamp(u, b.lower, b.upper);
    return u;
  }

  double to_u(std::size_t i, double x) const {
    const auto& b = bounds[i];
    if (!squashed(i)) return x;
    if (b.upper == b.lower) return 0.0;
    return std::asin(std::clamp(2.0 * (x - b.lower) / (b.upper - b.lower) - 1.0, -1.0, 1.0));
  }

  std::vector<double> point(const std::vector<double>& u) const {
    std::vector<double> x(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) x[i] = to_x(i, u[i]);
    return x;
  }
};

}  // namespace

OptResult NelderMead::minimize(const CostFn& f, const std::vector<double>& x0, const std::vector<Bound>& bounds,
                               std::size_t max_evals, std::uint64_t seed) const {
  const std::size_t n = x0.size();
  if (bounds.size() != n) throw ParameterError("bounds and x0 differ in length");
  for (std::size_t i = 0; i < n; ++i) {
    const auto& b = bounds[i];
    if (!std::isfinite(x0[i])) throw ParameterError("x0 is not finite");
    if (!(b.lower <= b.upper)) throw ParameterError("lower bound exceeds upper bound");
    if (!b.periodic && (x0[i] < b.lower || x0[i] > b.upper)) throw ParameterError("x0 lies outside the bounds");
  }

  const Transform tf{bounds};
  OptResult res;
  auto eval = [&](const std::vector<double>& u) {
    const std::vector<double> x = tf.point(u);
    const double c = f(x);
    res.history.push_back({x, c});
    ++res.n_evals;
    if (res.n_evals == 1 || c < res.best_cost) {
      res.best_cost = c;
      res.best_x = x;
    }
    return c;
  };

  std::vector<double> u0(n);
  for (std::size_t i = 0; i < n; ++i) u0[i] = tf.to_u(i, x0[i]);

  if (n == 0) {
    eval(u0);
    res.stop_reason = "converged";
    return res;
  }

  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> simplex(n + 1, u0);
  std::vector<double> cost(n + 1);
  cost[0] = eval(u0);
  for (std::size_t i = 0; i < n; ++i) {
    const double sign = (rng() >> 63) ? -1.0 : 1.0;
    double step = bounds[i].step;
    if (bounds[i].upper == bounds[i].lower) step = 0.0;
    simplex[i + 1][i] += sign * step;
    cost[i + 1] = eval(simplex[i + 1]);
  }

  const double dn = static_cast<double>(n);
  const double alpha = 1.0;
  const double gamma = n >= 2 ? 1.0 + 2.0 / dn : 2.0;
  const double rho = n >= 2 ? 0.75 - 0.5 / dn : 0.5;
  const double sigma = n >= 2 ? 1.0 - 1.0 / dn : 0.5;

  std::vector<std::size_t> order(n + 1);
  auto budget_left = [&] { return res.n_evals < max_evals; };
  auto combine = [&](const std::vector<double>& c, const std::vector<double>& w, double t) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = c[i] + t * (w[i] - c[i]);
    return out;
  };

  res.stop_reason = "budget";
  while (true) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return cost[a] < cost[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];

    double diameter = 0.0;
    for (std::size_t v = 0; v <= n; ++v)
      for (std::size_t i = 0; i < n; ++i) diameter = std::max(diameter, std::abs(simplex[v][i] - simplex[best][i]));
    if (diameter < min_diameter) {
      res.stop_reason = "converged";
      break;
    }
    if (!budget_left()) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t v = 0; v <= n; ++v)
      if (v != worst)
        for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[v][i] / dn;

    const auto xr = combine(centroid, simplex[worst], -alpha);
    const double fr = eval(xr);
    if (fr < cost[best]) {
      if (!budget_left()) {
        simplex[worst] = xr;
        cost[worst] = fr;
        break;
      }
      const auto xe = combine(centroid, simplex[worst], -alpha * gamma);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[worst] = xe;
        cost[worst] = fe;
      } else {
        simplex[worst] = xr;
        cost[worst] = fr;
      }
      continue;
    }
    if (fr < cost[second]) {
      simplex[worst] = xr;
      cost[worst] = fr;
      continue;
    }
    if (!budget_left()) break;
    const bool outside = fr < cost[worst];
    const auto xc = outside ? combine(centroid, simplex[worst], -alpha * rho) : combine(centroid, simplex[worst], rho);
    const double fc = eval(xc);
    if (fc < (outside ? fr : cost[worst])) {
      simplex[worst] = xc;
      cost[worst] = fc;
      continue;
    }
    for (std::size_t v = 0; v <= n && budget_left(); ++v) {
      if (v == best) continue;
      simplex[v] = combine(simplex[best], simplex[v], sigma);
      cost[v] = eval(simplex[v]);
    }
  }
  return res;
}

OptResult minimize(const CostFn& f, const std::vector<double>& x0, const std::vector<Bound>& bounds,
                   std::size_t max_evals, std::uint64_t seed) {
  return NelderMead{}.minimize(f, x0, bounds, max_evals, seed);
}

}  // namespace hybridpulse
