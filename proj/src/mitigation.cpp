#include "hybridpulse/mitigation.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hybridpulse/error.hpp"

namespace hybridpulse {

double QuasiDistribution::sum() const {
  double s = 0.0;
  for (const auto& [z, v] : values) s += v;
  return s;
}

nlohmann::json QuasiDistribution::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [z, v] : values) j[z] = v;
  return j;
}

ConfusionSet calibrate_readout(const NoiseConfig& noise, int n_qubits, std::uint64_t shots, std::uint64_t seed) {
  if (shots < 256) throw ParameterError("readout calibration needs at least 256 shots");
  if (n_qubits < 1) throw ParameterError("calibration width must be positive");
  if (n_qubits > 20) throw CapacityError("calibration supports up to 20 qubits");
  const std::size_t dim = std::size_t{1} << n_qubits;

  std::vector<double> zeros(dim, 0.0), ones(dim, 0.0);
  zeros[0] = 1.0;
  ones[dim - 1] = 1.0;
  const Counts c0 = sample_from_probabilities(zeros, n_qubits, shots, noise, seed);
  const Counts c1 = sample_from_probabilities(ones, n_qubits, shots, noise, seed ^ 0x9e3779b97f4a7c15ULL);

  ConfusionSet set;
  for (int q = 0; q < n_qubits; ++q) {
    std::uint64_t flips0 = 0, flips1 = 0;
    for (const auto& [z, n] : c0.histogram())
      if (z[q] == '1') flips0 += n;
    for (const auto& [z, n] : c1.histogram())
      if (z[q] == '0') flips1 += n;
    set.qubits.push_back(Confusion::from_flips(double(flips0) / double(shots), double(flips1) / double(shots)));
  }
  return set;
}

ConfusionSet calibrate_readout(const BackendProfile& backend, int n_qubits, std::uint64_t shots, std::uint64_t seed) {
  return calibrate_readout(NoiseConfig::from_profile(backend, n_qubits), n_qubits, shots, seed);
}

namespace {

// Reduced tensored confusion A[i][j] = prod_q M_q[s_i[q]][s_j[q]] over S, with
// columns rescaled to sum to one on S.
class ReducedConfusion {
 public:
  ReducedConfusion(const std::vector<Bitstring>& states, const ConfusionSet& conf)
      : states_(states), conf_(conf), colsum_(states.size(), 0.0) {
    for (std::size_t j = 0; j < states_.size(); ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < states_.size(); ++i) s += raw(i, j);
      if (s <= 0.0) throw MitigationFailedError("confusion column vanishes on the observed subspace");
      colsum_[j] = s;
    }
  }

  std::size_t size() const { return states_.size(); }
  double operator()(std::size_t i, std::size_t j) const { return raw(i, j) / colsum_[j]; }

  void matvec(const std::vector<double>& x, std::vector<double>& y) const {
    y.assign(size(), 0.0);
    for (std::size_t j = 0; j < size(); ++j) {
      if (x[j] == 0.0) continue;
      const double xj = x[j] / colsum_[j];
      for (std::size_t i = 0; i < size(); ++i) y[i] += raw(i, j) * xj;
    }
  }

 private:
  double raw(std::size_t i, std::size_t j) const {
    const Bitstring& a = states_[i];
    const Bitstring& b = states_[j];
    double v = 1.0;
    for (std::size_t q = 0; q < a.size(); ++q) v *= conf_.qubits[q].m[a[q] - '0'][b[q] - '0'];
    return v;
  }

  const std::vector<Bitstring>& states_;
  const ConfusionSet& conf_;
  std::vector<double> colsum_;
};

std::vector<double> solve_dense(const ReducedConfusion& a, const std::vector<double>& b, double max_cond) {
  const auto n = static_cast<Eigen::Index>(a.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = a(std::size_t(i), std::size_t(j));
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  const double rc = lu.rcond();
  if (!(rc > 0.0) || 1.0 / rc > max_cond)
    throw MitigationFailedError("reduced confusion matrix is ill-conditioned (cond ~ " + std::to_string(1.0 / rc) + ")");
  const Eigen::VectorXd x = lu.solve(Eigen::Map<const Eigen::VectorXd>(b.data(), n));
  return {x.data(), x.data() + n};
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Restarted GMRES with right Jacobi preconditioning.
std::vector<double> solve_gmres(const ReducedConfusion& a, const std::vector<double>& b, const M3Options& opts) {
  const std::size_t n = a.size();
  const int restart = 30;
  std::vector<double> dinv(n);
  for (std::size_t i = 0; i < n; ++i) dinv[i] = 1.0 / a(i, i);

  std::vector<double> x(n, 0.0), r(n), w(n), tmp(n);
  const double bnorm = norm2(b);
  if (bnorm == 0.0) return x;

  int iterations = 0;
  while (iterations < opts.max_iterations) {
    a.matvec(x, tmp);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - tmp[i];
    double beta = norm2(r);
    if (beta / bnorm < opts.iterative_tol) return x;

    std::vector<std::vector<double>> v(restart + 1, std::vector<double>(n, 0.0));
    std::vector<std::vector<double>> h(restart + 1, std::vector<double>(restart, 0.0));
    std::vector<double> cs(restart), sn(restart), g(restart + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[0][i] = r[i] / beta;
    g[0] = beta;

    int k = 0;
    for (; k < restart && iterations < opts.max_iterations; ++k, ++iterations) {
      for (std::size_t i = 0; i < n; ++i) tmp[i] = dinv[i] * v[k][i];
      a.matvec(tmp, w);
      for (int j = 0; j <= k; ++j) {
        double d = 0.0;
        for (std::size_t i = 0; i < n; ++i) d += w[i] * v[j][i];
        h[j][k] = d;
        for (std::size_t i = 0; i < n; ++i) w[i] -= d * v[j][i];
      }
      h[k + 1][k] = norm2(w);
      if (h[k + 1][k] > 0.0)
        for (std::size_t i = 0; i < n; ++i) v[k + 1][i] = w[i] / h[k + 1][k];
      for (int j = 0; j < k; ++j) {
        const double t = cs[j] * h[j][k] + sn[j] * h[j + 1][k];
        h[j + 1][k] = -sn[j] * h[j][k] + cs[j] * h[j + 1][k];
        h[j][k] = t;
      }
      const double den = std::hypot(h[k][k], h[k + 1][k]);
      cs[k] = h[k][k] / den;
      sn[k] = h[k + 1][k] / den;
      h[k][k] = den;
      h[k + 1][k] = 0.0;
      g[k + 1] = -sn[k] * g[k];
      g[k] = cs[k] * g[k];
      if (std::abs(g[k + 1]) / bnorm < opts.iterative_tol) {
        ++k;
        ++iterations;
        break;
      }
    }
    std::vector<double> y(k, 0.0);
    for (int j = k - 1; j >= 0; --j) {
      double s = g[j];
      for (int l = j + 1; l < k; ++l) s -= h[j][l] * y[l];
      y[j] = s / h[j][j];
    }
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < k; ++j) s += v[j][i] * y[j];
      x[i] += dinv[i] * s;
    }
  }
  a.matvec(x, tmp);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - tmp[i];
  if (norm2(r) / bnorm < std::sqrt(opts.iterative_tol)) return x;
  throw MitigationFailedError("iterative mitigation solver did not converge");
}

}  // namespace

QuasiDistribution m3_mitigate(const Counts& counts, const ConfusionSet& conf, const M3Options& opts) {
  if (counts.empty()) throw InputError("cannot mitigate an empty histogram");
  if (counts.width() != conf.size()) throw InputError("confusion set width differs from bitstring width");

  std::vector<Bitstring> states;
  std::vector<double> p;
  for (const auto& [z, n] : counts.histogram()) {
    states.push_back(z);
    p.push_back(double(n) / double(counts.total()));
  }
  const ReducedConfusion a(states, conf);
  std::vector<double> x = states.size() <= opts.dense_limit ? solve_dense(a, p, opts.max_condition)
                                                            : solve_gmres(a, p, opts);
  double s = 0.0;
  for (double v : x) {
    if (!std::isfinite(v)) throw MitigationFailedError("mitigated distribution is not finite");
    s += v;
  }
  if (std::abs(s) < 1e-12) throw MitigationFailedError("mitigated distribution has zero mass");

  QuasiDistribution q;
  for (std::size_t i = 0; i < states.size(); ++i) q.values[states[i]] = x[i] / s;
  return q;
}

double mitigated_expectation(const Graph& g, const QuasiDistribution& quasi) {
  double e = 0.0;
  for (const auto& [z, v] : quasi.values) e += v * cut_value(g, z);
  return e;
}

}  // namespace hybridpulse
