#include "hybridpulse/readout.hpp"

#include <cmath>

#include "hybridpulse/error.hpp"

namespace hybridpulse {

bool Confusion::is_stochastic(double tol) const {
  for (int j = 0; j < 2; ++j) {
    if (std::abs(m[0][j] + m[1][j] - 1.0) > tol) return false;
    for (int i = 0; i < 2; ++i)
      if (m[i][j] < -tol || m[i][j] > 1.0 + tol) return false;
  }
  return true;
}

nlohmann::json ConfusionSet::to_json() const {
  nlohmann::json q = nlohmann::json::array();
  for (const auto& c : qubits) q.push_back({{c.m[0][0], c.m[0][1]}, {c.m[1][0], c.m[1][1]}});
  return {{"qubits", q}};
}

ConfusionSet ConfusionSet::from_json(const nlohmann::json& j) {
  ConfusionSet set;
  try {
    for (const auto& q : j.at("qubits")) {
      Confusion c;
      for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) c.m[i][k] = q.at(i).at(k).get<double>();
      if (!c.is_stochastic(1e-9)) throw InputError("confusion matrix columns must sum to 1 with entries in [0, 1]");
      set.qubits.push_back(c);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("confusion JSON: ") + e.what());
  }
  return set;
}

std::vector<double> apply_confusion(const std::vector<double>& probs, const ConfusionSet& conf) {
  std::vector<double> p = probs;
  const std::size_t n = conf.size();
  if (p.size() != (std::size_t{1} << n)) throw InputError("confusion set size differs from distribution width");
  for (std::size_t q = 0; q < n; ++q) {
    const auto& m = conf.qubits[q].m;
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i & bit) continue;
      const double p0 = p[i], p1 = p[i | bit];
      p[i] = m[0][0] * p0 + m[0][1] * p1;
      p[i | bit] = m[1][0] * p0 + m[1][1] * p1;
    }
  }
  return p;
}

}  // namespace hybridpulse
