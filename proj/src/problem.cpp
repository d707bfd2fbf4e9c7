#include "hybridpulse/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include "hybridpulse/error.hpp"

namespace hybridpulse {

namespace {

// Portable bounded draw; std::uniform_int_distribution is implementation-defined
// and would make seed-pinned graphs differ between standard libraries.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % bound;
}

double draw_unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

Graph::Graph(int n_nodes, std::vector<Edge> edges) : n_nodes_(n_nodes), edges_(std::move(edges)) {
  if (n_nodes_ <= 0) throw InputError("graph needs at least one node");
  std::set<std::pair<int, int>> seen;
  for (const auto& e : edges_) {
    if (e.u < 0 || e.v < 0 || e.u >= n_nodes_ || e.v >= n_nodes_)
      throw InputError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") out of node range");
    if (e.u == e.v) throw InputError("self loop on node " + std::to_string(e.u));
    if (!(e.w > 0.0) || !std::isfinite(e.w)) throw InputError("edge weights must be positive and finite");
    if (!seen.emplace(std::min(e.u, e.v), std::max(e.u, e.v)).second)
      throw InputError("duplicate edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
  }
}

double Graph::total_weight() const {
  double s = 0.0;
  for (const auto& e : edges_) s += e.w;
  return s;
}

int Graph::degree(int node) const {
  return static_cast<int>(std::count_if(edges_.begin(), edges_.end(),
                                        [node](const Edge& e) { return e.u == node || e.v == node; }));
}

bool Graph::connected() const {
  std::vector<int> parent(n_nodes_);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int components = n_nodes_;
  for (const auto& e : edges_) {
    const int a = find(e.u), b = find(e.v);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

nlohmann::json Graph::to_json() const {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : edges_) edges.push_back({e.u, e.v, e.w});
  return {{"n", n_nodes_}, {"edges", edges}};
}

Graph Graph::from_json(const nlohmann::json& j) {
  try {
    const int n = j.at("n").get<int>();
    std::vector<Edge> edges;
    for (const auto& item : j.at("edges")) {
      if (!item.is_array() || item.size() < 2 || item.size() > 3)
        throw InputError("graph edge must be [u, v] or [u, v, w]");
      Edge e{item[0].get<int>(), item[1].get<int>(), item.size() == 3 ? item[2].get<double>() : 1.0};
      edges.push_back(e);
    }
    return Graph(n, std::move(edges));
  } catch (const nlohmann::json::exception& ex) {
    throw InputError(std::string("graph JSON: ") + ex.what());
  }
}

bool operator==(const Graph& a, const Graph& b) {
  if (a.n_nodes_ != b.n_nodes_ || a.edges_.size() != b.edges_.size()) return false;
  for (std::size_t i = 0; i < a.edges_.size(); ++i) {
    const auto &x = a.edges_[i], &y = b.edges_[i];
    if (x.u != y.u || x.v != y.v || x.w != y.w) return false;
  }
  return true;
}

Counts::Counts(std::map<Bitstring, std::uint64_t> hist) {
  for (const auto& [z, n] : hist) add(z, n);
}

void Counts::add(const Bitstring& z, std::uint64_t n) {
  if (!hist_.empty() && z.size() != hist_.begin()->first.size())
    throw InputError("bitstring '" + z + "' has inconsistent length");
  if (z.find_first_not_of("01") != Bitstring::npos) throw InputError("bitstring '" + z + "' is not binary");
  if (n == 0) return;
  hist_[z] += n;
  total_ += n;
}

nlohmann::json Counts::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [z, n] : hist_) j[z] = n;
  return j;
}

Counts Counts::from_json(const nlohmann::json& j) {
  Counts c;
  for (const auto& [z, n] : j.items()) c.add(z, n.get<std::uint64_t>());
  return c;
}

Graph gen_regular_graph(int n, int d, std::uint64_t seed) {
  if (n <= 0 || d <= 0) throw ParameterError("regular graph needs n > 0 and d > 0");
  if (d >= n) throw ParameterError("regular graph needs d < n");
  if ((n * d) % 2 != 0) throw ParameterError("regular graph infeasible: n*d is odd");

  std::mt19937_64 rng(seed);
  std::vector<int> stubs;
  for (int v = 0; v < n; ++v)
    for (int k = 0; k < d; ++k) stubs.push_back(v);

  constexpr int kMaxAttempts = 100000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    for (std::size_t i = stubs.size() - 1; i > 0; --i) std::swap(stubs[i], stubs[draw_below(rng, i + 1)]);
    std::set<std::pair<int, int>> pairs;
    bool simple = true;
    for (std::size_t i = 0; i < stubs.size() && simple; i += 2) {
      const int a = std::min(stubs[i], stubs[i + 1]);
      const int b = std::max(stubs[i], stubs[i + 1]);
      simple = a != b && pairs.emplace(a, b).second;
    }
    if (!simple) continue;
    std::vector<Edge> edges;
    for (const auto& [a, b] : pairs) edges.push_back({a, b, 1.0});
    Graph g(n, std::move(edges));
    if (g.connected()) return g;
  }
  throw NumericalError("pairing model did not find a simple connected regular graph");
}

Graph gen_random_graph(int n, double p_edge, std::uint64_t seed) {
  if (n <= 0) throw ParameterError("random graph needs n > 0");
  if (!(p_edge > 0.0) || p_edge > 1.0) throw ParameterError("p_edge must lie in (0, 1]");
  std::mt19937_64 rng(seed);
  constexpr int kMaxAttempts = 100000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (draw_unit(rng) < p_edge) edges.push_back({u, v, 1.0});
    Graph g(n, std::move(edges));
    if (g.connected()) return g;
  }
  throw NumericalError("no connected G(n,p) sample found; p_edge too small");
}

double cut_value(const Graph& g, const Bitstring& z) {
  if (z.size() != static_cast<std::size_t>(g.n_nodes()))
    throw InputError("bitstring length " + std::to_string(z.size()) + " != node count " + std::to_string(g.n_nodes()));
  double cut = 0.0;
  for (const auto& e : g.edges())
    if (z[e.u] != z[e.v]) cut += e.w;
  return cut;
}

MaxCut max_cut_bruteforce(const Graph& g) {
  const int n = g.n_nodes();
  if (n > kMaxBruteForceNodes) throw CapacityError("brute-force max-cut limited to 24 nodes");

  // Lexicographic order on bitstrings equals numeric order on bit-reversed masks.
  auto reversed = [n](std::uint64_t m) {
    std::uint64_t r = 0;
    for (int i = 0; i < n; ++i) r |= ((m >> i) & 1u) << (n - 1 - i);
    return r;
  };

  double best = -1.0;
  std::uint64_t best_mask = 0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t m = 0; m < total; ++m) {
    double cut = 0.0;
    for (const auto& e : g.edges())
      if (((m >> e.u) ^ (m >> e.v)) & 1u) cut += e.w;
    if (cut > best || (cut == best && reversed(m) < reversed(best_mask))) {
      best = cut;
      best_mask = m;
    }
  }
  return {best, index_to_bitstring(best_mask, n)};
}

double expected_cut(const Graph& g, const Counts& counts) {
  if (counts.empty()) throw InputError("expected_cut needs nonempty counts");
  double acc = 0.0;
  for (const auto& [z, n] : counts.histogram()) acc += static_cast<double>(n) * cut_value(g, z);
  return acc / static_cast<double>(counts.total());
}

double cvar_cost(const Graph& g, const Counts& counts, double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0) throw ParameterError("CVaR alpha must lie in (0, 1]");
  if (counts.empty()) throw InputError("cvar_cost needs nonempty counts");

  std::vector<std::pair<double, std::uint64_t>> outcomes;
  outcomes.reserve(counts.histogram().size());
  for (const auto& [z, n] : counts.histogram()) outcomes.emplace_back(cut_value(g, z), n);
  std::stable_sort(outcomes.begin(), outcomes.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });

  // The small slack keeps products such as 0.3 * 10 from rounding up a whole shot.
  const double want = std::ceil(alpha * static_cast<double>(counts.total()) - 1e-9);
  const auto tail = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(want));

  std::uint64_t taken = 0;
  double acc = 0.0;
  for (const auto& [value, n] : outcomes) {
    const std::uint64_t take = std::min(n, tail - taken);
    acc += value * static_cast<double>(take);
    taken += take;
    if (taken == tail) break;
  }
  return acc / static_cast<double>(tail);
}

namespace {

std::vector<double> cut_table(const Graph& g, std::size_t size) {
  if (g.n_nodes() > kMaxBruteForceNodes || size != (std::size_t{1} << g.n_nodes()))
    throw InputError("distribution size must be 2^n_nodes");
  std::vector<double> cuts(size, 0.0);
  for (std::size_t i = 0; i < size; ++i)
    for (const auto& e : g.edges())
      if (((i >> e.u) ^ (i >> e.v)) & 1U) cuts[i] += e.w;
  return cuts;
}

}  // namespace

double expected_cut(const Graph& g, const std::vector<double>& probs) {
  const auto cuts = cut_table(g, probs.size());
  double e = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) e += probs[i] * cuts[i];
  return e;
}

double cvar_cost(const Graph& g, const std::vector<double>& probs, double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0) throw ParameterError("CVaR alpha must lie in (0, 1]");
  const auto cuts = cut_table(g, probs.size());
  std::vector<std::size_t> order(probs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return cuts[a] > cuts[b]; });
  double mass = 0.0, acc = 0.0;
  for (auto i : order) {
    if (mass >= alpha) break;
    const double take = std::min(probs[i], alpha - mass);
    if (take <= 0.0) continue;
    acc += take * cuts[i];
    mass += take;
  }
  return mass > 0.0 ? acc / mass : 0.0;
}

double approximation_ratio(double c_star, double c_max) {
  if (!(c_max > 0.0)) throw InputError("approximation ratio needs c_max > 0");
  return c_star / c_max;
}

Bitstring index_to_bitstring(std::uint64_t index, int n) {
  Bitstring z(static_cast<std::size_t>(n), '0');
  for (int q = 0; q < n; ++q)
    if ((index >> q) & 1u) z[q] = '1';
  return z;
}

std::uint64_t bitstring_to_index(const Bitstring& z) {
  std::uint64_t idx = 0;
  for (std::size_t q = 0; q < z.size(); ++q)
    if (z[q] == '1') idx |= std::uint64_t{1} << q;
  return idx;
}

}  // namespace hybridpulse
