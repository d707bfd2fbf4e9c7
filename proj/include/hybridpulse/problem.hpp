#pragma once

// Max-Cut instances, sample-based cost functions, and exhaustive oracles.
//
// Bitstrings are std::string over {'0','1'}; character i is qubit/node i
// (leftmost = node 0). This convention is shared by the simulator, the
// mitigation layer and every file format.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace hybridpulse {

using Bitstring = std::string;

struct Edge {
  int u = 0;
  int v = 0;
  double w = 1.0;
};

class Graph {
 public:
  Graph() = default;
  /// Validates node range, self loops, duplicate edges and positive weights.
  Graph(int n_nodes, std::vector<Edge> edges);

  int n_nodes() const { return n_nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  double total_weight() const;
  int degree(int node) const;
  bool connected() const;

  nlohmann::json to_json() const;
  static Graph from_json(const nlohmann::json& j);

  friend bool operator==(const Graph&, const Graph&);

 private:
  int n_nodes_ = 0;
  std::vector<Edge> edges_;
};

inline constexpr int kMaxBruteForceNodes = 24;

/// Shot histogram. Keys share one length; values sum to total().
class Counts {
 public:
  Counts() = default;
  explicit Counts(std::map<Bitstring, std::uint64_t> hist);

  void add(const Bitstring& z, std::uint64_t n = 1);
  const std::map<Bitstring, std::uint64_t>& histogram() const { return hist_; }
  std::uint64_t total() const { return total_; }
  bool empty() const { return total_ == 0; }
  std::size_t width() const { return hist_.empty() ? 0 : hist_.begin()->first.size(); }

  nlohmann::json to_json() const;
  static Counts from_json(const nlohmann::json& j);

 private:
  std::map<Bitstring, std::uint64_t> hist_;
  std::uint64_t total_ = 0;
};

/// Connected d-regular graph from the pairing model; retried until simple and connected.
Graph gen_regular_graph(int n, int d, std::uint64_t seed);

/// Erdos-Renyi G(n, p) resampled until connected.
Graph gen_random_graph(int n, double p_edge, std::uint64_t seed);

double cut_value(const Graph& g, const Bitstring& z);

struct MaxCut {
  double value = 0.0;
  Bitstring argmax;
};

/// Exhaustive search; ties go to the lexicographically smallest bitstring.
MaxCut max_cut_bruteforce(const Graph& g);

double expected_cut(const Graph& g, const Counts& counts);

/// Mean cut value of the best ceil(alpha * shots) shots.
double cvar_cost(const Graph& g, const Counts& counts, double alpha);

/// Distribution analogues over basis-index probabilities (index bit q = node q).
double expected_cut(const Graph& g, const std::vector<double>& probs);
/// Mean cut over the top alpha probability mass.
double cvar_cost(const Graph& g, const std::vector<double>& probs, double alpha);

double approximation_ratio(double c_star, double c_max);

/// Basis index -> bitstring with bit q of the index at character q.
Bitstring index_to_bitstring(std::uint64_t index, int n);
std::uint64_t bitstring_to_index(const Bitstring& z);

}  // namespace hybridpulse
