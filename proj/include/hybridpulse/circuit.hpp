#pragma once

// Gate-level IR shared by the transpiler passes and the simulator.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hybridpulse/linalg.hpp"
#include "hybridpulse/problem.hpp"

namespace hybridpulse {

enum class GateKind { H, X, SX, RZ, RX, RY, CX, SWAP, RZZ, MEASURE, BARRIER };

std::string_view gate_name(GateKind k);
std::optional<GateKind> parse_gate_kind(std::string_view name);

/// Number of operands, or 0 for variadic kinds (BARRIER).
int gate_arity(GateKind k);
bool gate_has_angle(GateKind k);
/// True when the gate matrix is diagonal in the computational basis.
bool gate_is_diagonal(GateKind k);

inline constexpr int kCxDurationDt = 640;

/// Wall-clock length of a gate on the device, in dt.
int gate_duration_dt(GateKind k);
/// Number of error-carrying native operations the gate lowers to.
int gate_error_weight(GateKind k);

struct Gate {
  GateKind kind = GateKind::H;
  std::vector<int> qubits;
  double angle = 0.0;

  static Gate h(int q) { return {GateKind::H, {q}, 0.0}; }
  static Gate x(int q) { return {GateKind::X, {q}, 0.0}; }
  static Gate sx(int q) { return {GateKind::SX, {q}, 0.0}; }
  static Gate rz(int q, double t) { return {GateKind::RZ, {q}, t}; }
  static Gate rx(int q, double t) { return {GateKind::RX, {q}, t}; }
  static Gate ry(int q, double t) { return {GateKind::RY, {q}, t}; }
  static Gate cx(int c, int t) { return {GateKind::CX, {c, t}, 0.0}; }
  static Gate swap(int a, int b) { return {GateKind::SWAP, {a, b}, 0.0}; }
  static Gate rzz(int a, int b, double t) { return {GateKind::RZZ, {a, b}, t}; }
  static Gate measure(int q) { return {GateKind::MEASURE, {q}, 0.0}; }

  bool is_two_qubit() const { return qubits.size() == 2 && kind != GateKind::BARRIER; }

  friend bool operator==(const Gate&, const Gate&) = default;
};

/// 2x2 matrix of a single-qubit unitary gate.
Mat2 gate_matrix_1q(const Gate& g);
/// 4x4 matrix of a two-qubit gate on local index 2*bit(qubits[0]) + bit(qubits[1]).
Mat4 gate_matrix_2q(const Gate& g);

class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  const std::vector<Gate>& ops() const { return ops_; }
  std::size_t size() const { return ops_.size(); }
  bool empty() const { return ops_.empty(); }

  /// Validates operand count, range and distinctness.
  Circuit& add(Gate g);

  std::size_t count(GateKind k) const;
  std::size_t two_qubit_count() const;

  std::string to_text() const;
  static Circuit from_text(int n_qubits, std::string_view text);

  friend bool operator==(const Circuit&, const Circuit&) = default;

 private:
  int n_qubits_ = 0;
  std::vector<Gate> ops_;
};

class CouplingMap {
 public:
  CouplingMap() = default;
  CouplingMap(int n_physical, std::vector<std::pair<int, int>> edges);

  static CouplingMap line(int n);
  static CouplingMap ring(int n);

  int n_physical() const { return n_physical_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  bool coupled(int a, int b) const;
  bool connected() const;
  /// Shortest-path hop count; -1 when unreachable.
  int distance(int a, int b) const { return dist_[static_cast<std::size_t>(a) * n_physical_ + b]; }
  const std::vector<int>& neighbors(int a) const { return adjacency_[a]; }

 private:
  int n_physical_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<int> dist_;
};

/// Injective logical -> physical assignment.
class Layout {
 public:
  Layout() = default;
  Layout(std::vector<int> logical_to_physical, int n_physical);
  static Layout identity(int n_logical, int n_physical);

  int n_logical() const { return static_cast<int>(l2p_.size()); }
  int n_physical() const { return n_physical_; }
  int physical(int logical) const { return l2p_[logical]; }
  /// -1 when no logical qubit sits on `physical`.
  int logical(int physical) const { return p2l_[physical]; }
  const std::vector<int>& logical_to_physical() const { return l2p_; }

  /// Exchange the logical occupants of two physical qubits.
  void swap_physical(int a, int b);

  friend bool operator==(const Layout& a, const Layout& b) { return a.l2p_ == b.l2p_ && a.n_physical_ == b.n_physical_; }

 private:
  std::vector<int> l2p_;
  std::vector<int> p2l_;
  int n_physical_ = 0;
};

/// ASAP makespan in dt using gate_duration_dt.
int circuit_duration_dt(const Circuit& c);

/// H on every qubit, then per layer RZZ(2*gamma*w) per edge and RX(2*beta) per qubit.
Circuit build_qaoa_gate_circuit(const Graph& g, int p, const std::vector<double>& gammas,
                                const std::vector<double>& betas);

}  // namespace hybridpulse
