#include "hybridpulse/circuit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <deque>
#include <set>
#include <sstream>

#include "hybridpulse/error.hpp"

namespace hybridpulse {

namespace {

struct KindInfo {
  GateKind kind;
  std::string_view name;
  int arity;
  bool angle;
  bool diagonal;
  int duration_dt;
  int error_weight;
};

// Durations and error weights count native operations: RZ is a frame change,
// SX/X take one 160 dt pulse, RX/RY two SX, RZZ two CX, SWAP three CX.
constexpr KindInfo kKinds[] = {
    {GateKind::H, "H", 1, false, false, 160, 1},
    {GateKind::X, "X", 1, false, false, 160, 1},
    {GateKind::SX, "SX", 1, false, false, 160, 1},
    {GateKind::RZ, "RZ", 1, true, true, 0, 0},
    {GateKind::RX, "RX", 1, true, false, 320, 2},
    {GateKind::RY, "RY", 1, true, false, 320, 2},
    {GateKind::CX, "CX", 2, false, false, kCxDurationDt, 1},
    {GateKind::SWAP, "SWAP", 2, false, false, 3 * kCxDurationDt, 3},
    {GateKind::RZZ, "RZZ", 2, true, true, 2 * kCxDurationDt, 2},
    {GateKind::MEASURE, "MEASURE", 1, false, false, 0, 0},
    {GateKind::BARRIER, "BARRIER", 0, false, false, 0, 0},
};

const KindInfo& info(GateKind k) {
  for (const auto& i : kKinds)
    if (i.kind == k) return i;
  throw InputError("unknown gate kind");
}

}  // namespace

std::string_view gate_name(GateKind k) { return info(k).name; }

std::optional<GateKind> parse_gate_kind(std::string_view name) {
  for (const auto& i : kKinds)
    if (i.name == name) return i.kind;
  return std::nullopt;
}

int gate_arity(GateKind k) { return info(k).arity; }
bool gate_has_angle(GateKind k) { return info(k).angle; }
bool gate_is_diagonal(GateKind k) { return info(k).diagonal; }

Mat2 gate_matrix_1q(const Gate& g) {
  Mat2 m;
  const double c = std::cos(g.angle / 2), s = std::sin(g.angle / 2);
  switch (g.kind) {
    case GateKind::H: {
      const double r = 1.0 / std::sqrt(2.0);
      m(0, 0) = r;
      m(0, 1) = r;
      m(1, 0) = r;
      m(1, 1) = -r;
      return m;
    }
    case GateKind::X:
      return pauli::X();
    case GateKind::SX:
      m(0, 0) = cd(0.5, 0.5);
      m(0, 1) = cd(0.5, -0.5);
      m(1, 0) = cd(0.5, -0.5);
      m(1, 1) = cd(0.5, 0.5);
      return m;
    case GateKind::RZ:
      m(0, 0) = cd(c, -s);
      m(1, 1) = cd(c, s);
      return m;
    case GateKind::RX:
      m(0, 0) = c;
      m(1, 1) = c;
      m(0, 1) = cd(0, -s);
      m(1, 0) = cd(0, -s);
      return m;
    case GateKind::RY:
      m(0, 0) = c;
      m(1, 1) = c;
      m(0, 1) = -s;
      m(1, 0) = s;
      return m;
    default:
      throw InputError(std::string("no single-qubit matrix for ") + std::string(gate_name(g.kind)));
  }
}

Mat4 gate_matrix_2q(const Gate& g) {
  Mat4 m;
  switch (g.kind) {
    case GateKind::CX:
      m(0, 0) = 1.0;
      m(1, 1) = 1.0;
      m(2, 3) = 1.0;
      m(3, 2) = 1.0;
      return m;
    case GateKind::SWAP:
      m(0, 0) = 1.0;
      m(1, 2) = 1.0;
      m(2, 1) = 1.0;
      m(3, 3) = 1.0;
      return m;
    case GateKind::RZZ: {
      const cd minus = std::exp(cd(0, -g.angle / 2));
      const cd plus = std::exp(cd(0, g.angle / 2));
      m(0, 0) = minus;
      m(1, 1) = plus;
      m(2, 2) = plus;
      m(3, 3) = minus;
      return m;
    }
    default:
      throw InputError(std::string("no two-qubit matrix for ") + std::string(gate_name(g.kind)));
  }
}

Circuit::Circuit(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits <= 0) throw InputError("circuit needs at least one qubit");
}

Circuit& Circuit::add(Gate g) {
  const int arity = gate_arity(g.kind);
  if (arity != 0 && static_cast<int>(g.qubits.size()) != arity)
    throw InputError(std::string(gate_name(g.kind)) + " expects " + std::to_string(arity) + " operand(s)");
  std::set<int> distinct;
  for (int q : g.qubits) {
    if (q < 0 || q >= n_qubits_) throw InputError("operand " + std::to_string(q) + " out of range");
    if (!distinct.insert(q).second) throw InputError("repeated operand " + std::to_string(q));
  }
  if (!gate_has_angle(g.kind)) g.angle = 0.0;
  ops_.push_back(std::move(g));
  return *this;
}

std::size_t Circuit::count(GateKind k) const {
  return static_cast<std::size_t>(std::count_if(ops_.begin(), ops_.end(), [k](const Gate& g) { return g.kind == k; }));
}

std::size_t Circuit::two_qubit_count() const {
  return static_cast<std::size_t>(std::count_if(ops_.begin(), ops_.end(), [](const Gate& g) { return g.is_two_qubit(); }));
}

std::string Circuit::to_text() const {
  std::string out;
  char buf[64];
  for (const auto& g : ops_) {
    out += gate_name(g.kind);
    out += ' ';
    for (std::size_t i = 0; i < g.qubits.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(g.qubits[i]);
    }
    if (gate_has_angle(g.kind)) {
      std::snprintf(buf, sizeof buf, "@%.17g", g.angle);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

Circuit Circuit::from_text(int n_qubits, std::string_view text) {
  Circuit c(n_qubits);
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto space = line.find(' ');
    const auto kind = parse_gate_kind(line.substr(0, space));
    if (!kind) throw InputError("line " + std::to_string(lineno) + ": unknown gate '" + line.substr(0, space) + "'");
    Gate g{*kind, {}, 0.0};
    if (space != std::string::npos) {
      std::string rest = line.substr(space + 1);
      const auto at = rest.find('@');
      if (at != std::string::npos) {
        g.angle = std::stod(rest.substr(at + 1));
        rest = rest.substr(0, at);
      }
      std::istringstream qs(rest);
      std::string tok;
      while (std::getline(qs, tok, ',')) g.qubits.push_back(std::stoi(tok));
    }
    c.add(std::move(g));
  }
  return c;
}

CouplingMap::CouplingMap(int n_physical, std::vector<std::pair<int, int>> edges)
    : n_physical_(n_physical), adjacency_(static_cast<std::size_t>(n_physical)) {
  if (n_physical <= 0) throw InputError("coupling map needs at least one qubit");
  std::set<std::pair<int, int>> seen;
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n_physical || b >= n_physical || a == b) throw InputError("invalid coupling pair");
    if (!seen.emplace(std::min(a, b), std::max(a, b)).second) throw InputError("duplicate coupling pair");
    edges_.emplace_back(a, b);
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());

  dist_.assign(static_cast<std::size_t>(n_physical) * n_physical, -1);
  for (int s = 0; s < n_physical; ++s) {
    std::deque<int> queue{s};
    dist_[static_cast<std::size_t>(s) * n_physical + s] = 0;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int v : adjacency_[u]) {
        auto& d = dist_[static_cast<std::size_t>(s) * n_physical + v];
        if (d < 0) {
          d = dist_[static_cast<std::size_t>(s) * n_physical + u] + 1;
          queue.push_back(v);
        }
      }
    }
  }
}

CouplingMap CouplingMap::line(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return CouplingMap(n, std::move(e));
}

CouplingMap CouplingMap::ring(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  if (n > 2) e.emplace_back(n - 1, 0);
  return CouplingMap(n, std::move(e));
}

bool CouplingMap::coupled(int a, int b) const {
  const auto& nb = adjacency_[a];
  return std::binary_search(nb.begin(), nb.end(), b);
}

bool CouplingMap::connected() const {
  return std::none_of(dist_.begin(), dist_.begin() + n_physical_, [](int d) { return d < 0; });
}

Layout::Layout(std::vector<int> logical_to_physical, int n_physical)
    : l2p_(std::move(logical_to_physical)), p2l_(static_cast<std::size_t>(n_physical), -1), n_physical_(n_physical) {
  if (static_cast<int>(l2p_.size()) > n_physical) throw InputError("layout has more logical than physical qubits");
  for (std::size_t l = 0; l < l2p_.size(); ++l) {
    const int p = l2p_[l];
    if (p < 0 || p >= n_physical) throw InputError("layout target out of range");
    if (p2l_[p] != -1) throw InputError("layout is not injective");
    p2l_[p] = static_cast<int>(l);
  }
}

Layout Layout::identity(int n_logical, int n_physical) {
  std::vector<int> m(static_cast<std::size_t>(n_logical));
  for (int i = 0; i < n_logical; ++i) m[i] = i;
  return Layout(std::move(m), n_physical);
}

void Layout::swap_physical(int a, int b) {
  const int la = p2l_[a], lb = p2l_[b];
  p2l_[a] = lb;
  p2l_[b] = la;
  if (la >= 0) l2p_[la] = b;
  if (lb >= 0) l2p_[lb] = a;
}

int gate_duration_dt(GateKind k) { return info(k).duration_dt; }
int gate_error_weight(GateKind k) { return info(k).error_weight; }

int circuit_duration_dt(const Circuit& c) {
  std::vector<int> ready(static_cast<std::size_t>(c.n_qubits()), 0);
  for (const auto& g : c.ops()) {
    int start = 0;
    for (int q : g.qubits) start = std::max(start, ready[q]);
    for (int q : g.qubits) ready[q] = start + gate_duration_dt(g.kind);
  }
  return ready.empty() ? 0 : *std::max_element(ready.begin(), ready.end());
}

Circuit build_qaoa_gate_circuit(const Graph& g, int p, const std::vector<double>& gammas,
                                const std::vector<double>& betas) {
  if (p < 1) throw ParameterError("QAOA needs p >= 1");
  if (gammas.size() != static_cast<std::size_t>(p) || betas.size() != static_cast<std::size_t>(p))
    throw ParameterError("QAOA needs exactly p gammas and p betas");
  Circuit c(g.n_nodes());
  for (int q = 0; q < g.n_nodes(); ++q) c.add(Gate::h(q));
  for (int layer = 0; layer < p; ++layer) {
    for (const auto& e : g.edges()) c.add(Gate::rzz(e.u, e.v, 2.0 * gammas[layer] * e.w));
    for (int q = 0; q < g.n_nodes(); ++q) c.add(Gate::rx(q, 2.0 * betas[layer]));
  }
  return c;
}

}  // namespace hybridpulse
