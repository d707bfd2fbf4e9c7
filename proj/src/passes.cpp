#include "hybridpulse/passes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <set>
#include <vector>

#include "hybridpulse/error.hpp"

namespace hybridpulse {

Circuit decompose_rzz(const Circuit& c) {
  Circuit out(c.n_qubits());
  for (const auto& g : c.ops()) {
    if (g.kind == GateKind::RZZ) {
      const int a = g.qubits[0], b = g.qubits[1];
      out.add(Gate::cx(a, b));
      out.add(Gate::rz(b, g.angle));
      out.add(Gate::cx(a, b));
    } else {
      out.add(g);
    }
  }
  return out;
}

Circuit decompose_to_native(const Circuit& c) {
  using std::numbers::pi;
  Circuit out(c.n_qubits());
  const Circuit lowered = decompose_rzz(c);
  for (const auto& g : lowered.ops()) {
    const int q = g.qubits.empty() ? 0 : g.qubits[0];
    switch (g.kind) {
      case GateKind::H:
        out.add(Gate::rz(q, pi / 2)).add(Gate::sx(q)).add(Gate::rz(q, pi / 2));
        break;
      case GateKind::RX:
        out.add(Gate::rz(q, 5 * pi / 2)).add(Gate::sx(q)).add(Gate::rz(q, g.angle + pi)).add(Gate::sx(q));
        out.add(Gate::rz(q, pi / 2));
        break;
      case GateKind::RY:
        out.add(Gate::sx(q)).add(Gate::rz(q, g.angle + pi)).add(Gate::sx(q)).add(Gate::rz(q, pi));
        break;
      default:
        out.add(g);
    }
  }
  return out;
}

bool satisfies_coupling(const Circuit& c, const CouplingMap& cm) {
  if (c.n_qubits() > cm.n_physical()) return false;
  return std::all_of(c.ops().begin(), c.ops().end(), [&](const Gate& g) {
    return !g.is_two_qubit() || cm.coupled(g.qubits[0], g.qubits[1]);
  });
}

namespace {

struct Dag {
  std::vector<std::vector<std::size_t>> successors;
  std::vector<int> pending;  // unresolved predecessor count
};

Dag build_dag(const Circuit& c) {
  const auto& ops = c.ops();
  Dag dag{std::vector<std::vector<std::size_t>>(ops.size()), std::vector<int>(ops.size(), 0)};
  std::vector<std::optional<std::size_t>> last(static_cast<std::size_t>(c.n_qubits()));
  for (std::size_t i = 0; i < ops.size(); ++i) {
    std::set<std::size_t> preds;
    for (int q : ops[i].qubits)
      if (last[q]) preds.insert(*last[q]);
    for (auto p : preds) dag.successors[p].push_back(i);
    dag.pending[i] = static_cast<int>(preds.size());
    for (int q : ops[i].qubits) last[q] = i;
  }
  return dag;
}

Gate to_physical(const Gate& g, const Layout& layout) {
  Gate out = g;
  for (auto& q : out.qubits) q = layout.physical(q);
  return out;
}

}  // namespace

RoutedCircuit sabre_map(const Circuit& c, const CouplingMap& cm, const Layout& initial, const SabreOptions& opts) {
  if (!cm.connected()) throw InputError("coupling map is disconnected");
  if (c.n_qubits() > cm.n_physical()) throw InputError("circuit has more qubits than the coupling map");
  if (initial.n_logical() != c.n_qubits() || initial.n_physical() != cm.n_physical())
    throw InputError("initial layout does not match circuit and coupling map");
  for (const auto& g : c.ops())
    if (g.kind != GateKind::BARRIER && g.qubits.size() > 2) throw InputError("routing supports 1- and 2-qubit gates");

  const auto& ops = c.ops();
  Dag dag = build_dag(c);
  Layout layout = initial;
  RoutedCircuit result{Circuit(cm.n_physical()), initial, 0};

  std::vector<std::size_t> front;
  for (std::size_t i = 0; i < ops.size(); ++i)
    if (dag.pending[i] == 0) front.push_back(i);

  std::vector<double> decay(static_cast<std::size_t>(cm.n_physical()), 1.0);
  int decisions = 0;
  int swaps_since_progress = 0;
  const int livelock_limit = 10 * cm.n_physical();

  auto executable = [&](std::size_t i) {
    const Gate& g = ops[i];
    return !g.is_two_qubit() || cm.coupled(layout.physical(g.qubits[0]), layout.physical(g.qubits[1]));
  };

  auto emit_swap = [&](int a, int b) {
    result.circuit.add(Gate::swap(a, b));
    layout.swap_physical(a, b);
    ++result.swaps_inserted;
  };

  while (!front.empty()) {
    // Execute everything currently routable.
    bool progressed = true;
    bool any = false;
    while (progressed) {
      progressed = false;
      std::vector<std::size_t> next;
      for (std::size_t i : front) {
        if (executable(i)) {
          result.circuit.add(to_physical(ops[i], layout));
          for (std::size_t s : dag.successors[i])
            if (--dag.pending[s] == 0) next.push_back(s);
          progressed = any = true;
        } else {
          next.push_back(i);
        }
      }
      std::sort(next.begin(), next.end());
      front = std::move(next);
    }
    if (any) {
      swaps_since_progress = 0;
      std::fill(decay.begin(), decay.end(), 1.0);
    }
    if (front.empty()) break;

    if (swaps_since_progress >= livelock_limit) {
      // Walk the first blocked gate's operands together along a shortest path.
      const Gate& g = ops[front.front()];
      int pa = layout.physical(g.qubits[0]);
      const int pb = layout.physical(g.qubits[1]);
      while (cm.distance(pa, pb) > 1) {
        for (int nb : cm.neighbors(pa)) {
          if (cm.distance(nb, pb) == cm.distance(pa, pb) - 1) {
            emit_swap(std::min(pa, nb), std::max(pa, nb));
            pa = nb;
            break;
          }
        }
      }
      swaps_since_progress = 0;
      continue;
    }

    // Lookahead window: the next two-qubit gates reachable from the front.
    std::vector<std::size_t> extended;
    {
      std::vector<int> pending = dag.pending;
      std::vector<std::size_t> frontier = front;
      while (!frontier.empty() && extended.size() < opts.lookahead_gates) {
        std::vector<std::size_t> next;
        for (std::size_t i : frontier)
          for (std::size_t s : dag.successors[i])
            if (--pending[s] == 0) next.push_back(s);
        std::sort(next.begin(), next.end());
        for (std::size_t s : next)
          if (ops[s].is_two_qubit() && extended.size() < opts.lookahead_gates) extended.push_back(s);
        frontier = std::move(next);
      }
    }

    std::set<std::pair<int, int>> candidates;
    for (std::size_t i : front) {
      if (!ops[i].is_two_qubit()) continue;
      for (int lq : ops[i].qubits) {
        const int p = layout.physical(lq);
        for (int nb : cm.neighbors(p)) candidates.emplace(std::min(p, nb), std::max(p, nb));
      }
    }

    auto gate_distance = [&](const Layout& l, std::size_t i) {
      return static_cast<double>(cm.distance(l.physical(ops[i].qubits[0]), l.physical(ops[i].qubits[1])));
    };

    double best_score = std::numeric_limits<double>::infinity();
    std::pair<int, int> best{-1, -1};
    for (const auto& [a, b] : candidates) {  // ordered: ties keep the lowest pair
      Layout trial = layout;
      trial.swap_physical(a, b);
      double front_cost = 0.0;
      for (std::size_t i : front)
        if (ops[i].is_two_qubit()) front_cost += gate_distance(trial, i);
      double ahead_cost = 0.0;
      for (std::size_t i : extended) ahead_cost += gate_distance(trial, i);
      const double score = std::max(decay[a], decay[b]) * (front_cost + opts.lookahead_weight * ahead_cost);
      if (score < best_score) {
        best_score = score;
        best = {a, b};
      }
    }

    emit_swap(best.first, best.second);
    decay[best.first] += opts.decay_step;
    decay[best.second] += opts.decay_step;
    ++swaps_since_progress;
    if (++decisions % opts.decay_reset_interval == 0) std::fill(decay.begin(), decay.end(), 1.0);
  }

  result.final_layout = layout;
  return result;
}

namespace {

bool shares_qubit(const Gate& a, const Gate& b) {
  for (int q : a.qubits)
    if (std::find(b.qubits.begin(), b.qubits.end(), q) != b.qubits.end()) return true;
  return false;
}

bool is_x_axis(GateKind k) { return k == GateKind::X || k == GateKind::RX || k == GateKind::SX; }

// A single-qubit gate on `q` against CX(control, target).
bool one_qubit_commutes_with_cx(const Gate& g, const Gate& cx) {
  const int q = g.qubits[0];
  if (q == cx.qubits[0]) return gate_is_diagonal(g.kind);
  if (q == cx.qubits[1]) return is_x_axis(g.kind);
  return true;
}

bool commutes_ordered(const Gate& a, const Gate& b) {
  if (a.kind == GateKind::CX && b.kind == GateKind::CX) {
    const bool same_control = a.qubits[0] == b.qubits[0];
    const bool same_target = a.qubits[1] == b.qubits[1];
    const bool crossed = a.qubits[0] == b.qubits[1] || a.qubits[1] == b.qubits[0];
    return !crossed && (same_control || same_target);
  }
  if (b.kind == GateKind::CX && a.qubits.size() == 1) return one_qubit_commutes_with_cx(a, b);
  if (a.kind == GateKind::RZZ && b.kind == GateKind::CX) {
    // Z-type operators commute with a CX only through its control.
    const int t = b.qubits[1];
    return std::find(a.qubits.begin(), a.qubits.end(), t) == a.qubits.end();
  }
  if (a.qubits.size() == 1 && b.qubits.size() == 1) return is_x_axis(a.kind) && is_x_axis(b.kind);
  return false;
}

bool same_operands(const Gate& a, const Gate& b) {
  if (a.kind != b.kind) return false;
  if (a.qubits == b.qubits) return true;
  // RZZ and SWAP are symmetric in their operands.
  const bool symmetric = a.kind == GateKind::RZZ || a.kind == GateKind::SWAP;
  return symmetric && a.qubits.size() == 2 && a.qubits[0] == b.qubits[1] && a.qubits[1] == b.qubits[0];
}

bool self_inverse(GateKind k) {
  return k == GateKind::H || k == GateKind::X || k == GateKind::CX || k == GateKind::SWAP;
}

bool mergeable(GateKind k) { return k == GateKind::RZ || k == GateKind::RX || k == GateKind::RZZ; }

bool angle_is_identity(double angle) {
  const double period = 4.0 * std::numbers::pi;
  const double r = std::remainder(angle, period);
  return std::abs(r) < 1e-12;
}

// One sweep; returns true when something was removed or merged.
bool cancellation_sweep(std::vector<Gate>& ops) {
  for (std::size_t i = 1; i < ops.size(); ++i) {
    const Gate& cur = ops[i];
    if (!self_inverse(cur.kind) && !mergeable(cur.kind)) continue;
    for (std::size_t jj = i; jj-- > 0;) {
      const Gate& prev = ops[jj];
      if (!shares_qubit(cur, prev)) continue;
      if (same_operands(cur, prev)) {
        if (self_inverse(cur.kind)) {
          ops.erase(ops.begin() + static_cast<std::ptrdiff_t>(i));
          ops.erase(ops.begin() + static_cast<std::ptrdiff_t>(jj));
        } else {
          ops[jj].angle += cur.angle;
          ops.erase(ops.begin() + static_cast<std::ptrdiff_t>(i));
          if (angle_is_identity(ops[jj].angle)) ops.erase(ops.begin() + static_cast<std::ptrdiff_t>(jj));
        }
        return true;
      }
      if (!gates_commute(cur, prev)) break;
    }
  }
  // Lone identity rotations.
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (mergeable(ops[i].kind) && angle_is_identity(ops[i].angle)) {
      ops.erase(ops.begin() + static_cast<std::ptrdiff_t>(i));
      return true;
    }
  }
  return false;
}

}  // namespace

bool gates_commute(const Gate& a, const Gate& b) {
  if (!shares_qubit(a, b)) return true;
  auto opaque = [](GateKind k) { return k == GateKind::MEASURE || k == GateKind::BARRIER; };
  if (opaque(a.kind) || opaque(b.kind)) return false;
  if (same_operands(a, b)) return true;
  if (gate_is_diagonal(a.kind) && gate_is_diagonal(b.kind)) return true;
  return commutes_ordered(a, b) || commutes_ordered(b, a);
}

Circuit commutative_cancellation(const Circuit& c) {
  std::vector<Gate> ops = c.ops();
  while (cancellation_sweep(ops)) {
  }
  Circuit out(c.n_qubits());
  for (auto& g : ops) out.add(std::move(g));
  return out;
}

}  // namespace hybridpulse
