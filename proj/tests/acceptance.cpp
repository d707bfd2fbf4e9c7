// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hybridpulse/ansatz.hpp"
#include "hybridpulse/backend.hpp"
#include "hybridpulse/density.hpp"
#include "hybridpulse/experiment.hpp"
#include "hybridpulse/mitigation.hpp"
#include "hybridpulse/passes.hpp"
#include "hybridpulse/pulse.hpp"
#include "hybridpulse/statevector.hpp"
#include "hybridpulse/unitary.hpp"
#include "testutil.hpp"

using namespace hybridpulse;
using std::numbers::pi;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [violated: " << what << "]";
    }
  }
};

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

const BackendProfile& ideal() {
  static const BackendProfile b = find_profile("ideal");
  return b;
}

EvalConfig exact_noiseless() {
  EvalConfig c;
  c.noise = false;
  c.exact = true;
  c.cvar_alpha = 1.0;
  return c;
}

Graph cubic6() { return gen_regular_graph(6, 3, 7); }

// 1. mixer duration search
void duration_reduction(Verdict& v) {
  const auto t0 = Clock::now();
  ExperimentConfig c;
  c.graph = cubic6();
  c.backend = "toronto";
  c.mixer_duration = 320;
  c.seed = 1;
  const ExperimentResult base = run_experiment(c);
  const DurationSearchResult r = binary_search_duration(base, 0.01);
  const double secs = seconds_since(t0);
  v.detail << "min_duration=" << r.min_duration << "dt (reduction " << 100.0 * r.reduction() << "%), probes:";
  for (const auto& p : r.tested)
    v.detail << ' ' << p.duration << (p.feasible ? (p.passed ? "+" : "-") : "x");
  v.detail << ", " << secs << " s";
  v.require(r.min_duration == 128, "min_duration == 128dt");
  v.require(secs < 300.0, "runtime < 5 min");
}

// 2. hybrid initialization reproduces the gate distribution
void hybrid_expressivity(Verdict& v) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-pi, pi);
  double worst = 0.0;
  for (int n : {3, 6}) {
    const Graph g = n == 3 ? hptest::triangle() : cubic6();
    const HybridAnsatz gate = build_gate_ansatz(g, 1);
    for (int trial = 0; trial < 20; ++trial) {
      const double gamma = u(rng), beta = u(rng);
      AnsatzOptions o;
      o.gammas = {gamma};
      o.betas = {beta};
      const HybridAnsatz h = build_hybrid_ansatz(g, 1, ideal(), o);
      const auto ph = execute(h, h.initial_point(), exact_noiseless(), ideal()).probs;
      const auto pg = execute(gate, {gamma, beta}, exact_noiseless(), ideal()).probs;
      worst = std::max(worst, hptest::tv_distance(ph, pg));
    }
  }
  const double secs = seconds_since(t0);
  v.detail << "max TV=" << worst << " over 40 draws, " << secs << " s";
  v.require(worst < 1e-3, "TV < 1e-3");
  v.require(secs < 60.0, "runtime < 1 min");
}

// 3. directional noisy advantage on toronto
void noisy_advantage(Verdict& v) {
  const auto t0 = Clock::now();
  auto medians = [](ModelKind model, int mixer, bool decoherence_only) {
    std::vector<ExperimentConfig> cfgs;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      ExperimentConfig c;
      c.graph = cubic6();
      c.backend = "toronto";
      c.model = model;
      c.mixer_duration = mixer;
      c.gate_opt = true;
      c.decoherence_only = decoherence_only;
      c.seed = seed;
      cfgs.push_back(c);
    }
    std::vector<double> ar;
    for (const auto& r : run_experiments(cfgs, 0)) ar.push_back(r.ar_exact);
    return median(ar);
  };
  const double gate = medians(ModelKind::Gate, 320, false);
  const double hybrid128 = medians(ModelKind::Hybrid, 128, false);
  const double dec128 = medians(ModelKind::Hybrid, 128, true);
  const double dec320 = medians(ModelKind::Hybrid, 320, true);
  const double secs = seconds_since(t0);
  v.detail.precision(7);
  v.detail << "median AR gate(GO)=" << gate << " hybrid@128=" << hybrid128 << "; decoherence-only hybrid@128="
           << dec128 << " hybrid@320=" << dec320 << ", " << secs << " s";
  v.require(hybrid128 >= gate - 0.005, "AR(hybrid@128) >= AR(gate) - 0.005");
  v.require(dec128 > dec320, "decoherence-only AR(hybrid@128) > AR(hybrid@320)");
  v.require(secs < 1800.0, "runtime < 30 min");
}

// 4. routing + cancellation preserve the unitary and respect the coupling map
void transpiler_correctness(Verdict& v) {
  std::mt19937_64 rng(4);
  double worst = 0.0;
  std::size_t two_q = 0, compliant = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 4;
    const Circuit logical = hptest::random_circuit(n, 10 + static_cast<int>(rng() % 30), rng);
    const CouplingMap cm = trial % 2 ? CouplingMap::line(n) : CouplingMap::ring(n);
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    const Layout init(perm, n);
    const Circuit d = decompose_rzz(logical);
    const RoutedCircuit routed = sabre_map(d, cm, init);
    for (const auto& g : routed.circuit.ops())
      if (g.qubits.size() == 2) {
        ++two_q;
        if (cm.coupled(g.qubits[0], g.qubits[1])) ++compliant;
      }
    const Circuit out = commutative_cancellation(routed.circuit);
    const Eigen::MatrixXcd ref = layout_permutation(routed.final_layout) * circuit_unitary(logical) *
                                 layout_permutation(init).adjoint();
    worst = std::max(worst, distance_up_to_phase(circuit_unitary(out), ref));
  }
  v.detail << "max unitary distance=" << worst << ", coupling compliance " << compliant << "/" << two_q;
  v.require(worst < 1e-9, "unitary within 1e-9");
  v.require(compliant == two_q, "100% of 2-qubit gates on coupled pairs");
}

// 5. M3 against the explicit tensored inverse, and TV reduction
void m3_equivalence(Verdict& v) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> flip(0.01, 0.12);
  const int n = 4, dim = 1 << n;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    ConfusionSet conf;
    for (int q = 0; q < n; ++q) conf.qubits.push_back(Confusion::from_flips(flip(rng), flip(rng)));
    Eigen::MatrixXd a(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        double e = 1.0;
        for (int q = 0; q < n; ++q) e *= conf.qubits[q].m[(i >> q) & 1][(j >> q) & 1];
        a(i, j) = e;
      }
    Counts c;
    for (int i = 0; i < dim; ++i) c.add(index_to_bitstring(i, n), 1 + rng() % 500);
    Eigen::VectorXd p(dim);
    for (int i = 0; i < dim; ++i)
      p(i) = static_cast<double>(c.histogram().at(index_to_bitstring(i, n))) / static_cast<double>(c.total());
    const Eigen::VectorXd x = a.lu().solve(p);
    const double s = x.sum();
    const QuasiDistribution q = m3_mitigate(c, conf);
    for (int i = 0; i < dim; ++i) worst = std::max(worst, std::abs(q.values.at(index_to_bitstring(i, n)) - x(i) / s));
  }

  std::vector<double> ideal_p(dim, 0.0);
  ideal_p[0] = 0.4;
  ideal_p[dim - 1] = 0.3;
  ideal_p[5] += 0.2;
  ideal_p[6] += 0.1;
  ConfusionSet conf;
  for (int q = 0; q < n; ++q) conf.qubits.push_back(Confusion::from_flips(0.05 + 0.01 * q, 0.08 - 0.01 * q));
  NoiseConfig noise;
  noise.enabled = true;
  noise.readout = conf;
  const Counts c = sample_from_probabilities(ideal_p, n, 16384, noise, 2024);
  const QuasiDistribution mit = m3_mitigate(c, conf);
  double raw_tv = 0.0, mit_tv = 0.0;
  for (int i = 0; i < dim; ++i) {
    const auto z = index_to_bitstring(i, n);
    const auto it = c.histogram().find(z);
    const double raw = it == c.histogram().end() ? 0.0 : static_cast<double>(it->second) / c.total();
    const auto jt = mit.values.find(z);
    raw_tv += 0.5 * std::abs(raw - ideal_p[i]);
    mit_tv += 0.5 * std::abs((jt == mit.values.end() ? 0.0 : jt->second) - ideal_p[i]);
  }
  v.detail << "max |M3 - inverse|=" << worst << ", TV raw=" << raw_tv << " mitigated=" << mit_tv;
  v.require(worst < 1e-8, "M3 matches tensored inverse within 1e-8");
  v.require(mit_tv <= 0.5 * raw_tv, "mitigated TV <= 50% of raw");
}

// 6. CVaR semantics
void cvar_semantics(Verdict& v) {
  std::mt19937_64 rng(6);
  double worst = 0.0;
  bool monotone = true;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + trial % 4;
    const Graph g = gen_random_graph(n, 0.6, trial);
    Counts c;
    const int k = 1 + static_cast<int>(rng() % 20);
    for (int i = 0; i < k; ++i) c.add(index_to_bitstring(rng() % (1u << n), n), 1 + rng() % 100);
    worst = std::max(worst, std::abs(cvar_cost(g, c, 1.0) - expected_cut(g, c)));
    double prev = std::numeric_limits<double>::infinity();
    for (int a = 1; a <= 10; ++a) {
      const double val = cvar_cost(g, c, a / 10.0);
      if (val > prev + 1e-12) monotone = false;
      prev = val;
    }
  }
  v.detail << "max |CVaR(1) - E[C]|=" << worst << ", monotone=" << (monotone ? "yes" : "no");
  v.require(worst <= 1e-12, "CVaR(1) equals expectation within 1e-12");
  v.require(monotone, "CVaR nonincreasing in alpha");
}

// 7. QAOA optimum on the triangle and uniform-state AR
void qaoa_sanity(Verdict& v) {
  const Graph g = hptest::triangle();
  const HybridAnsatz a = build_gate_ansatz(g, 1);
  const EvalConfig c = exact_noiseless();
  double grid = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 100; ++i)
    for (int j = 0; j < 100; ++j) grid = std::max(grid, -evaluate(a, {pi * i / 100.0, pi * j / 100.0}, c, ideal()).cost);
  const CostFn f = [&](const std::vector<double>& x) { return evaluate(a, x, c, ideal()).cost; };
  const double inf = std::numeric_limits<double>::infinity();
  const OptResult r = minimize(f, a.initial_point(), std::vector<Bound>(2, Bound{-inf, inf, true, 0.1}), 200, 0);
  const double best = -r.best_cost;

  double worst_uniform = 0.0;
  for (const Graph& h : {g, cubic6(), gen_random_graph(5, 0.5, 3)}) {
    const HybridAnsatz u = build_gate_ansatz(h, 1);
    const double ar = report_ar(u, {0.0, 0.0}, c, ideal());
    const double expect = (h.total_weight() / 2.0) / max_cut_bruteforce(h).value;
    worst_uniform = std::max(worst_uniform, std::abs(ar - expect));
  }
  v.detail << "optimized <C>=" << best << " grid max=" << grid << ", uniform AR deviation=" << worst_uniform;
  v.require(best >= 0.99 * grid, "within 1% of grid maximum");
  v.require(worst_uniform <= 1e-12, "uniform AR equals (|E|/2)/C_max");
}

// 8. simulator cross-oracle, trace preservation, propagator unitarity
void simulator_oracles(Verdict& v) {
  std::mt19937_64 rng(8);
  double sv_gap = 0.0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 6;
    const Circuit c = hptest::random_circuit(n, 40, rng);
    DensityState d(n);
    apply_circuit(d, c, NoiseConfig::ideal());
    StateVector sv(n);
    sv.run(c);
    const auto& psi = sv.amplitudes();
    for (std::size_t r = 0; r < d.dim(); ++r)
      for (std::size_t col = 0; col < d.dim(); ++col)
        sv_gap = std::max(sv_gap, std::abs(d(r, col) - psi[r] * std::conj(psi[col])));
  }

  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double trace_gap = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const double p = u01(rng);
    trace_gap = std::max({trace_gap, depolarizing_1q(p).completeness_error(), depolarizing_2q(p).completeness_error(),
                          amplitude_damping(p).completeness_error(), dephasing(p).completeness_error()});
  }
  const BackendProfile toronto = find_profile("toronto");
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 4;
    const NoiseConfig noise = NoiseConfig::from_profile(toronto, n);
    DensityState d(n);
    apply_circuit(d, hptest::random_circuit(n, 30, rng), noise);
    apply_idle_decoherence(d, 1000.0 * u01(rng), noise);
    trace_gap = std::max(trace_gap, std::abs(d.trace() - 1.0));
  }

  double unitary_gap = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const int duration = 32 * (1 + static_cast<int>(rng() % 12));
    double phase = 2 * pi * u01(rng);
    if (phase >= 2 * pi) phase = 0.0;
    const PulseParams p = PulseParams::gaussian(u01(rng), phase, -100.0 + 200.0 * u01(rng), duration);
    const Mat2 u = pulse_propagator(p, ideal());
    const Mat4 w = cr_propagator(p, ideal());
    unitary_gap = std::max({unitary_gap, (u.dagger() * u - Mat2::identity()).max_abs(),
                            (w.dagger() * w - Mat4::identity()).max_abs()});
  }
  v.detail << "density vs statevector=" << sv_gap << ", trace defect=" << trace_gap
           << ", propagator unitarity defect=" << unitary_gap;
  v.require(sv_gap < 1e-9, "density matches statevector within 1e-9");
  v.require(trace_gap < 1e-9, "channels trace-preserving within 1e-9");
  v.require(unitary_gap < 1e-9, "propagators unitary within 1e-9");
}

// 9. protocol defaults and calibration presets
void protocol_fidelity(Verdict& v) {
  const ExperimentConfig c;
  v.require(c.shots == 1024, "shots 1024");
  v.require(c.resolved_max_iter() == 50, "max-iter 50");
  v.require(c.cvar_alpha == 0.3, "CVaR alpha 0.3");
  v.require(c.p == 1, "p = 1");
  v.require(c.fixed_layout, "fixed layout");

  struct Row {
    const char* name;
    int n;
    double px, cx, ro, t1, t2, ro_len;
  };
  constexpr Row table[] = {
      {"auckland", 27, 2.229e-4, 1.164e-2, 0.011, 166.220, 145.620, 757.333},
      {"toronto", 27, 2.774e-4, 9.677e-3, 0.031, 104.200, 120.760, 5962.667},
      {"guadalupe", 16, 3.023e-4, 1.108e-2, 0.025, 102.320, 102.530, 7111.111},
      {"montreal", 27, 2.780e-4, 1.049e-2, 0.015, 123.99, 95.01, 5201.778},
  };
  int matched = 0;
  for (const Row& r : table) {
    const BackendProfile p = find_profile(r.name);
    const bool ok = p.n_qubits == r.n && p.pauli_x_error == r.px && p.cnot_error == r.cx && p.readout_error == r.ro &&
                    p.t1_us == r.t1 && p.t2_us == r.t2 && p.readout_length_ns == r.ro_len;
    v.require(ok, std::string(r.name) + " preset");
    matched += ok;
  }
  v.detail << "defaults shots=" << c.shots << " max_iter=" << c.resolved_max_iter() << " cvar=" << c.cvar_alpha
           << " p=" << c.p << " fixed_layout=" << c.fixed_layout << ", presets matched " << matched << "/4";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria = {
      {"duration reduction", duration_reduction},   {"hybrid expressivity", hybrid_expressivity},
      {"noisy advantage", noisy_advantage},         {"transpiler correctness", transpiler_correctness},
      {"M3 equivalence", m3_equivalence},           {"CVaR semantics", cvar_semantics},
      {"QAOA optimum sanity", qaoa_sanity},         {"simulator cross-oracle", simulator_oracles},
      {"protocol fidelity", protocol_fidelity},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      criteria[i].second(v);
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << " [exception: " << e.what() << "]";
    }
    failures += !v.pass;
    std::printf("%s criterion %zu: %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                v.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
