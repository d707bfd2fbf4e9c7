#include "hybridpulse/ansatz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hybridpulse/density.hpp"
#include "hybridpulse/error.hpp"
#include "hybridpulse/passes.hpp"
#include "hybridpulse/unitary.hpp"

namespace hybridpulse {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kFlankDuration = 160;
constexpr int kCrDuration = 320;

double wrap_phase(double phi) {
  double r = std::fmod(phi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

std::string idx(const std::string& base, int layer) { return base + "[" + std::to_string(layer) + "]"; }

ParamSpec angle_spec(std::string name) {
  const double inf = std::numeric_limits<double>::infinity();
  return {std::move(name), ParamKind::Angle, -inf, inf, true, 0.1};
}

ParamSpec amp_spec(std::string name) { return {std::move(name), ParamKind::Amp, 0.0, 1.0, false, 0.05}; }
ParamSpec phase_spec(std::string name) { return {std::move(name), ParamKind::Phase, 0.0, kTwoPi, true, 0.2}; }
ParamSpec freq_spec(std::string name) {
  return {std::move(name), ParamKind::Freq, -kMaxFreqShiftMhz, kMaxFreqShiftMhz, false, 0.01};
}

std::string kind_name(ParamKind k) {
  switch (k) {
    case ParamKind::Angle: return "angle";
    case ParamKind::Amp: return "amp";
    case ParamKind::Phase: return "phase";
    case ParamKind::Freq: return "freq_mhz";
  }
  return "?";
}

GateSegment hadamard_layer(int n) {
  GateSegment seg{"init", Circuit(n), {}};
  for (int q = 0; q < n; ++q) {
    seg.circuit.add(Gate::h(q));
    seg.slots.push_back({});
  }
  return seg;
}

void resolve_initial_angles(const Graph& g, int p, const AnsatzOptions& opts, std::vector<double>& gammas,
                            std::vector<double>& betas) {
  if (p < 1) throw ParameterError("ansatz needs p >= 1");
  if (g.n_nodes() < 1) throw InputError("ansatz needs a nonempty graph");
  gammas = opts.gammas.empty() ? std::vector<double>(static_cast<std::size_t>(p), kDefaultGamma) : opts.gammas;
  betas = opts.betas.empty() ? std::vector<double>(static_cast<std::size_t>(p), kDefaultBeta) : opts.betas;
  if (gammas.size() != static_cast<std::size_t>(p) || betas.size() != static_cast<std::size_t>(p))
    throw ParameterError("initial gammas/betas must have length p");
}

}  // namespace

std::string model_name(ModelKind k) {
  switch (k) {
    case ModelKind::Gate: return "gate";
    case ModelKind::Hybrid: return "hybrid";
    case ModelKind::PulseOnly: return "pulse";
  }
  return "?";
}

ModelKind parse_model(const std::string& s) {
  if (s == "gate") return ModelKind::Gate;
  if (s == "hybrid") return ModelKind::Hybrid;
  if (s == "pulse" || s == "pulse_only") return ModelKind::PulseOnly;
  throw InputError("unknown model '" + s + "' (expected gate, hybrid or pulse)");
}

std::pair<double, double> pulse_for_rx(double theta, int duration, const BackendProfile& backend, bool clip) {
  // RX(t) and RX(t - 2 pi) differ by a global sign.
  double r = std::remainder(theta, 2.0 * kTwoPi);
  if (r > std::numbers::pi) r -= kTwoPi;
  if (r < -std::numbers::pi) r += kTwoPi;
  double amp = 1.0;
  try {
    amp = calibrate_amp_for_rx(std::abs(r), duration, backend);
  } catch (const InfeasibleDurationError&) {
    if (!clip) throw;
  }
  return {amp, r < 0.0 ? std::numbers::pi : 0.0};
}

int HybridAnsatz::add_param(ParamSpec spec, double init) {
  params_.push_back(std::move(spec));
  x0_.push_back(init);
  return static_cast<int>(params_.size()) - 1;
}

void HybridAnsatz::check(const std::vector<double>& x) const {
  if (x.size() != params_.size())
    throw ParameterError("expected " + std::to_string(params_.size()) + " parameters, got " +
                         std::to_string(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& s = params_[i];
    if (!std::isfinite(x[i])) throw ParameterError(s.name + " is not finite");
    if (!s.periodic && (x[i] < s.lower || x[i] > s.upper))
      throw ParameterError(s.name + " = " + std::to_string(x[i]) + " outside [" + std::to_string(s.lower) + ", " +
                           std::to_string(s.upper) + "]");
  }
}

std::vector<BoundSegment> HybridAnsatz::bind(const std::vector<double>& x) const {
  check(x);
  std::vector<BoundSegment> out;
  for (const auto& seg : segments_) {
    if (const auto* gs = std::get_if<GateSegment>(&seg)) {
      Circuit c(gs->circuit.n_qubits());
      for (std::size_t i = 0; i < gs->circuit.size(); ++i) {
        Gate g = gs->circuit.ops()[i];
        const auto& slot = gs->slots[i];
        if (slot.param >= 0) g.angle = slot.offset + slot.coeff * x[static_cast<std::size_t>(slot.param)];
        c.add(std::move(g));
      }
      out.emplace_back(std::move(c));
    } else {
      const auto& ps = std::get<PulseSegment>(seg);
      Schedule s = ps.schedule;
      for (std::size_t i = 0; i < s.instructions.size(); ++i) {
        auto& p = s.instructions[i].params;
        const auto& slot = ps.slots[i];
        if (slot.amp >= 0) p.amp = x[static_cast<std::size_t>(slot.amp)];
        if (slot.phase >= 0) p.phase = wrap_phase(x[static_cast<std::size_t>(slot.phase)]);
        if (slot.freq >= 0) p.freq_mhz = x[static_cast<std::size_t>(slot.freq)];
      }
      out.emplace_back(std::move(s));
    }
  }
  return out;
}

nlohmann::json HybridAnsatz::describe() const {
  nlohmann::json segs = nlohmann::json::array();
  for (const auto& seg : segments_) {
    if (const auto* gs = std::get_if<GateSegment>(&seg)) {
      segs.push_back({{"type", "gate"},
                      {"label", gs->label},
                      {"gates", gs->circuit.size()},
                      {"two_qubit_gates", gs->circuit.two_qubit_count()}});
    } else {
      const auto& ps = std::get<PulseSegment>(seg);
      segs.push_back({{"type", "pulse"},
                      {"label", ps.label},
                      {"instructions", ps.schedule.instructions.size()},
                      {"makespan_dt", ps.schedule.makespan()}});
    }
  }
  nlohmann::json params = nlohmann::json::array();
  for (const auto& p : params_) {
    nlohmann::json j = {{"name", p.name}, {"kind", kind_name(p.kind)}, {"periodic", p.periodic}};
    j["lower"] = std::isfinite(p.lower) ? nlohmann::json(p.lower) : nlohmann::json(nullptr);
    j["upper"] = std::isfinite(p.upper) ? nlohmann::json(p.upper) : nlohmann::json(nullptr);
    params.push_back(j);
  }
  nlohmann::json j = {{"model", model_name(kind_)},
                      {"n_qubits", graph_.n_nodes()},
                      {"layers", layers_},
                      {"segments", segs},
                      {"parameters", params},
                      {"n_parameters", params_.size()}};
  j["mixer_duration_dt"] = kind_ == ModelKind::Gate ? nlohmann::json(nullptr) : nlohmann::json(mixer_duration_);
  return j;
}

HybridAnsatz build_gate_ansatz(const Graph& g, int p, const AnsatzOptions& opts) {
  std::vector<double> gammas, betas;
  resolve_initial_angles(g, p, opts, gammas, betas);
  HybridAnsatz a;
  a.kind_ = ModelKind::Gate;
  a.graph_ = g;
  a.layers_ = p;
  const int n = g.n_nodes();
  a.segments_.push_back(hadamard_layer(n));
  for (int l = 0; l < p; ++l) {
    const int gi = a.add_param(angle_spec(idx("gamma", l)), gammas[l]);
    const int bi = a.add_param(angle_spec(idx("beta", l)), betas[l]);
    GateSegment phase{idx("phase", l), Circuit(n), {}};
    for (const auto& e : g.edges()) {
      phase.circuit.add(Gate::rzz(e.u, e.v, 0.0));
      phase.slots.push_back({gi, 2.0 * e.w, 0.0});
    }
    GateSegment mixer{idx("mixer", l), Circuit(n), {}};
    for (int q = 0; q < n; ++q) {
      mixer.circuit.add(Gate::rx(q, 0.0));
      mixer.slots.push_back({bi, 2.0, 0.0});
    }
    a.segments_.push_back(std::move(phase));
    a.segments_.push_back(std::move(mixer));
  }
  return a;
}

HybridAnsatz build_hybrid_ansatz(const Graph& g, int p, const BackendProfile& backend, const AnsatzOptions& opts) {
  if (opts.mixer_duration <= 0 || opts.mixer_duration % kDurationGranularity != 0)
    throw ParameterError("mixer duration must be a positive multiple of 32 dt");
  std::vector<double> gammas, betas;
  resolve_initial_angles(g, p, opts, gammas, betas);

  HybridAnsatz h;
  h.kind_ = ModelKind::Hybrid;
  h.graph_ = g;
  h.layers_ = p;
  h.mixer_duration_ = opts.mixer_duration;
  const int n = g.n_nodes();
  h.segments_.push_back(hadamard_layer(n));
  for (int l = 0; l < p; ++l) {
    const int gi = h.add_param(angle_spec(idx("gamma", l)), gammas[l]);
    GateSegment phase{idx("phase", l), Circuit(n), {}};
    for (const auto& e : g.edges()) {
      phase.circuit.add(Gate::rzz(e.u, e.v, 0.0));
      phase.slots.push_back({gi, 2.0 * e.w, 0.0});
    }
    h.segments_.push_back(std::move(phase));

    const auto [amp, phi] = pulse_for_rx(2.0 * betas[l], opts.mixer_duration, backend, opts.clip_amp);
    PulseSegment mixer{idx("mixer", l), Schedule{n, {}}, {}};
    PulseSlot shared;
    if (opts.share_mixer) {
      shared.amp = h.add_param(amp_spec(idx("amp", l)), amp);
      shared.phase = h.add_param(phase_spec(idx("phase", l)), phi);
      shared.freq = h.add_param(freq_spec(idx("freq", l)), 0.0);
    }
    for (int q = 0; q < n; ++q) {
      mixer.schedule.instructions.push_back(
          {Channel::drive(q), PulseParams::gaussian(amp, phi, 0.0, opts.mixer_duration), 0});
      if (opts.share_mixer) {
        mixer.slots.push_back(shared);
      } else {
        const std::string tag = "[" + std::to_string(l) + "][" + std::to_string(q) + "]";
        PulseSlot s;
        s.amp = h.add_param(amp_spec("amp" + tag), amp);
        s.phase = h.add_param(phase_spec("phase" + tag), phi);
        s.freq = h.add_param(freq_spec("freq" + tag), 0.0);
        mixer.slots.push_back(s);
      }
    }
    validate_schedule(mixer.schedule);
    h.segments_.push_back(std::move(mixer));
  }
  return h;
}

HybridAnsatz build_pulse_only_ansatz(const Graph& g, int p, const BackendProfile& backend,
                                     const AnsatzOptions& opts) {
  if (opts.mixer_duration <= 0 || opts.mixer_duration % kDurationGranularity != 0)
    throw ParameterError("mixer duration must be a positive multiple of 32 dt");
  std::vector<double> gammas, betas;
  resolve_initial_angles(g, p, opts, gammas, betas);

  HybridAnsatz a;
  a.kind_ = ModelKind::PulseOnly;
  a.graph_ = g;
  a.layers_ = p;
  a.mixer_duration_ = opts.mixer_duration;
  const int n = g.n_nodes();
  a.segments_.push_back(hadamard_layer(n));

  const double flank_amp = calibrate_amp_for_rx(std::numbers::pi / 2, kFlankDuration, backend);
  auto add_pulse = [&](PulseSegment& seg, Channel ch, double amp, double phi, int duration, int start,
                       const std::string& tag) {
    seg.schedule.instructions.push_back({ch, PulseParams::gaussian(amp, phi, 0.0, duration), start});
    PulseSlot s;
    s.amp = a.add_param(amp_spec(tag + ".amp"), amp);
    s.phase = a.add_param(phase_spec(tag + ".phase"), phi);
    s.freq = a.add_param(freq_spec(tag + ".freq"), 0.0);
    seg.slots.push_back(s);
  };

  for (int l = 0; l < p; ++l) {
    // RZZ(t) = RY(-pi/2)_t . ZX(t) . RY(pi/2)_t, blocks placed as soon as both qubits are free.
    PulseSegment phase{idx("phase", l), Schedule{n, {}}, {}};
    std::vector<int> free_at(static_cast<std::size_t>(n), 0);
    for (const auto& e : g.edges()) {
      const int t0 = std::max(free_at[e.u], free_at[e.v]);
      const std::string tag = "[" + std::to_string(l) + "][" + std::to_string(e.u) + "-" + std::to_string(e.v) + "]";
      const auto [cr_amp, cr_phi] = pulse_for_rx(2.0 * gammas[l] * e.w, kCrDuration, backend, opts.clip_amp);
      add_pulse(phase, Channel::drive(e.v), flank_amp, std::numbers::pi / 2, kFlankDuration, t0, "pre" + tag);
      add_pulse(phase, Channel::control(e.u, e.v), cr_amp, cr_phi, kCrDuration, t0 + kFlankDuration, "cr" + tag);
      add_pulse(phase, Channel::drive(e.v), flank_amp, 3 * std::numbers::pi / 2, kFlankDuration,
                t0 + kFlankDuration + kCrDuration, "post" + tag);
      free_at[e.u] = free_at[e.v] = t0 + 2 * kFlankDuration + kCrDuration;
    }
    validate_schedule(phase.schedule);
    a.segments_.push_back(std::move(phase));

    const auto [amp, phi] = pulse_for_rx(2.0 * betas[l], opts.mixer_duration, backend, opts.clip_amp);
    PulseSegment mixer{idx("mixer", l), Schedule{n, {}}, {}};
    for (int q = 0; q < n; ++q)
      add_pulse(mixer, Channel::drive(q), amp, phi, opts.mixer_duration, 0,
                "mix[" + std::to_string(l) + "][" + std::to_string(q) + "]");
    a.segments_.push_back(std::move(mixer));
  }
  return a;
}

HybridAnsatz build_ansatz(ModelKind kind, const Graph& g, int p, const BackendProfile& backend,
                          const AnsatzOptions& opts) {
  switch (kind) {
    case ModelKind::Gate: return build_gate_ansatz(g, p, opts);
    case ModelKind::Hybrid: return build_hybrid_ansatz(g, p, backend, opts);
    case ModelKind::PulseOnly: return build_pulse_only_ansatz(g, p, backend, opts);
  }
  throw InputError("unknown model");
}

std::vector<double> gate_equivalent_point(ModelKind kind, const Graph& g, int p, const BackendProfile& backend,
                                          AnsatzOptions opts, const std::vector<double>& gammas,
                                          const std::vector<double>& betas) {
  opts.gammas = gammas;
  opts.betas = betas;
  opts.clip_amp = true;
  return build_ansatz(kind, g, p, backend, opts).initial_point();
}

Execution execute(const HybridAnsatz& a, const std::vector<double>& x, const EvalConfig& cfg,
                  const BackendProfile& backend) {
  const int n = a.graph().n_nodes();
  if (n > kMaxDensityQubits) throw CapacityError("density-matrix engine supports at most 10 qubits");
  const NoiseConfig noise = cfg.noise ? NoiseConfig::from_profile(backend, n) : NoiseConfig::ideal();
  const auto bound = a.bind(x);

  CouplingMap device;
  if (cfg.gate_opt) device = line_subdevice(backend, n).coupling;
  Layout layout = Layout::identity(n, n);

  Execution ex;
  DensityState s(n);
  for (std::size_t i = 0; i < bound.size(); ++i) {
    const bool is_mixer = [&] {
      const auto& seg = a.segments()[i];
      const std::string& label = std::holds_alternative<GateSegment>(seg) ? std::get<GateSegment>(seg).label
                                                                          : std::get<PulseSegment>(seg).label;
      return label == "mixer[0]";
    }();
    int seg_duration = 0;
    if (const auto* c = std::get_if<Circuit>(&bound[i])) {
      Circuit phys = *c;
      if (cfg.gate_opt) {
        RoutedCircuit routed = sabre_map(decompose_to_native(*c), device, layout);
        phys = commutative_cancellation(routed.circuit);
        layout = routed.final_layout;
        ex.stats.swaps += routed.swaps_inserted;
      }
      apply_circuit(s, phys, noise);
      seg_duration = circuit_duration_dt(phys);
      apply_idle_decoherence(s, seg_duration, noise);
      ex.stats.gates += phys.size();
      ex.stats.two_qubit_gates += phys.two_qubit_count();
    } else {
      Schedule sched = std::get<Schedule>(bound[i]);
      for (auto& ins : sched.instructions) {
        ins.channel.q0 = layout.physical(ins.channel.q0);
        if (ins.channel.q1 >= 0) ins.channel.q1 = layout.physical(ins.channel.q1);
      }
      apply_pulse_schedule(s, sched, backend, noise);
      seg_duration = sched.makespan();
    }
    ex.stats.duration_dt += seg_duration;
    if (is_mixer) ex.stats.mixer_duration_dt = seg_duration;
  }

  const auto phys_probs = exact_probabilities(s);
  ex.probs.assign(phys_probs.size(), 0.0);
  for (std::size_t i = 0; i < phys_probs.size(); ++i) {
    std::size_t logical = 0;
    for (int q = 0; q < n; ++q)
      if (i >> layout.physical(q) & 1U) logical |= std::size_t{1} << q;
    ex.probs[logical] = phys_probs[i];
  }
  return ex;
}

namespace {

std::vector<double> with_readout(const std::vector<double>& probs, const EvalConfig& cfg,
                                 const BackendProfile& backend, int n) {
  if (!cfg.noise) return probs;
  return apply_confusion(probs, NoiseConfig::from_profile(backend, n).readout);
}

NoiseConfig sampling_noise(const EvalConfig& cfg, const BackendProfile& backend, int n) {
  return cfg.noise ? NoiseConfig::from_profile(backend, n) : NoiseConfig::ideal();
}

}  // namespace

Evaluation evaluate(const HybridAnsatz& a, const std::vector<double>& x, const EvalConfig& cfg,
                    const BackendProfile& backend) {
  const int n = a.graph().n_nodes();
  const Execution ex = execute(a, x, cfg, backend);
  Evaluation ev;
  if (cfg.exact) {
    ev.cost = -cvar_cost(a.graph(), with_readout(ex.probs, cfg, backend, n), cfg.cvar_alpha);
  } else {
    if (cfg.shots == 0) throw ParameterError("shots must be positive");
    ev.counts = sample_from_probabilities(ex.probs, n, cfg.shots, sampling_noise(cfg, backend, n), cfg.seed);
    ev.cost = -cvar_cost(a.graph(), ev.counts, cfg.cvar_alpha);
  }
  return ev;
}

double report_ar(const HybridAnsatz& a, const std::vector<double>& x, const EvalConfig& cfg,
                 const BackendProfile& backend) {
  const int n = a.graph().n_nodes();
  const double c_max = max_cut_bruteforce(a.graph()).value;
  const Execution ex = execute(a, x, cfg, backend);
  if (cfg.exact) {
    // A perfect confusion inverse recovers the pre-readout distribution.
    const auto probs = cfg.mitigate ? ex.probs : with_readout(ex.probs, cfg, backend, n);
    return approximation_ratio(expected_cut(a.graph(), probs), c_max);
  }
  const NoiseConfig noise = sampling_noise(cfg, backend, n);
  const Counts counts = sample_from_probabilities(ex.probs, n, cfg.shots, noise, cfg.seed);
  if (!cfg.mitigate) return approximation_ratio(expected_cut(a.graph(), counts), c_max);
  const ConfusionSet conf = calibrate_readout(noise, n, std::max<std::uint64_t>(cfg.shots, 256), cfg.seed + 1);
  return approximation_ratio(mitigated_expectation(a.graph(), m3_mitigate(counts, conf)), c_max);
}

double diagonality_defect(const BoundSegment& seg, const BackendProfile& backend) {
  const Eigen::MatrixXcd u = std::holds_alternative<Circuit>(seg) ? circuit_unitary(std::get<Circuit>(seg))
                                                                    : schedule_unitary(std::get<Schedule>(seg), backend);
  double worst = 0.0;
  for (Eigen::Index r = 0; r < u.rows(); ++r)
    for (Eigen::Index c = 0; c < u.cols(); ++c)
      if (r != c) worst = std::max(worst, std::abs(u(r, c)));
  return worst;
}

}  // namespace hybridpulse
