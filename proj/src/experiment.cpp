#include "hybridpulse/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "hybridpulse/density.hpp"
#include "hybridpulse/error.hpp"
#include "hybridpulse/mitigation.hpp"
#include "hybridpulse/pulse.hpp"

namespace hybridpulse {

namespace {

constexpr const char* kConfigSchema = "hybridpulse.experiment_config";
constexpr const char* kResultSchema = "hybridpulse.experiment_result";
constexpr const char* kSearchSchema = "hybridpulse.duration_search";

// Seed streams; evaluation k of the optimizer uses stream k.
constexpr std::uint64_t kFinalStream = 0xf1a1'0000'0000'0001ULL;
constexpr std::uint64_t kCalibrationStream = 0xca1b'0000'0000'0002ULL;
constexpr std::uint64_t kStage2Stream = 0x57a6'0000'0000'0003ULL;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void check_schema(const nlohmann::json& j, const char* schema) {
  if (j.contains("schema") && j.at("schema").get<std::string>() != schema)
    throw InputError("expected a " + std::string(schema) + " document, got " + j.at("schema").get<std::string>());
  if (j.contains("version") && j.at("version").get<int>() != kSchemaVersion)
    throw InputError("unsupported " + std::string(schema) + " version " + std::to_string(j.at("version").get<int>()));
}

template <typename T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
  return j.contains(key) && !j.at(key).is_null() ? j.at(key).get<T>() : fallback;
}

nlohmann::json opt_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) { return splitmix64(base ^ splitmix64(stream)); }

int ExperimentConfig::resolved_max_iter() const {
  if (max_iter) return *max_iter;
  return model == ModelKind::PulseOnly ? kDefaultPulseMaxIter : kDefaultMaxIter;
}

void ExperimentConfig::validate() const {
  if (graph.n_nodes() < 2 || graph.edges().empty()) throw InputError("experiment needs a graph with at least one edge");
  if (p < 1) throw ParameterError("p must be >= 1");
  if (shots < 1) throw ParameterError("shots must be positive");
  if (max_iter && *max_iter < 1) throw ParameterError("max-iter must be positive");
  if (!(cvar_alpha > 0.0) || cvar_alpha > 1.0) throw ParameterError("cvar alpha must lie in (0, 1]");
  if (mixer_duration <= 0 || mixer_duration % kDurationGranularity != 0)
    throw ParameterError("mixer duration must be a positive multiple of 32 dt");
  if (!fixed_layout) throw ParameterError("only the fixed initial layout is supported");
}

BackendProfile ExperimentConfig::resolve_profile() const { return profile ? *profile : find_profile(backend); }

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j = {{"schema", kConfigSchema},
                      {"version", kSchemaVersion},
                      {"graph", graph.to_json()},
                      {"model", model_name(model)},
                      {"backend", backend},
                      {"p", p},
                      {"shots", shots},
                      {"cvar_alpha", cvar_alpha},
                      {"mitigate", mitigate},
                      {"gate_opt", gate_opt},
                      {"mixer_duration_dt", mixer_duration},
                      {"seed", seed},
                      {"share_mixer", share_mixer},
                      {"fixed_layout", fixed_layout},
                      {"noise", noise},
                      {"decoherence_only", decoherence_only},
                      {"exact_cost", exact_cost},
                      {"common_seed", common_seed},
                      {"x0", x0},
                      {"staged", staged}};
  j["profile"] = profile ? profile->to_json() : nlohmann::json(nullptr);
  j["max_iter"] = max_iter ? nlohmann::json(*max_iter) : nlohmann::json(nullptr);
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  try {
    check_schema(j, kConfigSchema);
    c.graph = Graph::from_json(j.at("graph"));
    c.model = parse_model(get_or<std::string>(j, "model", "hybrid"));
    c.backend = get_or<std::string>(j, "backend", c.backend);
    if (j.contains("profile") && !j.at("profile").is_null()) c.profile = BackendProfile::from_json(j.at("profile"));
    c.p = get_or(j, "p", c.p);
    c.shots = get_or(j, "shots", c.shots);
    if (j.contains("max_iter") && !j.at("max_iter").is_null()) c.max_iter = j.at("max_iter").get<int>();
    c.cvar_alpha = get_or(j, "cvar_alpha", c.cvar_alpha);
    c.mitigate = get_or(j, "mitigate", c.mitigate);
    c.gate_opt = get_or(j, "gate_opt", c.gate_opt);
    c.mixer_duration = get_or(j, "mixer_duration_dt", c.mixer_duration);
    c.seed = get_or(j, "seed", c.seed);
    c.share_mixer = get_or(j, "share_mixer", c.share_mixer);
    c.fixed_layout = get_or(j, "fixed_layout", c.fixed_layout);
    c.noise = get_or(j, "noise", c.noise);
    c.decoherence_only = get_or(j, "decoherence_only", c.decoherence_only);
    c.exact_cost = get_or(j, "exact_cost", c.exact_cost);
    c.common_seed = get_or(j, "common_seed", c.common_seed);
    c.x0 = get_or(j, "x0", c.x0);
    c.staged = get_or(j, "staged", c.staged);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("experiment config JSON: ") + e.what());
  }
  return c;
}

std::string variant_label(const ExperimentConfig& cfg) {
  if (cfg.cvar_alpha < 1.0) return "CVaR";
  if (cfg.mitigate) return "M3";
  if (cfg.gate_opt) return "GO";
  return "raw";
}

nlohmann::json ExperimentResult::to_json() const {
  nlohmann::json history = nlohmann::json::array();
  for (const auto& h : opt.history) history.push_back(h.cost);
  return {{"schema", kResultSchema},
          {"version", kSchemaVersion},
          {"config", config.to_json()},
          {"param_names", param_names},
          {"initial_x", initial_x},
          {"best_x", opt.best_x},
          {"best_cost", opt.best_cost},
          {"n_evals", opt.n_evals},
          {"stage1_evals", stage1_evals},
          {"stop_reason", opt.stop_reason},
          {"history", history},
          {"final_counts", final_counts.to_json()},
          {"c_max", c_max},
          {"ar", {{"raw", ar_raw}, {"mitigated", opt_json(ar_mitigated)}, {"exact", ar_exact}}},
          {"variant", variant},
          {"stats",
           {{"gates", stats.gates},
            {"two_qubit_gates", stats.two_qubit_gates},
            {"swaps", stats.swaps},
            {"duration_dt", stats.duration_dt},
            {"mixer_duration_dt", stats.mixer_duration_dt}}}};
}

ExperimentResult ExperimentResult::from_json(const nlohmann::json& j) {
  ExperimentResult r;
  try {
    if (!j.contains("schema")) throw InputError("experiment result JSON lacks a schema tag");
    check_schema(j, kResultSchema);
    r.config = ExperimentConfig::from_json(j.at("config"));
    r.param_names = j.at("param_names").get<std::vector<std::string>>();
    r.initial_x = j.at("initial_x").get<std::vector<double>>();
    r.opt.best_x = j.at("best_x").get<std::vector<double>>();
    r.opt.best_cost = j.at("best_cost").get<double>();
    r.opt.n_evals = j.at("n_evals").get<std::size_t>();
    r.stage1_evals = get_or<std::size_t>(j, "stage1_evals", 0);
    r.opt.stop_reason = j.at("stop_reason").get<std::string>();
    for (const auto& c : j.at("history")) r.opt.history.push_back({{}, c.get<double>()});
    r.final_counts = Counts::from_json(j.at("final_counts"));
    r.c_max = j.at("c_max").get<double>();
    const auto& ar = j.at("ar");
    r.ar_raw = ar.at("raw").get<double>();
    if (!ar.at("mitigated").is_null()) r.ar_mitigated = ar.at("mitigated").get<double>();
    r.ar_exact = ar.at("exact").get<double>();
    r.variant = j.at("variant").get<std::string>();
    const auto& s = j.at("stats");
    r.stats.gates = s.at("gates").get<std::size_t>();
    r.stats.two_qubit_gates = s.at("two_qubit_gates").get<std::size_t>();
    r.stats.swaps = s.at("swaps").get<std::size_t>();
    r.stats.duration_dt = s.at("duration_dt").get<int>();
    r.stats.mixer_duration_dt = s.at("mixer_duration_dt").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("experiment result JSON: ") + e.what());
  }
  return r;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg_in) {
  cfg_in.validate();
  ExperimentResult res;
  res.config = cfg_in;
  res.config.profile = cfg_in.resolve_profile();
  res.config.max_iter = cfg_in.resolved_max_iter();
  const ExperimentConfig& cfg = res.config;

  BackendProfile backend = *cfg.profile;
  if (cfg.decoherence_only) backend = backend.without_gate_errors();
  const int n = cfg.graph.n_nodes();
  if (n > backend.n_qubits) throw CapacityError("graph has more nodes than the backend has qubits");

  AnsatzOptions aopts;
  aopts.mixer_duration = cfg.mixer_duration;
  aopts.share_mixer = cfg.share_mixer;
  const HybridAnsatz ansatz = build_ansatz(cfg.model, cfg.graph, cfg.p, backend, aopts);
  for (const auto& s : ansatz.params()) res.param_names.push_back(s.name);
  res.initial_x = cfg.x0.empty() ? ansatz.initial_point() : cfg.x0;
  ansatz.check(res.initial_x);

  std::vector<Bound> bounds;
  for (const auto& s : ansatz.params()) bounds.push_back({s.lower, s.upper, s.periodic, s.step});

  EvalConfig ec;
  ec.shots = cfg.shots;
  ec.cvar_alpha = cfg.cvar_alpha;
  ec.noise = cfg.noise;
  ec.gate_opt = cfg.gate_opt;
  ec.exact = cfg.exact_cost;
  std::uint64_t k = 0;
  const CostFn f = [&](const std::vector<double>& x) {
    ec.seed = derive_seed(cfg.seed, cfg.common_seed ? 0 : k++);
    return evaluate(ansatz, x, ec, backend).cost;
  };
  const auto budget = static_cast<std::size_t>(*cfg.max_iter);
  if (cfg.staged && cfg.x0.empty() && cfg.model != ModelKind::Gate) {
    const auto p = static_cast<std::size_t>(cfg.p);
    std::vector<double> angles0;
    for (std::size_t l = 0; l < p; ++l) angles0.push_back(kDefaultGamma);
    for (std::size_t l = 0; l < p; ++l) angles0.push_back(kDefaultBeta);
    auto lift = [&](const std::vector<double>& a) {
      return gate_equivalent_point(cfg.model, cfg.graph, cfg.p, backend, aopts,
                                   std::vector<double>(a.begin(), a.begin() + cfg.p),
                                   std::vector<double>(a.begin() + cfg.p, a.end()));
    };
    const std::vector<Bound> angle_bounds(2 * p, Bound{-kInf, kInf, true, 0.1});
    const std::size_t stage1_budget = std::min(budget, std::max<std::size_t>(2 * p + 1, (budget + 1) / 2));
    const OptResult s1 = minimize([&](const std::vector<double>& a) { return f(lift(a)); }, angles0, angle_bounds,
                                  stage1_budget, cfg.seed);
    const std::vector<double> x1 = lift(s1.best_x);
    res.stage1_evals = s1.n_evals;
    res.opt.history.reserve(budget);
    for (const auto& h : s1.history) res.opt.history.push_back({lift(h.x), h.cost});
    res.opt.best_x = x1;
    res.opt.best_cost = s1.best_cost;
    res.opt.n_evals = s1.n_evals;
    res.opt.stop_reason = s1.stop_reason;
    if (s1.n_evals < budget) {
      const OptResult s2 = minimize(f, x1, bounds, budget - s1.n_evals, derive_seed(cfg.seed, kStage2Stream));
      res.opt.history.insert(res.opt.history.end(), s2.history.begin(), s2.history.end());
      res.opt.n_evals += s2.n_evals;
      res.opt.stop_reason = s2.stop_reason;
      if (s2.best_cost < res.opt.best_cost) {
        res.opt.best_cost = s2.best_cost;
        res.opt.best_x = s2.best_x;
      }
    }
  } else {
    res.opt = minimize(f, res.initial_x, bounds, budget, cfg.seed);
  }

  // Final report: one execution, shots for raw/M3, exact distribution for the low-variance AR.
  const Execution ex = execute(ansatz, res.opt.best_x, ec, backend);
  const NoiseConfig noise = cfg.noise ? NoiseConfig::from_profile(backend, n) : NoiseConfig::ideal();
  res.final_counts = sample_from_probabilities(ex.probs, n, cfg.shots, noise, derive_seed(cfg.seed, kFinalStream));
  res.c_max = max_cut_bruteforce(cfg.graph).value;
  res.ar_raw = approximation_ratio(expected_cut(cfg.graph, res.final_counts), res.c_max);
  if (cfg.mitigate) {
    const ConfusionSet conf = calibrate_readout(noise, n, std::max<std::uint64_t>(cfg.shots, 256),
                                                derive_seed(cfg.seed, kCalibrationStream));
    res.ar_mitigated =
        approximation_ratio(mitigated_expectation(cfg.graph, m3_mitigate(res.final_counts, conf)), res.c_max);
  }
  const auto read_probs = cfg.noise ? apply_confusion(ex.probs, noise.readout) : ex.probs;
  res.ar_exact = approximation_ratio(expected_cut(cfg.graph, read_probs), res.c_max);
  res.variant = variant_label(cfg);
  res.stats = ex.stats;
  return res;
}

std::vector<ExperimentResult> run_experiments(const std::vector<ExperimentConfig>& cfgs, unsigned workers) {
  std::vector<ExperimentResult> out(cfgs.size());
  std::vector<std::exception_ptr> errors(cfgs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < cfgs.size(); i = next++) {
      try {
        out[i] = run_experiment(cfgs[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(std::max<std::size_t>(cfgs.size(), 1)));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

double DurationSearchResult::reduction() const {
  return baseline_duration > 0 ? 1.0 - static_cast<double>(min_duration) / baseline_duration : 0.0;
}

nlohmann::json DurationSearchResult::to_json() const {
  nlohmann::json probes = nlohmann::json::array();
  for (const auto& p : tested)
    probes.push_back({{"duration_dt", p.duration}, {"feasible", p.feasible}, {"ar", opt_json(p.ar)}, {"passed", p.passed}});
  return {{"schema", kSearchSchema},
          {"version", kSchemaVersion},
          {"backend", backend},
          {"min_duration_dt", min_duration},
          {"baseline_duration_dt", baseline_duration},
          {"baseline_ar", baseline_ar},
          {"tol", tol},
          {"found", found},
          {"reduction", reduction()},
          {"tested", probes}};
}

DurationSearchResult DurationSearchResult::from_json(const nlohmann::json& j) {
  DurationSearchResult r;
  try {
    if (!j.contains("schema")) throw InputError("duration search JSON lacks a schema tag");
    check_schema(j, kSearchSchema);
    r.backend = j.at("backend").get<std::string>();
    r.min_duration = j.at("min_duration_dt").get<int>();
    r.baseline_duration = j.at("baseline_duration_dt").get<int>();
    r.baseline_ar = j.at("baseline_ar").get<double>();
    r.tol = j.at("tol").get<double>();
    r.found = j.at("found").get<bool>();
    for (const auto& p : j.at("tested")) {
      DurationProbe d;
      d.duration = p.at("duration_dt").get<int>();
      d.feasible = p.at("feasible").get<bool>();
      if (!p.at("ar").is_null()) d.ar = p.at("ar").get<double>();
      d.passed = p.at("passed").get<bool>();
      r.tested.push_back(d);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("duration search JSON: ") + e.what());
  }
  return r;
}

DurationSearchResult binary_search_duration(const ExperimentResult& baseline, double tol) {
  const ExperimentConfig& base = baseline.config;
  if (base.model != ModelKind::Hybrid) throw InputError("duration search needs a hybrid baseline");
  if (!(tol >= 0.0)) throw ParameterError("tolerance must be nonnegative");
  const int d0 = base.mixer_duration;
  if (d0 % kDurationGranularity != 0 || d0 <= 0) throw InputError("baseline mixer duration is not on the 32 dt grid");
  if (baseline.opt.best_x.size() != baseline.param_names.size()) throw InputError("baseline lacks its optimum");

  DurationSearchResult out;
  out.baseline_duration = d0;
  out.baseline_ar = baseline.ar_exact;
  out.tol = tol;

  BackendProfile backend = base.resolve_profile();
  out.backend = backend.name;
  const double area0 = unit_envelope_area(d0, d0 / 4.0);

  auto probe = [&](int d) {
    DurationProbe pr;
    pr.duration = d;
    std::vector<double> x = baseline.opt.best_x;
    const double scale = area0 / unit_envelope_area(d, d / 4.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (baseline.param_names[i].rfind("amp", 0) != 0) continue;
      x[i] *= scale;
      if (x[i] > 1.0 + 1e-12) pr.feasible = false;
      x[i] = std::min(x[i], 1.0);
    }
    if (pr.feasible) {
      ExperimentConfig cfg = base;
      cfg.mixer_duration = d;
      cfg.x0 = x;
      cfg.profile = backend;
      pr.ar = run_experiment(cfg).ar_exact;
      pr.passed = *pr.ar >= out.baseline_ar - tol;
    }
    out.tested.push_back(pr);
    return pr.passed;
  };

  // Grid index i stands for (i + 1) * 32 dt; the top index is the passing baseline.
  int lo = 0, hi = d0 / kDurationGranularity - 1;
  while (lo < hi) {
    const int mid = (lo + hi) / 2;
    if (probe((mid + 1) * kDurationGranularity))
      hi = mid;
    else
      lo = mid + 1;
  }
  out.min_duration = (lo + 1) * kDurationGranularity;
  out.found = out.min_duration < d0;
  return out;
}

}  // namespace hybridpulse
