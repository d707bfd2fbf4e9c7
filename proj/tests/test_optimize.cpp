#include <gtest/gtest.h>

#include <numbers>

#include "hybridpulse/error.hpp"
#include "hybridpulse/experiment.hpp"
#include "testutil.hpp"

using namespace hybridpulse;
using std::numbers::pi;

namespace {

ExperimentConfig small_config(ModelKind model) {
  ExperimentConfig c;
  c.graph = gen_regular_graph(4, 3, 0);
  c.model = model;
  c.max_iter = 20;
  c.seed = 3;
  return c;
}

}  // namespace

TEST(NelderMead, ConvexSanity) {
  const CostFn f = [](const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += (v - 0.3) * (v - 0.3);
    return s;
  };
  const std::vector<Bound> b(4, Bound{-1.0, 1.0, false, 0.1});
  const OptResult r = minimize(f, std::vector<double>(4, 0.0), b, 200, 1);
  EXPECT_LT(r.best_cost, 1e-6);
  EXPECT_LE(r.n_evals, 200u);
}

TEST(NelderMead, StaysInBoundsAndRecordsExactValues) {
  std::vector<double> returned;
  const CostFn f = [&](const std::vector<double>& x) {
    const double v = std::pow(x[0] - 3.0, 2) + std::pow(x[1] + 7.0, 2) + std::sin(x[2]);
    returned.push_back(v);
    return v;
  };
  const std::vector<Bound> b = {{0.0, 1.0, false, 0.05}, {-2.0, 2.0, false, 0.05}, {0.0, 2 * pi, true, 0.2}};
  const OptResult r = minimize(f, {0.5, 0.0, 1.0}, b, 150, 4);
  ASSERT_EQ(r.history.size(), returned.size());
  ASSERT_EQ(r.n_evals, returned.size());
  double best = 1e300;
  for (std::size_t i = 0; i < r.history.size(); ++i) {
    EXPECT_EQ(r.history[i].cost, returned[i]);
    const auto& x = r.history[i].x;
    EXPECT_GE(x[0], 0.0);
    EXPECT_LE(x[0], 1.0);
    EXPECT_GE(x[1], -2.0);
    EXPECT_LE(x[1], 2.0);
    EXPECT_GE(x[2], 0.0);
    EXPECT_LT(x[2], 2 * pi);
    best = std::min(best, r.history[i].cost);
  }
  EXPECT_EQ(r.best_cost, best);
  EXPECT_NEAR(r.best_x[0], 1.0, 1e-3);
  EXPECT_NEAR(r.best_x[1], -2.0, 1e-3);
}

TEST(NelderMead, BudgetIncludesInitialSimplex) {
  const CostFn f = [](const std::vector<double>& x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2]; };
  const std::vector<Bound> b(3, Bound{-5.0, 5.0, false, 0.1});
  EXPECT_LE(minimize(f, {1.0, 1.0, 1.0}, b, 50, 0).n_evals, 50u);
  const std::vector<Bound> wide(30, Bound{-5.0, 5.0, false, 0.1});
  const CostFn g = [](const std::vector<double>& x) { return x[0]; };
  EXPECT_LE(minimize(g, std::vector<double>(30, 0.0), wide, 10, 0).n_evals, 10u + 30u + 1u);
}

TEST(NelderMead, RejectsOutOfBoundsStart) {
  const CostFn f = [](const std::vector<double>& x) { return x[0]; };
  EXPECT_THROW(minimize(f, {2.0}, {Bound{0.0, 1.0, false, 0.1}}, 10, 0), ParameterError);
  EXPECT_THROW(minimize(f, {0.0, 0.0}, {Bound{0.0, 1.0, false, 0.1}}, 10, 0), ParameterError);
}

TEST(NelderMead, DeterministicPerSeed) {
  const CostFn f = [](const std::vector<double>& x) { return std::cos(3 * x[0]) + x[1] * x[1]; };
  const std::vector<Bound> b(2, Bound{-3.0, 3.0, false, 0.3});
  const OptResult a = minimize(f, {0.1, 0.2}, b, 60, 8), c = minimize(f, {0.1, 0.2}, b, 60, 8);
  EXPECT_EQ(a.best_x, c.best_x);
  EXPECT_EQ(a.history.size(), c.history.size());
}

TEST(QaoaOptimum, TriangleWithinOnePercentOfGrid) {
  const Graph g = hptest::triangle();
  const HybridAnsatz a = build_gate_ansatz(g, 1);
  const BackendProfile ideal = find_profile("ideal");
  EvalConfig c;
  c.noise = false;
  c.exact = true;
  c.cvar_alpha = 1.0;
  double grid = -1e300;
  for (int i = 0; i < 100; ++i)
    for (int j = 0; j < 100; ++j) {
      const double gamma = pi * i / 100.0, beta = pi * j / 100.0;
      grid = std::max(grid, -evaluate(a, {gamma, beta}, c, ideal).cost);
    }
  const CostFn f = [&](const std::vector<double>& x) { return evaluate(a, x, c, ideal).cost; };
  const std::vector<Bound> b(2, Bound{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), true, 0.1});
  const OptResult r = minimize(f, a.initial_point(), b, 200, 0);
  EXPECT_GE(-r.best_cost, 0.99 * grid);
}

TEST(ExperimentConfig, DefaultsFollowProtocol) {
  ExperimentConfig c;
  EXPECT_EQ(c.shots, 1024u);
  EXPECT_EQ(c.resolved_max_iter(), 50);
  EXPECT_DOUBLE_EQ(c.cvar_alpha, 0.3);
  EXPECT_EQ(c.p, 1);
  EXPECT_TRUE(c.fixed_layout);
  EXPECT_EQ(c.mixer_duration, 320);
  c.model = ModelKind::PulseOnly;
  EXPECT_EQ(c.resolved_max_iter(), 200);
}

TEST(ExperimentConfig, ValidationAndJson) {
  ExperimentConfig c = small_config(ModelKind::Hybrid);
  EXPECT_NO_THROW(c.validate());
  const ExperimentConfig r = ExperimentConfig::from_json(c.to_json());
  EXPECT_EQ(r.to_json(), c.to_json());
  ExperimentConfig bad = c;
  bad.cvar_alpha = 0.0;
  EXPECT_THROW(bad.validate(), ParameterError);
  bad = c;
  bad.mixer_duration = 100;
  EXPECT_THROW(bad.validate(), ParameterError);
  bad = c;
  bad.fixed_layout = false;
  EXPECT_THROW(bad.validate(), ParameterError);
  auto j = c.to_json();
  j["schema"] = "hybridpulse.something_else";
  EXPECT_THROW(ExperimentConfig::from_json(j), InputError);
  const auto minimal = nlohmann::json::parse(R"({"graph": {"n": 2, "edges": [[0, 1]]}})");
  const ExperimentConfig m = ExperimentConfig::from_json(minimal);
  EXPECT_EQ(m.model, ModelKind::Hybrid);
  EXPECT_EQ(m.shots, 1024u);
}

TEST(ExperimentConfig, VariantLabels) {
  ExperimentConfig c;
  EXPECT_EQ(variant_label(c), "CVaR");
  c.cvar_alpha = 1.0;
  EXPECT_EQ(variant_label(c), "raw");
  c.gate_opt = true;
  EXPECT_EQ(variant_label(c), "GO");
  c.mitigate = true;
  EXPECT_EQ(variant_label(c), "M3");
}

TEST(RunExperiment, ReproducibleJson) {
  const ExperimentConfig c = small_config(ModelKind::Hybrid);
  const auto a = run_experiment(c).to_json(), b = run_experiment(c).to_json();
  EXPECT_EQ(a.dump(), b.dump());
  EXPECT_EQ(a.at("config").at("max_iter").get<int>(), 20);
  EXPECT_EQ(a.at("config").at("profile").at("name").get<std::string>(), "toronto");
}

TEST(RunExperiment, ResultInvariants) {
  ExperimentConfig c = small_config(ModelKind::Hybrid);
  c.mitigate = true;
  const ExperimentResult r = run_experiment(c);
  EXPECT_EQ(r.param_names.size(), 1u + 3u * 4u);
  EXPECT_LE(r.opt.n_evals, 20u + r.param_names.size() + 1u);
  EXPECT_EQ(r.opt.history.size(), r.opt.n_evals);
  double best = 1e300;
  for (const auto& h : r.opt.history) best = std::min(best, h.cost);
  EXPECT_EQ(r.opt.best_cost, best);
  EXPECT_GT(r.stage1_evals, 0u);
  EXPECT_EQ(r.final_counts.total(), 1024u);
  ASSERT_TRUE(r.ar_mitigated.has_value());
  EXPECT_GT(r.ar_raw, 0.0);
  EXPECT_LE(r.ar_exact, 1.0);
  EXPECT_EQ(r.stats.mixer_duration_dt, 320);

  const ExperimentResult back = ExperimentResult::from_json(r.to_json());
  EXPECT_EQ(back.opt.best_x, r.opt.best_x);
  EXPECT_EQ(back.ar_exact, r.ar_exact);
  EXPECT_EQ(back.variant, r.variant);
}

TEST(RunExperiment, GateAndHybridAgreeNoiseless) {
  ExperimentConfig c;
  c.graph = gen_regular_graph(6, 3, 7);
  c.noise = false;
  c.seed = 1;
  c.model = ModelKind::Gate;
  const double gate = run_experiment(c).ar_exact;
  c.model = ModelKind::Hybrid;
  const double hybrid = run_experiment(c).ar_exact;
  EXPECT_NEAR(hybrid, gate, 0.01);
}

TEST(RunExperiment, GateOptNeverAddsGatesAfterRouting) {
  ExperimentConfig c = small_config(ModelKind::Gate);
  c.graph = gen_regular_graph(6, 3, 7);
  c.gate_opt = true;
  const ExperimentResult r = run_experiment(c);
  // Routed circuit on the line: CX count equals 2 per RZZ plus 3 per SWAP at most.
  EXPECT_LE(r.stats.two_qubit_gates, 2 * c.graph.edges().size() + r.stats.swaps);
}

TEST(RunExperiment, CapacityAndModelErrors) {
  ExperimentConfig c = small_config(ModelKind::Hybrid);
  BackendProfile tiny = find_profile("toronto");
  tiny.n_qubits = 3;
  tiny.coupling = CouplingMap::line(3);
  c.profile = tiny;
  EXPECT_THROW(run_experiment(c), CapacityError);
}

TEST(RunExperiments, ParallelMatchesSequential) {
  std::vector<ExperimentConfig> cfgs;
  for (std::uint64_t s = 0; s < 3; ++s) {
    ExperimentConfig c = small_config(ModelKind::Gate);
    c.seed = s;
    cfgs.push_back(c);
  }
  const auto par = run_experiments(cfgs, 3);
  for (std::size_t i = 0; i < cfgs.size(); ++i)
    EXPECT_EQ(par[i].to_json().dump(), run_experiment(cfgs[i]).to_json().dump());
}

TEST(DerivedSeeds, DistinctStreams) {
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  EXPECT_EQ(derive_seed(5, 9), derive_seed(5, 9));
}

TEST(DurationSearch, AcceptAnythingReachesGridFloor) {
  ExperimentConfig c = small_config(ModelKind::Hybrid);
  c.max_iter = 10;
  const ExperimentResult base = run_experiment(c);
  const DurationSearchResult r = binary_search_duration(base, 1.0);
  EXPECT_EQ(r.min_duration, 32);
  EXPECT_TRUE(r.found);
  EXPECT_LE(r.tested.size(), 4u);
  EXPECT_EQ(r.min_duration % 32, 0);
  EXPECT_LE(r.min_duration, r.baseline_duration);
  const DurationSearchResult back = DurationSearchResult::from_json(r.to_json());
  EXPECT_EQ(back.min_duration, 32);
  EXPECT_EQ(back.tested.size(), r.tested.size());
}

TEST(DurationSearch, RejectsNonHybridBaseline) {
  const ExperimentResult base = run_experiment(small_config(ModelKind::Gate));
  EXPECT_THROW(binary_search_duration(base, 0.01), InputError);
}

TEST(DurationSearch, FeasibleWarmStartKeepsArNoiseless) {
  ExperimentConfig c = small_config(ModelKind::Hybrid);
  c.graph = gen_regular_graph(6, 3, 7);
  c.noise = false;
  c.max_iter = 50;
  const ExperimentResult base = run_experiment(c);
  const DurationSearchResult r = binary_search_duration(base, 1e-3);
  for (const auto& p : r.tested)
    if (p.feasible) EXPECT_TRUE(p.passed) << p.duration;
}
