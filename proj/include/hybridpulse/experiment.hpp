#pragma once

// End-to-end experiment protocol and the mixer-duration search.
//
// ExperimentConfig / ExperimentResult / DurationSearchResult serialize to
// versioned JSON documents tagged with a "schema" string; see README.md.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hybridpulse/ansatz.hpp"
#include "hybridpulse/backend.hpp"
#include "hybridpulse/optimizer.hpp"
#include "hybridpulse/problem.hpp"

namespace hybridpulse {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::uint64_t kDefaultShots = 1024;
inline constexpr int kDefaultMaxIter = 50;
inline constexpr int kDefaultPulseMaxIter = 200;
inline constexpr double kDefaultCvarAlpha = 0.3;
inline constexpr int kDefaultLayers = 1;
inline constexpr int kDefaultMixerDuration = 320;

struct ExperimentConfig {
  Graph graph;
  ModelKind model = ModelKind::Hybrid;
  std::string backend = "toronto";
  std::optional<BackendProfile> profile;  // overrides the lookup of `backend`
  int p = kDefaultLayers;
  std::uint64_t shots = kDefaultShots;
  std::optional<int> max_iter;  // unset: 50, or 200 for the pulse model
  double cvar_alpha = kDefaultCvarAlpha;
  bool mitigate = false;
  bool gate_opt = false;
  int mixer_duration = kDefaultMixerDuration;
  std::uint64_t seed = 0;
  bool share_mixer = false;
  bool fixed_layout = true;
  bool noise = true;
  bool decoherence_only = false;  // drop gate depolarization, keep T1/T2 and readout
  bool exact_cost = false;        // optimize on the exact distribution instead of shots
  bool common_seed = false;       // reuse one shot seed for every evaluation
  std::vector<double> x0;         // empty: gate-equivalent initialization
  bool staged = true;             // pulse models: search (gamma, beta) first, then every parameter

  int resolved_max_iter() const;
  /// Throws ParameterError / InputError.
  void validate() const;
  BackendProfile resolve_profile() const;

  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
};

struct ExperimentResult {
  ExperimentConfig config;  // resolved: max_iter and profile filled in
  std::vector<std::string> param_names;
  std::vector<double> initial_x;
  OptResult opt;
  std::size_t stage1_evals = 0;  // leading history entries spent in the (gamma, beta) stage
  Counts final_counts;
  double c_max = 0.0;
  double ar_raw = 0.0;                 // expected cut of the final shots
  std::optional<double> ar_mitigated;  // M3 on the final shots
  double ar_exact = 0.0;               // exact output distribution incl. readout error
  std::string variant;                 // raw | GO | M3 | CVaR
  ExecutionStats stats;

  nlohmann::json to_json() const;
  static ExperimentResult from_json(const nlohmann::json& j);
};

/// Table row this configuration belongs to: CVaR if alpha < 1, else M3, else GO, else raw.
std::string variant_label(const ExperimentConfig& cfg);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Independent experiments on up to `workers` threads; output order follows input.
std::vector<ExperimentResult> run_experiments(const std::vector<ExperimentConfig>& cfgs, unsigned workers);

struct DurationProbe {
  int duration = 0;
  bool feasible = true;  // warm start representable with amp <= 1
  std::optional<double> ar;
  bool passed = false;
};

struct DurationSearchResult {
  std::string backend;
  int min_duration = 0;
  int baseline_duration = 0;
  double baseline_ar = 0.0;
  double tol = 0.0;
  bool found = false;  // some probe below the baseline passed
  std::vector<DurationProbe> tested;

  double reduction() const;
  nlohmann::json to_json() const;
  static DurationSearchResult from_json(const nlohmann::json& j);
};

/// Binary search over {32, 64, ..., D0} for the shortest mixer whose
/// re-optimized exact AR stays within `tol` of the baseline's.
DurationSearchResult binary_search_duration(const ExperimentResult& baseline, double tol);

/// Deterministic per-evaluation seed stream.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace hybridpulse
