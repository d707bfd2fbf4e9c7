#pragma once

// QAOA Max-Cut ansatze at three abstraction levels. All of them start with a
// gate-level Hadamard layer; they differ in how the phase and mixer layers are
// realized:
//   gate       RZZ(2 gamma w) phase layer, RX(2 beta) mixer
//   hybrid     gate phase layer, per-qubit Gaussian drive pulses as mixer
//   pulse_only every RZZ becomes RY(pi/2) . CR . RY(-pi/2) pulses, pulse mixer

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "hybridpulse/backend.hpp"
#include "hybridpulse/circuit.hpp"
#include "hybridpulse/mitigation.hpp"
#include "hybridpulse/problem.hpp"
#include "hybridpulse/pulse.hpp"

namespace hybridpulse {

enum class ModelKind { Gate, Hybrid, PulseOnly };

std::string model_name(ModelKind k);
ModelKind parse_model(const std::string& s);  // gate | hybrid | pulse (pulse_only accepted)

enum class ParamKind { Angle, Amp, Phase, Freq };

struct ParamSpec {
  std::string name;
  ParamKind kind = ParamKind::Angle;
  double lower = 0.0;
  double upper = 0.0;
  bool periodic = false;
  double step = 0.1;  // initial simplex scale in optimizer coordinates
};

/// angle = offset + coeff * x[param]; param < 0 keeps offset.
struct AngleSlot {
  int param = -1;
  double coeff = 1.0;
  double offset = 0.0;
};

struct GateSegment {
  std::string label;
  Circuit circuit;              // template; angles overwritten by slots
  std::vector<AngleSlot> slots;  // one per gate
};

/// Per-instruction bindings; -1 keeps the template value.
struct PulseSlot {
  int amp = -1;
  int phase = -1;
  int freq = -1;
};

struct PulseSegment {
  std::string label;
  Schedule schedule;
  std::vector<PulseSlot> slots;  // one per instruction
};

using Segment = std::variant<GateSegment, PulseSegment>;
using BoundSegment = std::variant<Circuit, Schedule>;

struct AnsatzOptions {
  int mixer_duration = 320;   // dt
  bool share_mixer = false;   // one (amp, phase, freq) triple per mixer layer
  std::vector<double> gammas;  // initial point; defaults used when empty
  std::vector<double> betas;
  bool clip_amp = false;  // saturate unreachable rotations at amp = 1 instead of throwing
};

inline constexpr double kDefaultGamma = 0.5;
inline constexpr double kDefaultBeta = 0.3;

class HybridAnsatz {
 public:
  ModelKind kind() const { return kind_; }
  const Graph& graph() const { return graph_; }
  int layers() const { return layers_; }
  int mixer_duration() const { return mixer_duration_; }
  const std::vector<Segment>& segments() const { return segments_; }
  const std::vector<ParamSpec>& params() const { return params_; }
  std::size_t n_params() const { return params_.size(); }
  /// Gate-equivalent initial point.
  const std::vector<double>& initial_point() const { return x0_; }

  /// Throws ParameterError on length or bound violations.
  void check(const std::vector<double>& x) const;
  std::vector<BoundSegment> bind(const std::vector<double>& x) const;

  nlohmann::json describe() const;

 private:
  friend HybridAnsatz build_gate_ansatz(const Graph&, int, const AnsatzOptions&);
  friend HybridAnsatz build_hybrid_ansatz(const Graph&, int, const BackendProfile&, const AnsatzOptions&);
  friend HybridAnsatz build_pulse_only_ansatz(const Graph&, int, const BackendProfile&, const AnsatzOptions&);

  int add_param(ParamSpec spec, double init);

  ModelKind kind_ = ModelKind::Gate;
  Graph graph_;
  int layers_ = 1;
  int mixer_duration_ = 0;
  std::vector<Segment> segments_;
  std::vector<ParamSpec> params_;
  std::vector<double> x0_;
};

HybridAnsatz build_gate_ansatz(const Graph& g, int p, const AnsatzOptions& opts = {});
HybridAnsatz build_hybrid_ansatz(const Graph& g, int p, const BackendProfile& backend, const AnsatzOptions& opts = {});
HybridAnsatz build_pulse_only_ansatz(const Graph& g, int p, const BackendProfile& backend,
                                     const AnsatzOptions& opts = {});
HybridAnsatz build_ansatz(ModelKind kind, const Graph& g, int p, const BackendProfile& backend,
                          const AnsatzOptions& opts = {});

/// (amp, phase) of a zero-detuning drive realizing RX(theta) for any real theta.
std::pair<double, double> pulse_for_rx(double theta, int duration, const BackendProfile& backend, bool clip = false);

/// Parameter vector of `kind` that reproduces the gate ansatz at (gammas, betas).
std::vector<double> gate_equivalent_point(ModelKind kind, const Graph& g, int p, const BackendProfile& backend,
                                          AnsatzOptions opts, const std::vector<double>& gammas,
                                          const std::vector<double>& betas);

struct EvalConfig {
  std::uint64_t shots = 1024;
  double cvar_alpha = 0.3;
  bool mitigate = false;
  bool noise = true;
  bool gate_opt = false;  // native lowering, routing on a line sub-device, cancellation
  bool exact = false;     // use the exact output distribution instead of shots
  std::uint64_t seed = 0;
};

struct ExecutionStats {
  std::size_t gates = 0;
  std::size_t two_qubit_gates = 0;
  std::size_t swaps = 0;
  int duration_dt = 0;        // sum of segment makespans
  int mixer_duration_dt = 0;  // makespan of the first mixer layer
};

struct Execution {
  std::vector<double> probs;  // logical basis index order, before readout error
  ExecutionStats stats;
};

Execution execute(const HybridAnsatz& a, const std::vector<double>& x, const EvalConfig& cfg,
                  const BackendProfile& backend);

struct Evaluation {
  double cost = 0.0;  // -CVaR cut value
  Counts counts;      // empty in exact mode
};

Evaluation evaluate(const HybridAnsatz& a, const std::vector<double>& x, const EvalConfig& cfg,
                    const BackendProfile& backend);

/// Expected cut / C_max from shots (M3-mitigated when cfg.mitigate), or from the
/// exact distribution including readout error when cfg.exact.
double report_ar(const HybridAnsatz& a, const std::vector<double>& x, const EvalConfig& cfg,
                 const BackendProfile& backend);

/// Max |off-diagonal| of the unitary realized by a bound phase segment.
double diagonality_defect(const BoundSegment& seg, const BackendProfile& backend);

}  // namespace hybridpulse
