// hybridpulse command-line driver.
//
// Exit codes: 0 ok, 2 configuration/input error, 3 capacity error, 4 numerical failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "hybridpulse/ansatz.hpp"
#include "hybridpulse/backend.hpp"
#include "hybridpulse/error.hpp"
#include "hybridpulse/experiment.hpp"
#include "hybridpulse/problem.hpp"
#include "hybridpulse/report.hpp"

namespace hp = hybridpulse;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitNumerical = 4;

int exit_code(hp::ErrorKind k) {
  switch (k) {
    case hp::ErrorKind::Capacity: return kExitCapacity;
    case hp::ErrorKind::Numerical: return kExitNumerical;
    default: return kExitConfig;
  }
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw hp::InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw hp::InputError(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw hp::InputError("cannot write " + path);
  out << text;
}

/// "3", "1..5" or "1,4,9".
std::vector<std::uint64_t> parse_seeds(const std::string& s) {
  std::vector<std::uint64_t> out;
  try {
    const auto dots = s.find("..");
    if (dots != std::string::npos) {
      const auto a = std::stoull(s.substr(0, dots)), b = std::stoull(s.substr(dots + 2));
      if (b < a) throw hp::ParameterError("empty seed range " + s);
      for (auto v = a; v <= b; ++v) out.push_back(v);
    } else {
      std::stringstream ss(s);
      std::string tok;
      while (std::getline(ss, tok, ',')) out.push_back(std::stoull(tok));
    }
  } catch (const std::logic_error&) {
    throw hp::ParameterError("cannot parse seeds '" + s + "'");
  }
  if (out.empty()) throw hp::ParameterError("no seeds given");
  return out;
}

const char* kRunCsvHeader = "# hybridpulse run v1\nmodel,backend,seed,variant,ar_raw,ar_m3,ar_exact,best_cost,n_evals,mixer_duration_dt\n";

std::string run_csv_row(const hp::ExperimentResult& r) {
  std::ostringstream os;
  os.precision(10);
  os << hp::model_name(r.config.model) << ',' << r.config.profile->name << ',' << r.config.seed << ',' << r.variant
     << ',' << r.ar_raw << ',';
  if (r.ar_mitigated) os << *r.ar_mitigated;
  os << ',' << r.ar_exact << ',' << r.opt.best_cost << ',' << r.opt.n_evals << ',' << r.stats.mixer_duration_dt
     << '\n';
  return os.str();
}

std::string dump_circuit(const hp::ExperimentResult& r) {
  hp::BackendProfile backend = *r.config.profile;
  hp::AnsatzOptions opts;
  opts.mixer_duration = r.config.mixer_duration;
  opts.share_mixer = r.config.share_mixer;
  const auto ansatz = hp::build_ansatz(r.config.model, r.config.graph, r.config.p, backend, opts);
  const auto bound = ansatz.bind(r.opt.best_x);
  std::string text;
  for (std::size_t i = 0; i < bound.size(); ++i) {
    const auto& seg = ansatz.segments()[i];
    const std::string label = std::holds_alternative<hp::GateSegment>(seg) ? std::get<hp::GateSegment>(seg).label
                                                                           : std::get<hp::PulseSegment>(seg).label;
    if (const auto* c = std::get_if<hp::Circuit>(&bound[i])) {
      text += "# gate segment " + label + "\n" + c->to_text();
    } else {
      const auto& s = std::get<hp::Schedule>(bound[i]);
      text += "# pulse segment " + label + "\n";
      for (const auto& ins : s.instructions) {
        json j = ins.params.to_json();
        j["start_dt"] = ins.start_time;
        j["channel"] = ins.channel.kind == hp::Channel::Kind::Drive
                           ? "d" + std::to_string(ins.channel.q0)
                           : "u" + std::to_string(ins.channel.q0) + "-" + std::to_string(ins.channel.q1);
        text += "#   " + j.dump() + "\n";
      }
    }
  }
  return text;
}

struct RunArgs {
  std::string model = "hybrid";
  std::string graph;
  std::string backend = "toronto";
  int p = hp::kDefaultLayers;
  std::uint64_t shots = hp::kDefaultShots;
  int max_iter = 0;
  double cvar = hp::kDefaultCvarAlpha;
  bool mitigate = false;
  bool gate_opt = false;
  int mixer_duration = hp::kDefaultMixerDuration;
  std::uint64_t seed = 0;
  std::string seeds;
  std::string out;
  std::string dump_circuit;
  bool share_mixer = false;
  bool decoherence_only = false;
  bool noiseless = false;
  bool exact_cost = false;
  bool common_seed = false;
  unsigned workers = 0;
};

hp::ExperimentConfig make_config(const RunArgs& a) {
  hp::ExperimentConfig c;
  c.graph = hp::Graph::from_json(read_json(a.graph));
  c.model = hp::parse_model(a.model);
  c.backend = a.backend;
  c.p = a.p;
  c.shots = a.shots;
  if (a.max_iter > 0) c.max_iter = a.max_iter;
  c.cvar_alpha = a.cvar;
  c.mitigate = a.mitigate;
  c.gate_opt = a.gate_opt;
  c.mixer_duration = a.mixer_duration;
  c.seed = a.seed;
  c.share_mixer = a.share_mixer;
  c.decoherence_only = a.decoherence_only;
  c.noise = !a.noiseless;
  c.exact_cost = a.exact_cost;
  c.common_seed = a.common_seed;
  c.profile = c.resolve_profile();
  return c;
}

int cmd_run(const RunArgs& a) {
  const hp::ExperimentConfig base = make_config(a);
  if (a.seeds.empty()) {
    const auto r = hp::run_experiment(base);
    if (!a.out.empty()) {
      write_text(a.out, r.to_json().dump(2) + "\n");
      std::cout << kRunCsvHeader << run_csv_row(r);
    } else {
      std::cout << r.to_json().dump(2) << "\n";
    }
    if (!a.dump_circuit.empty()) write_text(a.dump_circuit, dump_circuit(r));
    return kExitOk;
  }

  std::vector<hp::ExperimentConfig> cfgs;
  for (auto s : parse_seeds(a.seeds)) {
    cfgs.push_back(base);
    cfgs.back().seed = s;
  }
  const unsigned workers = a.workers ? a.workers : std::max(1u, std::thread::hardware_concurrency());
  const auto results = hp::run_experiments(cfgs, workers);
  json arr = json::array();
  std::string csv = kRunCsvHeader;
  for (const auto& r : results) {
    arr.push_back(r.to_json());
    csv += run_csv_row(r);
  }
  if (!a.out.empty()) {
    write_text(a.out, arr.dump(2) + "\n");
    std::cout << csv;
  } else {
    std::cout << arr.dump(2) << "\n";
  }
  if (!a.dump_circuit.empty()) write_text(a.dump_circuit, dump_circuit(results.front()));
  return kExitOk;
}

void collect_documents(const json& j, std::vector<hp::ExperimentResult>& runs,
                       std::vector<hp::DurationSearchResult>& searches) {
  if (j.is_array()) {
    for (const auto& e : j) collect_documents(e, runs, searches);
    return;
  }
  if (!j.is_object() || !j.contains("schema")) throw hp::InputError("input is not a hybridpulse result document");
  const auto schema = j.at("schema").get<std::string>();
  if (schema == "hybridpulse.duration_search")
    searches.push_back(hp::DurationSearchResult::from_json(j));
  else
    runs.push_back(hp::ExperimentResult::from_json(j));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid gate-pulse QAOA toolkit"};
  app.require_subcommand(1);

  // graph gen
  auto* graph = app.add_subcommand("graph", "Max-Cut instance utilities");
  graph->require_subcommand(1);
  auto* gen = graph->add_subcommand("gen", "Generate a graph JSON");
  std::string kind = "regular", graph_out;
  int gn = 6, gd = 3;
  double p_edge = 0.5;
  std::uint64_t gseed = 0;
  gen->add_option("--kind", kind, "regular or random")->check(CLI::IsMember({"regular", "random"}));
  gen->add_option("--n", gn, "number of nodes");
  gen->add_option("--d", gd, "degree (regular)");
  gen->add_option("--p-edge", p_edge, "edge probability (random)");
  gen->add_option("--seed", gseed, "generator seed");
  gen->add_option("--out", graph_out, "output path (stdout when omitted)");

  // run
  RunArgs ra;
  auto* run = app.add_subcommand("run", "Optimize one ansatz and report approximation ratios");
  run->add_option("--model", ra.model, "gate, hybrid or pulse")->check(CLI::IsMember({"gate", "hybrid", "pulse"}));
  run->add_option("--graph", ra.graph, "graph JSON")->required();
  run->add_option("--backend", ra.backend, "profile name or path to a profile JSON");
  run->add_option("--p", ra.p, "QAOA layers");
  run->add_option("--shots", ra.shots, "shots per evaluation");
  run->add_option("--max-iter", ra.max_iter, "cost evaluations (default 50, 200 for pulse)");
  run->add_option("--cvar", ra.cvar, "CVaR alpha in (0, 1]");
  run->add_flag("--mitigate", ra.mitigate, "M3 readout mitigation of the final distribution");
  run->add_flag("--gate-opt", ra.gate_opt, "native lowering, routing and cancellation");
  run->add_option("--mixer-duration", ra.mixer_duration, "pulse mixer duration in dt");
  run->add_option("--seed", ra.seed, "experiment seed");
  run->add_option("--seeds", ra.seeds, "seed fan-out, e.g. 1..5");
  run->add_option("--workers", ra.workers, "threads for --seeds (default: all cores)");
  run->add_option("--out", ra.out, "result JSON path");
  run->add_option("--dump-circuit", ra.dump_circuit, "write the optimized segments as circuit text");
  run->add_flag("--share-mixer-params", ra.share_mixer, "one pulse parameter triple per mixer layer");
  run->add_flag("--decoherence-only", ra.decoherence_only, "zero gate errors, keep T1/T2 and readout");
  run->add_flag("--noiseless", ra.noiseless, "disable every noise source");
  run->add_flag("--exact-cost", ra.exact_cost, "optimize on the exact output distribution");
  run->add_flag("--common-seed", ra.common_seed, "same shot seed for every cost evaluation");

  // duration-search
  auto* ds = app.add_subcommand("duration-search", "Shortest mixer duration that keeps the baseline AR");
  std::string baseline_path, ds_out;
  double tol = 0.01;
  ds->add_option("--baseline", baseline_path, "hybrid result JSON")->required();
  ds->add_option("--tol", tol, "allowed AR loss");
  ds->add_option("--out", ds_out, "output path (stdout when omitted)");

  // report
  auto* rep = app.add_subcommand("report", "Aggregate result JSONs into a comparison table");
  std::vector<std::string> inputs;
  std::string format = "csv", rep_out, conv_dir;
  rep->add_option("inputs", inputs, "result / duration-search JSON files");
  rep->add_option("--format", format, "csv or markdown")->check(CLI::IsMember({"csv", "markdown"}));
  rep->add_option("--out", rep_out, "output path (stdout when omitted)");
  rep->add_option("--convergence-dir", conv_dir, "write one convergence CSV per run here");

  // describe
  auto* desc = app.add_subcommand("describe", "Print an ansatz summary");
  RunArgs da;
  desc->add_option("--model", da.model, "gate, hybrid or pulse")->check(CLI::IsMember({"gate", "hybrid", "pulse"}));
  desc->add_option("--graph", da.graph, "graph JSON")->required();
  desc->add_option("--backend", da.backend, "profile name or path");
  desc->add_option("--p", da.p, "QAOA layers");
  desc->add_option("--mixer-duration", da.mixer_duration, "pulse mixer duration in dt");
  desc->add_flag("--share-mixer-params", da.share_mixer, "one pulse parameter triple per mixer layer");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (gen->parsed()) {
      const hp::Graph g = kind == "regular" ? hp::gen_regular_graph(gn, gd, gseed) : hp::gen_random_graph(gn, p_edge, gseed);
      write_text(graph_out, g.to_json().dump() + "\n");
    } else if (run->parsed()) {
      return cmd_run(ra);
    } else if (ds->parsed()) {
      const auto baseline = hp::ExperimentResult::from_json(read_json(baseline_path));
      write_text(ds_out, hp::binary_search_duration(baseline, tol).to_json().dump(2) + "\n");
    } else if (rep->parsed()) {
      std::vector<hp::ExperimentResult> runs;
      std::vector<hp::DurationSearchResult> searches;
      for (const auto& path : inputs) collect_documents(read_json(path), runs, searches);
      const auto table = hp::build_report(runs, searches);
      write_text(rep_out, format == "csv" ? table.to_csv() : table.to_markdown());
      if (!conv_dir.empty()) {
        std::filesystem::create_directories(conv_dir);
        for (std::size_t i = 0; i < runs.size(); ++i) {
          const auto& r = runs[i];
          const std::string name = std::to_string(i) + "_" + hp::model_name(r.config.model) + "_" +
                                   (r.config.profile ? r.config.profile->name : r.config.backend) + "_s" +
                                   std::to_string(r.config.seed) + ".csv";
          write_text((std::filesystem::path(conv_dir) / name).string(), hp::convergence_csv(r));
        }
      }
    } else if (desc->parsed()) {
      const hp::Graph g = hp::Graph::from_json(read_json(da.graph));
      hp::AnsatzOptions opts;
      opts.mixer_duration = da.mixer_duration;
      opts.share_mixer = da.share_mixer;
      const auto ansatz = hp::build_ansatz(hp::parse_model(da.model), g, da.p, hp::find_profile(da.backend), opts);
      std::cout << ansatz.describe().dump(2) << "\n";
    }
  } catch (const hp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
