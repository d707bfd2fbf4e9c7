#include "hybridpulse/backend.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>

#include "hybridpulse/error.hpp"
#include "hybridpulse/pulse.hpp"

namespace hybridpulse {

namespace {

// 27-qubit heavy-hex (Falcon) and 16-qubit (Falcon r4P) couplings.
const std::vector<std::pair<int, int>> kFalcon27 = {
    {0, 1},   {1, 2},   {1, 4},   {2, 3},   {3, 5},   {4, 7},   {5, 8},   {6, 7},   {7, 10},  {8, 9},
    {8, 11},  {10, 12}, {11, 14}, {12, 13}, {12, 15}, {13, 14}, {14, 16}, {15, 18}, {16, 19}, {17, 18},
    {18, 21}, {19, 20}, {19, 22}, {21, 23}, {22, 25}, {23, 24}, {24, 25}, {25, 26}};

const std::vector<std::pair<int, int>> kFalcon16 = {{0, 1},  {1, 2},   {1, 4},   {2, 3},   {3, 5},   {4, 7},
                                                    {5, 8},  {6, 7},   {7, 10},  {8, 9},   {8, 11},  {10, 12},
                                                    {11, 14}, {12, 13}, {12, 15}, {13, 14}};

// Calibration snapshot of the four machines. The source table labels T1/T2 as
// "ms" but the magnitudes (~100) are transmon microseconds; stored as us here.
BackendProfile preset(std::string name, int n, double px, double cx, double ro, double t1, double t2, double ro_len) {
  BackendProfile p;
  p.name = std::move(name);
  p.n_qubits = n;
  p.coupling = CouplingMap(n, n == 16 ? kFalcon16 : kFalcon27);
  p.dt_ns = kDefaultDtNs;
  p.pauli_x_error = px;
  p.cnot_error = cx;
  p.readout_error = ro;
  p.t1_us = t1;
  p.t2_us = t2;
  p.readout_length_ns = ro_len;
  p.omega_max = default_omega_max();
  return p;
}

nlohmann::json time_to_json(double t) { return std::isinf(t) ? nlohmann::json(nullptr) : nlohmann::json(t); }

double time_from_json(const nlohmann::json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

}  // namespace

BackendProfile BackendProfile::without_gate_errors() const {
  BackendProfile p = *this;
  p.name = name + "-decoherence-only";
  p.pauli_x_error = 0.0;
  p.cnot_error = 0.0;
  return p;
}

nlohmann::json BackendProfile::to_json() const {
  nlohmann::json coupling_j = nlohmann::json::array();
  for (auto [a, b] : coupling.edges()) coupling_j.push_back({a, b});
  nlohmann::json j = {{"name", name},
                      {"n_qubits", n_qubits},
                      {"coupling", coupling_j},
                      {"dt_ns", dt_ns},
                      {"pauli_x_error", pauli_x_error},
                      {"cnot_error", cnot_error},
                      {"readout_error", readout_error},
                      {"t1_us", time_to_json(t1_us)},
                      {"t2_us", time_to_json(t2_us)},
                      {"readout_length_ns", readout_length_ns},
                      {"omega_max", omega_max}};
  if (readout_p01 >= 0) j["readout_p01"] = readout_p01;
  if (readout_p10 >= 0) j["readout_p10"] = readout_p10;
  return j;
}

BackendProfile BackendProfile::from_json(const nlohmann::json& j) {
  BackendProfile p;
  try {
    p.name = j.at("name").get<std::string>();
    p.n_qubits = j.at("n_qubits").get<int>();
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j.at("coupling")) edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    if (p.n_qubits <= 0) throw InputError("profile n_qubits must be positive");
    p.coupling = CouplingMap(p.n_qubits, std::move(edges));
    p.dt_ns = j.value("dt_ns", kDefaultDtNs);
    p.pauli_x_error = j.at("pauli_x_error").get<double>();
    p.cnot_error = j.at("cnot_error").get<double>();
    p.readout_error = j.at("readout_error").get<double>();
    p.readout_p01 = j.value("readout_p01", -1.0);
    p.readout_p10 = j.value("readout_p10", -1.0);
    p.t1_us = time_from_json(j.at("t1_us"));
    p.t2_us = time_from_json(j.at("t2_us"));
    p.readout_length_ns = j.value("readout_length_ns", 0.0);
    p.omega_max = j.contains("omega_max") ? j.at("omega_max").get<double>() : default_omega_max();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("profile JSON: ") + e.what());
  }
  const auto problems = validate_profile(p);
  if (!problems.empty()) {
    std::string msg = "invalid profile '" + p.name + "':";
    for (const auto& s : problems) msg += " " + s + ";";
    throw InputError(msg);
  }
  return p;
}

bool operator==(const BackendProfile& a, const BackendProfile& b) {
  return a.to_json() == b.to_json();
}

std::vector<std::string> validate_profile(const BackendProfile& p) {
  std::vector<std::string> out;
  auto rate = [&](const char* field, double v) {
    if (!(v >= 0.0 && v <= 1.0)) out.push_back(std::string(field) + " must lie in [0, 1]");
  };
  rate("pauli_x_error", p.pauli_x_error);
  rate("cnot_error", p.cnot_error);
  rate("readout_error", p.readout_error);
  if (p.readout_p01 >= 0) rate("readout_p01", p.readout_p01);
  if (p.readout_p10 >= 0) rate("readout_p10", p.readout_p10);
  if (!(p.dt_ns > 0.0)) out.push_back("dt_ns must be positive");
  if (!(p.t1_us > 0.0)) out.push_back("t1 must be positive");
  if (!(p.t2_us > 0.0)) out.push_back("t2 must be positive");
  if (!(p.t2_us <= 2.0 * p.t1_us)) out.push_back("t2 exceeds 2*t1");
  if (!(p.omega_max > 0.0)) out.push_back("omega_max must be positive");
  if (p.n_qubits != p.coupling.n_physical()) out.push_back("coupling size differs from n_qubits");
  return out;
}

BackendProfile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open profile " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("profile " + path + ": " + e.what());
  }
  return BackendProfile::from_json(j);
}

void save_profile(const BackendProfile& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write profile " + path);
  out << p.to_json().dump(2) << '\n';
}

std::vector<BackendProfile> builtin_profiles() {
  std::vector<BackendProfile> v;
  v.push_back(preset("auckland", 27, 2.229e-4, 1.164e-2, 0.011, 166.220, 145.620, 757.333));
  v.push_back(preset("toronto", 27, 2.774e-4, 9.677e-3, 0.031, 104.200, 120.760, 5962.667));
  v.push_back(preset("montreal", 27, 2.780e-4, 1.049e-2, 0.015, 123.99, 95.01, 5201.778));
  v.push_back(preset("guadalupe", 16, 3.023e-4, 1.108e-2, 0.025, 102.320, 102.530, 7111.111));

  BackendProfile ideal = preset("ideal", 27, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0);
  ideal.t1_us = std::numeric_limits<double>::infinity();
  ideal.t2_us = std::numeric_limits<double>::infinity();
  v.push_back(ideal);
  return v;
}

BackendProfile find_profile(const std::string& name_or_path) {
  namespace fs = std::filesystem;
  if (name_or_path.size() > 5 && name_or_path.ends_with(".json")) return load_profile(name_or_path);
  if (const char* dir = std::getenv("HYBRIDPULSE_PROFILE_DIR")) {
    const fs::path candidate = fs::path(dir) / (name_or_path + ".json");
    if (fs::exists(candidate)) return load_profile(candidate.string());
  }
  for (auto& p : builtin_profiles())
    if (p.name == name_or_path) return p;
  throw InputError("unknown backend profile '" + name_or_path + "'");
}

SubDevice line_subdevice(const BackendProfile& p, int n) {
  if (n <= 0 || n > p.n_qubits) throw CapacityError("backend has fewer qubits than requested");
  std::vector<int> path;
  std::vector<char> used(static_cast<std::size_t>(p.n_qubits), 0);
  std::function<bool(int)> extend = [&](int q) {
    path.push_back(q);
    used[q] = 1;
    if (static_cast<int>(path.size()) == n) return true;
    for (int nb : p.coupling.neighbors(q))
      if (!used[nb] && extend(nb)) return true;
    path.pop_back();
    used[q] = 0;
    return false;
  };
  bool found = false;
  for (int start = 0; start < p.n_qubits && !found; ++start) found = extend(start);
  if (!found) throw CapacityError("no connected path of " + std::to_string(n) + " qubits in " + p.name);

  std::vector<std::pair<int, int>> induced;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (p.coupling.coupled(path[i], path[j])) induced.emplace_back(i, j);
  return {path, CouplingMap(n, std::move(induced))};
}

}  // namespace hybridpulse
