#include "hybridpulse/pulse.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "hybridpulse/error.hpp"

namespace hybridpulse {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int resolve_steps(const PulseParams& p, int n_steps) {
  if (n_steps == 0) return p.duration;
  if (n_steps < p.duration) throw ParameterError("propagator needs at least one step per dt");
  return n_steps;
}

// Envelope without the boundary check, for integration at midpoints.
double envelope_unchecked(double t, double amp, int duration, double sigma) {
  const double center = duration / 2.0;
  auto g = [&](double x) { return std::exp(-(x - center) * (x - center) / (2.0 * sigma * sigma)); };
  const double edge = g(-1.0);
  return amp * (g(t) - edge) / (1.0 - edge);
}

}  // namespace

PulseParams PulseParams::gaussian(double amp, double phase, double freq_mhz, int duration) {
  return {amp, phase, freq_mhz, duration, duration / 4.0};
}

nlohmann::json PulseParams::to_json() const {
  return {{"amp", amp}, {"phase", phase}, {"freq_mhz", freq_mhz}, {"duration_dt", duration}, {"sigma_dt", sigma}};
}

PulseParams PulseParams::from_json(const nlohmann::json& j) {
  try {
    PulseParams p;
    p.amp = j.at("amp").get<double>();
    p.phase = j.at("phase").get<double>();
    p.freq_mhz = j.at("freq_mhz").get<double>();
    p.duration = j.at("duration_dt").get<int>();
    p.sigma = j.contains("sigma_dt") ? j.at("sigma_dt").get<double>() : p.duration / 4.0;
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("pulse JSON: ") + e.what());
  }
}

std::vector<Violation> validate_pulse_params(const PulseParams& p) {
  std::vector<Violation> out;
  if (!(std::abs(p.amp) <= 1.0)) out.push_back({"amp", p.amp, "amp > 1"});
  if (p.amp < 0.0) out.push_back({"amp", p.amp, "amp < 0 (direction lives in phase)"});
  if (!(p.phase >= 0.0 && p.phase < kTwoPi)) out.push_back({"phase", p.phase, "phase outside [0, 2pi)"});
  if (!(std::abs(p.freq_mhz) <= kMaxFreqShiftMhz))
    out.push_back({"freq_mhz", p.freq_mhz, "frequency shift outside [-100, 100] MHz"});
  if (p.duration <= 0) out.push_back({"duration", static_cast<double>(p.duration), "duration must be positive"});
  if (p.duration % kDurationGranularity != 0)
    out.push_back({"duration", static_cast<double>(p.duration), "not multiple of 32dt"});
  if (!(p.sigma > 0.0)) out.push_back({"sigma", p.sigma, "sigma must be positive"});
  return out;
}

void require_valid(const PulseParams& p) {
  const auto v = validate_pulse_params(p);
  if (v.empty()) return;
  std::ostringstream msg;
  msg << "invalid pulse:";
  for (const auto& x : v) msg << ' ' << x.message << " (" << x.field << '=' << x.value << ");";
  throw ParameterError(msg.str());
}

double gaussian_envelope(double t, const PulseParams& p) {
  if (t < 0.0 || t > p.duration) throw ParameterError("envelope time outside [0, duration]");
  return envelope_unchecked(t, p.amp, p.duration, p.sigma);
}

double unit_envelope_area(int duration, double sigma, int n_steps) {
  if (n_steps == 0) n_steps = duration;
  const double step = static_cast<double>(duration) / n_steps;
  double area = 0.0;
  constexpr double kOffset = 0.28867513459481287;  // Gauss-Legendre nodes, as in the propagators
  for (int k = 0; k < n_steps; ++k)
    area += 0.5 * step *
            (envelope_unchecked((k + 0.5 - kOffset) * step, 1.0, duration, sigma) +
             envelope_unchecked((k + 0.5 + kOffset) * step, 1.0, duration, sigma));
  return area;
}

double default_omega_max() { return kTwoPi / unit_envelope_area(160, 40.0); }

double freq_cycles_per_dt(double freq_mhz, double dt_ns) { return freq_mhz * 1e6 * dt_ns * 1e-9; }

namespace {

using Vec3 = std::array<double, 3>;

// Pauli coefficients (X, Y, Z) of H at the two Gauss-Legendre nodes of step k.
std::pair<Vec3, Vec3> gauss_coeffs(const PulseParams& p, const BackendProfile& backend, int k, double step,
                                   double cphi, double sphi, double detune) {
  constexpr double kOffset = 0.28867513459481287;  // sqrt(3) / 6
  auto at = [&](double frac) {
    const double half_rabi = 0.5 * backend.omega_max * envelope_unchecked((k + frac) * step, p.amp, p.duration, p.sigma);
    return Vec3{half_rabi * cphi, half_rabi * sphi, detune};
  };
  return {at(0.5 - kOffset), at(0.5 + kOffset)};
}

// Fourth-order Magnus exponent of one step: exp(-i v.sigma).
Vec3 magnus4(const Vec3& c1, const Vec3& c2, double h) {
  constexpr double kComm = 0.28867513459481287;  // sqrt(3) / 6
  const Vec3 cross = {c2[1] * c1[2] - c2[2] * c1[1], c2[2] * c1[0] - c2[0] * c1[2], c2[0] * c1[1] - c2[1] * c1[0]};
  Vec3 v;
  for (int i = 0; i < 3; ++i) v[i] = 0.5 * h * (c1[i] + c2[i]) + kComm * h * h * cross[i];
  return v;
}

}  // namespace

Mat2 pulse_propagator(const PulseParams& p, const BackendProfile& backend, int n_steps) {
  require_valid(p);
  const int steps = resolve_steps(p, n_steps);
  const double step = static_cast<double>(p.duration) / steps;
  const double detune = std::numbers::pi * freq_cycles_per_dt(p.freq_mhz, backend.dt_ns);
  const double cphi = std::cos(p.phase), sphi = std::sin(p.phase);

  Mat2 u = Mat2::identity();
  for (int k = 0; k < steps; ++k) {
    const auto [c1, c2] = gauss_coeffs(p, backend, k, step, cphi, sphi, detune);
    const auto v = magnus4(c1, c2, step);
    u = expm_pauli(0.0, v[0], v[1], v[2]) * u;
  }
  return u;
}

Mat4 cr_propagator(const PulseParams& p, const BackendProfile& backend, int n_steps) {
  require_valid(p);
  const int steps = resolve_steps(p, n_steps);
  const double step = static_cast<double>(p.duration) / steps;
  const double detune = std::numbers::pi * freq_cycles_per_dt(p.freq_mhz, backend.dt_ns);
  const double cphi = std::cos(p.phase), sphi = std::sin(p.phase);

  // H = Z (x) (a X + b Y + c I): block diagonal in the control qubit.
  Mat2 block0 = Mat2::identity();
  Mat2 block1 = Mat2::identity();
  for (int k = 0; k < steps; ++k) {
    // The ZI detuning commutes with everything and only adds a phase per block.
    const auto [c1, c2] = gauss_coeffs(p, backend, k, step, cphi, sphi, 0.0);
    const auto v = magnus4(c1, c2, step);
    const double c = detune * step;
    block0 = expm_pauli(c, v[0], v[1], v[2]) * block0;
    block1 = expm_pauli(-c, -v[0], -v[1], v[2]) * block1;
  }
  Mat4 u;
  for (int r = 0; r < 2; ++r)
    for (int col = 0; col < 2; ++col) {
      u(r, col) = block0(r, col);
      u(2 + r, 2 + col) = block1(r, col);
    }
  return u;
}

double max_rotation(int duration, double sigma, const BackendProfile& backend) {
  return backend.omega_max * unit_envelope_area(duration, sigma);
}

double calibrate_amp_for_rx(double theta, int duration, const BackendProfile& backend, std::optional<double> sigma) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi)) throw ParameterError("calibration angle must lie in [0, pi]");
  if (duration <= 0 || duration % kDurationGranularity != 0)
    throw ParameterError("calibration duration must be a positive multiple of 32dt");
  if (!(backend.omega_max > 0.0)) throw ParameterError("backend omega_max must be positive");
  const double s = sigma.value_or(duration / 4.0);
  if (theta == 0.0) return 0.0;

  // Rotation angle of the realized propagator, in [0, pi].
  auto realized = [&](double amp) {
    const Mat2 u = pulse_propagator({amp, 0.0, 0.0, duration, s}, backend);
    return 2.0 * std::atan2(std::abs(u(0, 1)), std::abs(u(0, 0)));
  };

  double amp = theta / max_rotation(duration, s, backend);
  if (amp > 1.0 + 1e-12)
    throw InfeasibleDurationError("RX(" + std::to_string(theta) + ") needs amp " + std::to_string(amp) + " > 1 at " +
                                  std::to_string(duration) + "dt");
  amp = std::min(amp, 1.0);

  // Secant refinement on the angle defect.
  double prev = amp * 0.98;
  double f_prev = realized(prev) - theta;
  double f_cur = realized(amp) - theta;
  for (int iter = 0; iter < 20 && std::abs(f_cur) > 1e-13; ++iter) {
    const double denom = f_cur - f_prev;
    if (denom == 0.0) break;
    const double next = std::clamp(amp - f_cur * (amp - prev) / denom, 0.0, 1.0);
    prev = amp;
    f_prev = f_cur;
    amp = next;
    f_cur = realized(amp) - theta;
  }

  Mat2 target;
  target(0, 0) = std::cos(theta / 2);
  target(1, 1) = std::cos(theta / 2);
  target(0, 1) = cd(0, -std::sin(theta / 2));
  target(1, 0) = cd(0, -std::sin(theta / 2));
  const double fid = trace_fidelity(target, pulse_propagator({amp, 0.0, 0.0, duration, s}, backend));
  if (fid < 0.9999) throw NumericalError("amplitude calibration did not converge");
  return amp;
}

int Schedule::makespan() const {
  int end = 0;
  for (const auto& ins : instructions) end = std::max(end, ins.end_time());
  return end;
}

void validate_schedule(const Schedule& s) {
  auto qubits_of = [](const Channel& c) {
    std::vector<int> q{c.q0};
    if (c.kind == Channel::Kind::Control) q.push_back(c.q1);
    return q;
  };
  for (const auto& ins : s.instructions) {
    const auto& ch = ins.channel;
    if (ins.start_time < 0) throw ScheduleError("negative start time");
    if (ch.q0 < 0 || ch.q0 >= s.n_qubits) throw ScheduleError("channel qubit out of range");
    if (ch.kind == Channel::Kind::Control && (ch.q1 < 0 || ch.q1 >= s.n_qubits || ch.q1 == ch.q0))
      throw ScheduleError("control channel needs two distinct qubits");
    if (ch.kind == Channel::Kind::Drive && ch.q1 != -1) throw ScheduleError("drive channel takes one qubit");
  }
  for (std::size_t i = 0; i < s.instructions.size(); ++i) {
    for (std::size_t j = i + 1; j < s.instructions.size(); ++j) {
      const auto &a = s.instructions[i], &b = s.instructions[j];
      const bool overlap = a.start_time < b.end_time() && b.start_time < a.end_time();
      if (!overlap) continue;
      if (a.channel == b.channel) throw ScheduleError("overlapping instructions on one channel");
      for (int qa : qubits_of(a.channel))
        for (int qb : qubits_of(b.channel))
          if (qa == qb) throw ScheduleError("overlapping instructions on qubit " + std::to_string(qa));
    }
  }
}

Schedule make_mixer_schedule(int n, const std::vector<PulseParams>& per_qubit) {
  if (n < 0 || per_qubit.size() != static_cast<std::size_t>(n))
    throw ParameterError("mixer schedule needs one pulse per qubit");
  Schedule s{n, {}};
  for (int q = 0; q < n; ++q) {
    require_valid(per_qubit[q]);
    s.instructions.push_back({Channel::drive(q), per_qubit[q], 0});
  }
  return s;
}

}  // namespace hybridpulse
