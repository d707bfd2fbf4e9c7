#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "hybridpulse/backend.hpp"
#include "hybridpulse/circuit.hpp"
#include "hybridpulse/error.hpp"
#include "hybridpulse/pulse.hpp"
#include "hybridpulse/unitary.hpp"

using namespace hybridpulse;
using std::numbers::pi;

namespace {

const BackendProfile& ideal() {
  static const BackendProfile b = find_profile("ideal");
  return b;
}

double unitarity_defect(const Mat2& u) { return (u.dagger() * u - Mat2::identity()).max_abs(); }
double unitarity_defect(const Mat4& u) { return (u.dagger() * u - Mat4::identity()).max_abs(); }

template <std::size_t N>
double distance_up_to_phase(const SmallMatrix<N>& a, const SmallMatrix<N>& b) {
  const cd overlap = (b.dagger() * a).trace();
  const cd ph = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cd(1.0);
  return (a - ph * b).max_abs();
}

PulseParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const int duration = 32 * (1 + static_cast<int>(rng() % 12));
  PulseParams p = PulseParams::gaussian(u01(rng), 2 * pi * u01(rng), -100.0 + 200.0 * u01(rng), duration);
  if (p.phase >= 2 * pi) p.phase = 0.0;
  return p;
}

}  // namespace

TEST(Validation, BoundaryValuesAreValid) {
  EXPECT_TRUE(validate_pulse_params(PulseParams::gaussian(1.0, 0.0, 100.0, 32)).empty());
  EXPECT_TRUE(validate_pulse_params(PulseParams::gaussian(0.0, 0.0, -100.0, 32)).empty());
}

TEST(Validation, ReportsEveryViolation) {
  const auto amp = validate_pulse_params(PulseParams::gaussian(1.2, 0.0, 0.0, 160));
  ASSERT_EQ(amp.size(), 1u);
  EXPECT_EQ(amp[0].field, "amp");
  EXPECT_NE(amp[0].message.find("amp > 1"), std::string::npos);

  PulseParams bad = PulseParams::gaussian(0.5, 0.0, 0.0, 40);
  const auto dur = validate_pulse_params(bad);
  ASSERT_EQ(dur.size(), 1u);
  EXPECT_NE(dur[0].message.find("not multiple of 32dt"), std::string::npos);

  bad = PulseParams::gaussian(-0.1, 7.0, 150.0, 0);
  bad.sigma = -1.0;
  EXPECT_GE(validate_pulse_params(bad).size(), 5u);
  EXPECT_THROW(require_valid(bad), ParameterError);
}

TEST(Envelope, PeakZeroAmpAndEdges) {
  const PulseParams p = PulseParams::gaussian(0.7, 0.0, 0.0, 160);
  EXPECT_DOUBLE_EQ(p.sigma, 40.0);
  EXPECT_NEAR(gaussian_envelope(80.0, p), 0.7, 1e-15);
  EXPECT_EQ(gaussian_envelope(50.0, PulseParams::gaussian(0.0, 0.0, 0.0, 160)), 0.0);
  EXPECT_LT(gaussian_envelope(0.0, p), 0.7 * 0.02);
}

TEST(Envelope, AreaPinnedByTrapezoidOracle) {
  const double area = unit_envelope_area(160, 40.0);
  // Trapezoid rule on a 100x finer grid.
  const PulseParams p = PulseParams::gaussian(1.0, 0.0, 0.0, 160);
  const int m = 16000;
  double trap = 0.0;
  for (int k = 0; k <= m; ++k) {
    const double w = (k == 0 || k == m) ? 0.5 : 1.0;
    trap += w * gaussian_envelope(160.0 * k / m, p);
  }
  trap *= 160.0 / m;
  EXPECT_NEAR(area, trap, 1e-3);
  EXPECT_NEAR(area, 86.2068, 1e-3);
  EXPECT_NEAR(default_omega_max() * area, 2 * pi, 1e-12);
}

TEST(Propagator, ZeroAmpIsIdentity) {
  const Mat2 u = pulse_propagator(PulseParams::gaussian(0.0, 1.0, 0.0, 160), ideal());
  EXPECT_LT((u - Mat2::identity()).max_abs(), 1e-12);
}

TEST(Propagator, DetuningOnlyIsZRotation) {
  const double f = 37.0;
  const PulseParams p = PulseParams::gaussian(0.0, 0.0, f, 320);
  const double angle = 2 * pi * freq_cycles_per_dt(f, ideal().dt_ns) * 320;
  EXPECT_LT(distance_up_to_phase(pulse_propagator(p, ideal()), gate_matrix_1q(Gate::rz(0, angle))), 1e-10);
}

TEST(Propagator, CalibratedPiPulse) {
  const double amp = calibrate_amp_for_rx(pi, 160, ideal());
  EXPECT_NEAR(amp, 0.5, 0.01);
  const Mat2 u = pulse_propagator(PulseParams::gaussian(amp, 0.0, 0.0, 160), ideal());
  EXPECT_GE(trace_fidelity(u, gate_matrix_1q(Gate::rx(0, pi))), 0.9999);
}

TEST(Propagator, UnitaryOverRandomDraws) {
  std::mt19937_64 rng(1234);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const PulseParams p = random_params(rng);
    worst = std::max(worst, unitarity_defect(pulse_propagator(p, ideal())));
    if (i % 10 == 0) worst = std::max(worst, unitarity_defect(cr_propagator(p, ideal())));
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(Propagator, StepRefinementConverges) {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 20; ++i) {
    const PulseParams p = random_params(rng);
    const Mat2 a = pulse_propagator(p, ideal());
    const Mat2 b = pulse_propagator(p, ideal(), p.duration * 2);
    EXPECT_LT((a - b).max_abs(), 1e-6);
  }
}

TEST(Propagator, PhaseShiftByPiIsZConjugation) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 50; ++i) {
    PulseParams p = random_params(rng);
    p.freq_mhz = 0.0;
    p.phase = pi * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    PulseParams q = p;
    q.phase += pi;
    const Mat2 z = pauli::Z();
    EXPECT_LT(distance_up_to_phase(pulse_propagator(q, ideal()), z * pulse_propagator(p, ideal()) * z), 1e-10);
  }
}

TEST(Propagator, PhaseSelectsRotationAxis) {
  const double amp = calibrate_amp_for_rx(pi / 3, 160, ideal());
  const Mat2 x = pulse_propagator(PulseParams::gaussian(amp, 0.0, 0.0, 160), ideal());
  const Mat2 y = pulse_propagator(PulseParams::gaussian(amp, pi / 2, 0.0, 160), ideal());
  const Mat2 mx = pulse_propagator(PulseParams::gaussian(amp, pi, 0.0, 160), ideal());
  EXPECT_GE(trace_fidelity(x, gate_matrix_1q(Gate::rx(0, pi / 3))), 0.9999);
  EXPECT_GE(trace_fidelity(y, gate_matrix_1q(Gate::ry(0, pi / 3))), 0.9999);
  EXPECT_GE(trace_fidelity(mx, gate_matrix_1q(Gate::rx(0, -pi / 3))), 0.9999);
}

TEST(CrossResonance, ZeroAmpIdentityAndCommutingCase) {
  EXPECT_LT((cr_propagator(PulseParams::gaussian(0.0, 0.0, 0.0, 160), ideal()) - Mat4::identity()).max_abs(), 1e-12);
  const PulseParams p = PulseParams::gaussian(0.3, 0.0, 0.0, 320);
  const double area = ideal().omega_max * 0.3 * unit_envelope_area(320, 80.0);
  // exp(-i (A/2) ZX) = cos(A/2) I - i sin(A/2) ZX
  const Mat4 zx = kron(pauli::Z(), pauli::X());
  const Mat4 ref = cd(std::cos(area / 2)) * Mat4::identity() + cd(0.0, -std::sin(area / 2)) * zx;
  EXPECT_LT((cr_propagator(p, ideal()) - ref).max_abs(), 1e-10);
  // Block diagonal in the control bit.
  const Mat4 u = cr_propagator(p, ideal());
  for (std::size_t r : {0u, 1u})
    for (std::size_t c : {2u, 3u}) EXPECT_LT(std::abs(u(r, c)) + std::abs(u(c, r)), 1e-14);
}

TEST(CrossResonance, FramedCrIsRzz) {
  // RY(pi/2) on the target turns ZX into ZZ; this is the pulse-only phase-layer block.
  const BackendProfile& b = ideal();
  const double theta = 0.9;
  const double amp = calibrate_amp_for_rx(theta, 320, b);
  const Mat4 cr = cr_propagator(PulseParams::gaussian(amp, 0.0, 0.0, 320), b);
  const Mat4 pre = kron(Mat2::identity(), gate_matrix_1q(Gate::ry(0, pi / 2)));
  const Mat4 post = kron(Mat2::identity(), gate_matrix_1q(Gate::ry(0, -pi / 2)));
  const Mat4 rzz = gate_matrix_2q(Gate::rzz(0, 1, theta));
  EXPECT_GE(trace_fidelity(post * cr * pre, rzz), 0.9999);
}

TEST(Calibration, ZeroAngleAndInfeasible) {
  EXPECT_EQ(calibrate_amp_for_rx(0.0, 160, ideal()), 0.0);
  EXPECT_THROW(calibrate_amp_for_rx(pi, 32, ideal()), InfeasibleDurationError);
  EXPECT_THROW(calibrate_amp_for_rx(4.0, 160, ideal()), ParameterError);
  EXPECT_THROW(calibrate_amp_for_rx(1.0, 40, ideal()), ParameterError);
}

TEST(Calibration, PiFeasibilityAcrossGrid) {
  EXPECT_NO_THROW(calibrate_amp_for_rx(pi, 128, ideal()));
  EXPECT_GT(max_rotation(128, 32.0, ideal()), pi);
  EXPECT_LT(max_rotation(32, 8.0, ideal()), pi);
  EXPECT_LT(max_rotation(64, 16.0, ideal()), max_rotation(96, 24.0, ideal()));
}

TEST(Schedule, MixerLayout) {
  const PulseParams p = PulseParams::gaussian(0.2, 0.0, 0.0, 320);
  const Schedule s2 = make_mixer_schedule(2, {p, p});
  ASSERT_EQ(s2.instructions.size(), 2u);
  EXPECT_EQ(s2.instructions[0].start_time, 0);
  EXPECT_EQ(s2.instructions[1].start_time, 0);
  EXPECT_TRUE(make_mixer_schedule(0, {}).instructions.empty());
  EXPECT_EQ(make_mixer_schedule(6, std::vector<PulseParams>(6, p)).makespan(), 320);
  EXPECT_THROW(make_mixer_schedule(2, {p}), ParameterError);
  EXPECT_THROW(make_mixer_schedule(1, {PulseParams::gaussian(2.0, 0.0, 0.0, 320)}), ParameterError);
}

TEST(Schedule, OverlapDetection) {
  const PulseParams p = PulseParams::gaussian(0.2, 0.0, 0.0, 160);
  Schedule s{2, {{Channel::drive(0), p, 0}, {Channel::drive(0), p, 100}}};
  EXPECT_THROW(validate_schedule(s), ScheduleError);
  s.instructions[1].start_time = 160;
  EXPECT_NO_THROW(validate_schedule(s));
  Schedule cr{2, {{Channel::control(0, 1), p, 0}, {Channel::drive(1), p, 50}}};
  EXPECT_THROW(validate_schedule(cr), ScheduleError);
  Schedule neg{1, {{Channel::drive(0), p, -32}}};
  EXPECT_THROW(validate_schedule(neg), ScheduleError);
}

TEST(Schedule, UnitaryOfSimultaneousDrives) {
  const BackendProfile& b = ideal();
  const double amp = calibrate_amp_for_rx(pi / 2, 160, b);
  const PulseParams p = PulseParams::gaussian(amp, 0.0, 0.0, 160);
  const Schedule s = make_mixer_schedule(2, {p, p});
  Circuit c(2);
  c.add(Gate::rx(0, pi / 2)).add(Gate::rx(1, pi / 2));
  EXPECT_LT(distance_up_to_phase(schedule_unitary(s, b), circuit_unitary(c)), 1e-4);
}

TEST(PulseJson, RoundTrip) {
  const PulseParams p = PulseParams::gaussian(0.25, 1.5, -20.0, 96);
  const auto j = p.to_json();
  EXPECT_TRUE(j.contains("duration_dt"));
  EXPECT_TRUE(j.contains("sigma_dt"));
  EXPECT_EQ(PulseParams::from_json(j), p);
}
