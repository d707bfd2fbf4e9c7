#include <gtest/gtest.h>

#include <random>

#include "hybridpulse/density.hpp"
#include "hybridpulse/kernels.hpp"

using namespace hybridpulse;
namespace k = hybridpulse::kernels;

namespace {

std::vector<cd> random_buffer(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  std::vector<cd> v(n);
  for (auto& x : v) x = {nd(rng), nd(rng)};
  return v;
}

template <std::size_t N>
SmallMatrix<N> random_matrix(std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  SmallMatrix<N> m;
  for (auto& x : m.a) x = {nd(rng), nd(rng)};
  return m;
}

double max_diff(const std::vector<cd>& a, const std::vector<cd>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

class KernelEquivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    if (!k::isa_available(k::Isa::Avx2)) GTEST_SKIP() << "AVX2 variant not available on this build or CPU";
  }
};

}  // namespace

TEST(Kernels, ScalarAlwaysAvailable) {
  EXPECT_TRUE(k::isa_available(k::Isa::Scalar));
  EXPECT_EQ(k::table_for(k::Isa::Scalar).isa, k::Isa::Scalar);
  EXPECT_EQ(k::isa_name(k::Isa::Scalar), "scalar");
}

TEST(Kernels, ScalarMat2MatchesDefinition) {
  std::mt19937_64 rng(2);
  auto v = random_buffer(16, rng);
  const auto ref = v;
  const Mat2 m = random_matrix<2>(rng);
  k::scalar::apply_mat2(v, 2, m);
  for (std::size_t i = 0; i < 16; ++i) {
    const std::size_t b = (i >> 2) & 1, partner = i ^ 4;
    const cd expect = m(b, b) * ref[i] + m(b, 1 - b) * ref[partner];
    EXPECT_NEAR(std::abs(v[i] - expect), 0.0, 1e-13);
  }
}

TEST(Kernels, ScalarMat4MatchesDefinition) {
  std::mt19937_64 rng(3);
  auto v = random_buffer(32, rng);
  const auto ref = v;
  const Mat4 m = random_matrix<4>(rng);
  const unsigned qa = 3, qb = 1;
  k::scalar::apply_mat4(v, qa, qb, m);
  for (std::size_t i = 0; i < 32; ++i) {
    const std::size_t r = 2 * ((i >> qa) & 1) + ((i >> qb) & 1);
    cd expect = 0.0;
    for (std::size_t c = 0; c < 4; ++c) {
      std::size_t j = i & ~((std::size_t{1} << qa) | (std::size_t{1} << qb));
      j |= ((c >> 1) & 1) << qa;
      j |= (c & 1) << qb;
      expect += m(r, c) * ref[j];
    }
    EXPECT_NEAR(std::abs(v[i] - expect), 0.0, 1e-12);
  }
}

TEST_F(KernelEquivalence, Mat2AllTargets) {
  std::mt19937_64 rng(11);
  for (unsigned n : {1u, 2u, 3u, 6u, 12u})
    for (unsigned t = 0; t < n; ++t) {
      auto a = random_buffer(std::size_t{1} << n, rng), b = a;
      const Mat2 m = random_matrix<2>(rng);
      k::scalar::apply_mat2(a, t, m);
      k::avx2::apply_mat2(b, t, m);
      EXPECT_LT(max_diff(a, b), 1e-12) << "n=" << n << " t=" << t;
    }
}

TEST_F(KernelEquivalence, Mat4AllPairs) {
  std::mt19937_64 rng(12);
  for (unsigned n : {2u, 3u, 5u, 10u})
    for (unsigned qa = 0; qa < n; ++qa)
      for (unsigned qb = 0; qb < n; ++qb) {
        if (qa == qb) continue;
        auto a = random_buffer(std::size_t{1} << n, rng), b = a;
        const Mat4 m = random_matrix<4>(rng);
        k::scalar::apply_mat4(a, qa, qb, m);
        k::avx2::apply_mat4(b, qa, qb, m);
        EXPECT_LT(max_diff(a, b), 1e-12) << "n=" << n << " qa=" << qa << " qb=" << qb;
      }
}

TEST_F(KernelEquivalence, AxpyAndScaleIncludingTails) {
  std::mt19937_64 rng(13);
  for (std::size_t len : {1u, 2u, 3u, 7u, 64u, 1023u}) {
    auto y1 = random_buffer(len, rng), y2 = y1;
    const auto x = random_buffer(len, rng);
    k::scalar::axpy(y1, 0.37, x);
    k::avx2::axpy(y2, 0.37, x);
    EXPECT_LT(max_diff(y1, y2), 1e-14);
    k::scalar::scale(y1, -1.9);
    k::avx2::scale(y2, -1.9);
    EXPECT_LT(max_diff(y1, y2), 1e-14);
  }
}

TEST_F(KernelEquivalence, DensityEvolutionAgreesAcrossIsas) {
  std::mt19937_64 rng(5);
  const int n = 4;
  NoiseConfig noise;
  noise.enabled = true;
  noise.gate_depol_1q = 1e-3;
  noise.gate_depol_2q = 1e-2;
  noise.t1_dt = 4e5;
  noise.t2_dt = 3e5;
  Circuit c(n);
  for (int i = 0; i < 40; ++i) {
    const int a = static_cast<int>(rng() % n);
    int b = static_cast<int>(rng() % n);
    if (b == a) b = (a + 1) % n;
    if (i % 3 == 0)
      c.add(Gate::rzz(a, b, 0.1 * i));
    else
      c.add(Gate::rx(a, 0.2 * i));
  }
  auto run = [&](k::Isa isa) {
    k::set_active(isa);
    DensityState s = init_plus_state(n);
    apply_circuit(s, c, noise);
    apply_idle_decoherence(s, 500.0, noise);
    return std::vector<cd>(s.data().begin(), s.data().end());
  };
  const auto a = run(k::Isa::Scalar);
  const auto b = run(k::Isa::Avx2);
  k::set_active(k::Isa::Avx2);
  EXPECT_LT(max_diff(a, b), 1e-12);
}
