// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include <cstddef>

#include "hybridpulse/kernels.hpp"

namespace hybridpulse::kernels::avx2 {

namespace {

// Two complex doubles per register: [re0, im0, re1, im1].
inline __m256d load2(const cd* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cd* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

struct Bcast {
  __m256d re;
  __m256d im;
};

inline Bcast bcast(cd z) { return {_mm256_set1_pd(z.real()), _mm256_set1_pd(z.imag())}; }

// a * z for a broadcast complex scalar z.
inline __m256d cmul(__m256d a, const Bcast& z) {
  const __m256d swapped = _mm256_permute_pd(a, 0x5);
  return _mm256_fmaddsub_pd(a, z.re, _mm256_mul_pd(swapped, z.im));
}

// Lane-wise complex product of two packed pairs.
inline __m256d cmul_lanes(__m256d a, __m256d b) {
  const __m256d b_re = _mm256_movedup_pd(b);
  const __m256d b_im = _mm256_permute_pd(b, 0xF);
  const __m256d swapped = _mm256_permute_pd(a, 0x5);
  return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(swapped, b_im));
}

inline std::size_t insert_two_zeros(std::size_t k, unsigned lo, unsigned hi) {
  const std::size_t lo_mask = (std::size_t{1} << lo) - 1;
  k = ((k & ~lo_mask) << 1) | (k & lo_mask);
  const std::size_t hi_mask = (std::size_t{1} << hi) - 1;
  return ((k & ~hi_mask) << 1) | (k & hi_mask);
}

}  // namespace

void apply_mat2(std::span<cd> amps, unsigned target, const Mat2& m) {
  const std::size_t n = amps.size();
  if (n < 2) return;
  cd* data = amps.data();
  const std::size_t stride = std::size_t{1} << target;

  if (stride == 1) {
    // Pair members are adjacent: one register holds (a0, a1).
    const __m256d diag = _mm256_setr_pd(m(0, 0).real(), m(0, 0).imag(), m(1, 1).real(), m(1, 1).imag());
    const __m256d off = _mm256_setr_pd(m(0, 1).real(), m(0, 1).imag(), m(1, 0).real(), m(1, 0).imag());
    for (std::size_t j = 0; j < n; j += 2) {
      const __m256d v = load2(data + j);
      const __m256d flipped = _mm256_permute2f128_pd(v, v, 0x01);
      store2(data + j, _mm256_add_pd(cmul_lanes(v, diag), cmul_lanes(flipped, off)));
    }
    return;
  }

  const Bcast m00 = bcast(m(0, 0)), m01 = bcast(m(0, 1)), m10 = bcast(m(1, 0)), m11 = bcast(m(1, 1));
  for (std::size_t block = 0; block < n; block += 2 * stride) {
    for (std::size_t j = block; j < block + stride; j += 2) {
      const __m256d a0 = load2(data + j);
      const __m256d a1 = load2(data + j + stride);
      store2(data + j, _mm256_add_pd(cmul(a0, m00), cmul(a1, m01)));
      store2(data + j + stride, _mm256_add_pd(cmul(a0, m10), cmul(a1, m11)));
    }
  }
}

void apply_mat4(std::span<cd> amps, unsigned qa, unsigned qb, const Mat4& m) {
  const unsigned lo = qa < qb ? qa : qb;
  const unsigned hi = qa < qb ? qb : qa;
  const std::size_t quarter = amps.size() / 4;
  if (lo == 0 || quarter < 2) {
    scalar::apply_mat4(amps, qa, qb, m);
    return;
  }
  cd* data = amps.data();
  const std::size_t ma = std::size_t{1} << qa;
  const std::size_t mb = std::size_t{1} << qb;

  Bcast coef[16];
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) coef[4 * r + c] = bcast(m(r, c));

  // With lo >= 1, base(k) and base(k + 1) are adjacent for even k.
  for (std::size_t k = 0; k < quarter; k += 2) {
    const std::size_t base = insert_two_zeros(k, lo, hi);
    const std::size_t idx[4] = {base, base | mb, base | ma, base | ma | mb};
    __m256d in[4];
    for (int r = 0; r < 4; ++r) in[r] = load2(data + idx[r]);
    for (int r = 0; r < 4; ++r) {
      __m256d acc = cmul(in[0], coef[4 * r]);
      acc = _mm256_add_pd(acc, cmul(in[1], coef[4 * r + 1]));
      acc = _mm256_add_pd(acc, cmul(in[2], coef[4 * r + 2]));
      acc = _mm256_add_pd(acc, cmul(in[3], coef[4 * r + 3]));
      store2(data + idx[r], acc);
    }
  }
}

void axpy(std::span<cd> y, double alpha, std::span<const cd> x) {
  double* yd = reinterpret_cast<double*>(y.data());
  const double* xd = reinterpret_cast<const double*>(x.data());
  const std::size_t len = 2 * y.size();
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    _mm256_storeu_pd(yd + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(xd + i), _mm256_loadu_pd(yd + i)));
  }
  for (; i < len; ++i) yd[i] += alpha * xd[i];
}

void scale(std::span<cd> y, double alpha) {
  double* yd = reinterpret_cast<double*>(y.data());
  const std::size_t len = 2 * y.size();
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) _mm256_storeu_pd(yd + i, _mm256_mul_pd(a, _mm256_loadu_pd(yd + i)));
  for (; i < len; ++i) yd[i] *= alpha;
}

}  // namespace hybridpulse::kernels::avx2
