#include <cstddef>

#include "hybridpulse/kernels.hpp"

namespace hybridpulse::kernels::scalar {

namespace {
// Spread `k` so that zero bits appear at positions lo < hi.
inline std::size_t insert_two_zeros(std::size_t k, unsigned lo, unsigned hi) {
  const std::size_t lo_mask = (std::size_t{1} << lo) - 1;
  k = ((k & ~lo_mask) << 1) | (k & lo_mask);
  const std::size_t hi_mask = (std::size_t{1} << hi) - 1;
  return ((k & ~hi_mask) << 1) | (k & hi_mask);
}
}  // namespace

void apply_mat2(std::span<cd> amps, unsigned target, const Mat2& m) {
  const std::size_t n = amps.size();
  const std::size_t stride = std::size_t{1} << target;
  const cd m00 = m(0, 0), m01 = m(0, 1), m10 = m(1, 0), m11 = m(1, 1);
  for (std::size_t block = 0; block < n; block += 2 * stride) {
    for (std::size_t j = block; j < block + stride; ++j) {
      const cd a0 = amps[j];
      const cd a1 = amps[j + stride];
      amps[j] = m00 * a0 + m01 * a1;
      amps[j + stride] = m10 * a0 + m11 * a1;
    }
  }
}

void apply_mat4(std::span<cd> amps, unsigned qa, unsigned qb, const Mat4& m) {
  const std::size_t quarter = amps.size() / 4;
  const std::size_t ma = std::size_t{1} << qa;
  const std::size_t mb = std::size_t{1} << qb;
  const unsigned lo = qa < qb ? qa : qb;
  const unsigned hi = qa < qb ? qb : qa;
  for (std::size_t k = 0; k < quarter; ++k) {
    const std::size_t base = insert_two_zeros(k, lo, hi);
    const std::size_t idx[4] = {base, base | mb, base | ma, base | ma | mb};
    cd in[4];
    for (int r = 0; r < 4; ++r) in[r] = amps[idx[r]];
    for (int r = 0; r < 4; ++r) {
      cd acc = 0.0;
      for (int c = 0; c < 4; ++c) acc += m(r, c) * in[c];
      amps[idx[r]] = acc;
    }
  }
}

void axpy(std::span<cd> y, double alpha, std::span<const cd> x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

void scale(std::span<cd> y, double alpha) {
  for (auto& v : y) v *= alpha;
}

}  // namespace hybridpulse::kernels::scalar
