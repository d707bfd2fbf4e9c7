#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

namespace hybridpulse {

using cd = std::complex<double>;

/// Fixed-size dense complex matrix, row-major.
template <std::size_t N>
struct SmallMatrix {
  std::array<cd, N * N> a{};

  constexpr cd& operator()(std::size_t r, std::size_t c) { return a[r * N + c]; }
  constexpr const cd& operator()(std::size_t r, std::size_t c) const { return a[r * N + c]; }

  static SmallMatrix identity() {
    SmallMatrix m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }

  SmallMatrix dagger() const {
    SmallMatrix m;
    for (std::size_t r = 0; r < N; ++r)
      for (std::size_t c = 0; c < N; ++c) m(r, c) = std::conj((*this)(c, r));
    return m;
  }

  SmallMatrix conjugate() const {
    SmallMatrix m;
    for (std::size_t i = 0; i < N * N; ++i) m.a[i] = std::conj(a[i]);
    return m;
  }

  cd trace() const {
    cd t = 0.0;
    for (std::size_t i = 0; i < N; ++i) t += (*this)(i, i);
    return t;
  }

  friend SmallMatrix operator*(const SmallMatrix& x, const SmallMatrix& y) {
    SmallMatrix m;
    for (std::size_t r = 0; r < N; ++r)
      for (std::size_t k = 0; k < N; ++k) {
        const cd xv = x(r, k);
        for (std::size_t c = 0; c < N; ++c) m(r, c) += xv * y(k, c);
      }
    return m;
  }

  friend SmallMatrix operator*(cd s, const SmallMatrix& x) {
    SmallMatrix m = x;
    for (auto& v : m.a) v *= s;
    return m;
  }

  friend SmallMatrix operator+(const SmallMatrix& x, const SmallMatrix& y) {
    SmallMatrix m = x;
    for (std::size_t i = 0; i < N * N; ++i) m.a[i] += y.a[i];
    return m;
  }

  friend SmallMatrix operator-(const SmallMatrix& x, const SmallMatrix& y) {
    SmallMatrix m = x;
    for (std::size_t i = 0; i < N * N; ++i) m.a[i] -= y.a[i];
    return m;
  }

  double max_abs() const {
    double best = 0.0;
    for (const auto& v : a) best = std::max(best, std::abs(v));
    return best;
  }
};

using Mat2 = SmallMatrix<2>;
using Mat4 = SmallMatrix<4>;

/// Kronecker product; `hi` acts on the more significant local bit.
inline Mat4 kron(const Mat2& hi, const Mat2& lo) {
  Mat4 m;
  for (std::size_t r1 = 0; r1 < 2; ++r1)
    for (std::size_t c1 = 0; c1 < 2; ++c1)
      for (std::size_t r2 = 0; r2 < 2; ++r2)
        for (std::size_t c2 = 0; c2 < 2; ++c2) m(2 * r1 + r2, 2 * c1 + c2) = hi(r1, c1) * lo(r2, c2);
  return m;
}

namespace pauli {
inline Mat2 I() { return Mat2::identity(); }
inline Mat2 X() {
  Mat2 m;
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}
inline Mat2 Y() {
  Mat2 m;
  m(0, 1) = cd(0, -1);
  m(1, 0) = cd(0, 1);
  return m;
}
inline Mat2 Z() {
  Mat2 m;
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}
}  // namespace pauli

/// exp(-i (c0 I + cx X + cy Y + cz Z)) for real coefficients, closed form.
inline Mat2 expm_pauli(double c0, double cx, double cy, double cz) {
  const double r = std::sqrt(cx * cx + cy * cy + cz * cz);
  const cd phase = std::exp(cd(0, -c0));
  Mat2 m;
  if (r == 0.0) {
    m(0, 0) = phase;
    m(1, 1) = phase;
    return m;
  }
  const double c = std::cos(r);
  const double s = std::sin(r) / r;
  // cos(r) I - i sin(r) n.sigma
  m(0, 0) = phase * cd(c, -s * cz);
  m(1, 1) = phase * cd(c, s * cz);
  m(0, 1) = phase * cd(-s * cy, -s * cx);
  m(1, 0) = phase * cd(s * cy, -s * cx);
  return m;
}

/// |tr(A^dagger B)| / N: phase-insensitive overlap of two unitaries.
template <std::size_t N>
double trace_fidelity(const SmallMatrix<N>& a, const SmallMatrix<N>& b) {
  return std::abs((a.dagger() * b).trace()) / static_cast<double>(N);
}

}  // namespace hybridpulse
