#pragma once

// Inner loops of the density-matrix engine. Every kernel exists as a scalar
// reference and, where the build and CPU allow it, an AVX2/FMA variant. The
// active variant is picked once at first use (HYBRIDPULSE_KERNEL=scalar|avx2
// overrides the CPU probe) and can be switched explicitly for testing.

#include <complex>
#include <span>
#include <string_view>

#include "hybridpulse/linalg.hpp"

namespace hybridpulse::kernels {

enum class Isa { Scalar, Avx2 };

// Amplitude buffers are indexed by basis state with bit q of the index equal to
// qubit q. A two-qubit matrix acts on local index 2*bit(qa) + bit(qb).
using ApplyMat2Fn = void (*)(std::span<cd> amps, unsigned target, const Mat2& m);
using ApplyMat4Fn = void (*)(std::span<cd> amps, unsigned qa, unsigned qb, const Mat4& m);
using AxpyFn = void (*)(std::span<cd> y, double alpha, std::span<const cd> x);
using ScaleFn = void (*)(std::span<cd> y, double alpha);

struct KernelTable {
  Isa isa;
  ApplyMat2Fn apply_mat2;
  ApplyMat4Fn apply_mat4;
  AxpyFn axpy;  // y += alpha * x
  ScaleFn scale;
};

namespace scalar {
void apply_mat2(std::span<cd> amps, unsigned target, const Mat2& m);
void apply_mat4(std::span<cd> amps, unsigned qa, unsigned qb, const Mat4& m);
void axpy(std::span<cd> y, double alpha, std::span<const cd> x);
void scale(std::span<cd> y, double alpha);
}  // namespace scalar

#ifdef HYBRIDPULSE_HAVE_AVX2
namespace avx2 {
void apply_mat2(std::span<cd> amps, unsigned target, const Mat2& m);
void apply_mat4(std::span<cd> amps, unsigned qa, unsigned qb, const Mat4& m);
void axpy(std::span<cd> y, double alpha, std::span<const cd> x);
void scale(std::span<cd> y, double alpha);
}  // namespace avx2
#endif

bool isa_available(Isa isa);
const KernelTable& table_for(Isa isa);

const KernelTable& active();
void set_active(Isa isa);  // throws ParameterError if unavailable

std::string_view isa_name(Isa isa);

inline void apply_mat2(std::span<cd> amps, unsigned target, const Mat2& m) {
  active().apply_mat2(amps, target, m);
}
inline void apply_mat4(std::span<cd> amps, unsigned qa, unsigned qb, const Mat4& m) {
  active().apply_mat4(amps, qa, qb, m);
}
inline void axpy(std::span<cd> y, double alpha, std::span<const cd> x) { active().axpy(y, alpha, x); }
inline void scale(std::span<cd> y, double alpha) { active().scale(y, alpha); }

}  // namespace hybridpulse::kernels
