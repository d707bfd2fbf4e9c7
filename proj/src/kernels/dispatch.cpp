#include <atomic>
#include <cstdlib>
#include <string>

#include "hybridpulse/error.hpp"
#include "hybridpulse/kernels.hpp"

namespace hybridpulse::kernels {

namespace {

const KernelTable kScalar{Isa::Scalar, &scalar::apply_mat2, &scalar::apply_mat4, &scalar::axpy, &scalar::scale};

#ifdef HYBRIDPULSE_HAVE_AVX2
const KernelTable kAvx2{Isa::Avx2, &avx2::apply_mat2, &avx2::apply_mat4, &avx2::axpy, &avx2::scale};
#endif

bool cpu_has_avx2() {
#if defined(HYBRIDPULSE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* pick_default() {
  if (const char* env = std::getenv("HYBRIDPULSE_KERNEL")) {
    const std::string want = env;
    if (want == "scalar") return &kScalar;
#ifdef HYBRIDPULSE_HAVE_AVX2
    if (want == "avx2" && cpu_has_avx2()) return &kAvx2;
#endif
  }
#ifdef HYBRIDPULSE_HAVE_AVX2
  if (cpu_has_avx2()) return &kAvx2;
#endif
  return &kScalar;
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{pick_default()};
  return table;
}

}  // namespace

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
      return cpu_has_avx2();
  }
  return false;
}

const KernelTable& table_for(Isa isa) {
  if (!isa_available(isa)) throw ParameterError("kernel ISA not available: " + std::string(isa_name(isa)));
#ifdef HYBRIDPULSE_HAVE_AVX2
  if (isa == Isa::Avx2) return kAvx2;
#endif
  return kScalar;
}

const KernelTable& active() { return *current().load(std::memory_order_relaxed); }

void set_active(Isa isa) { current().store(&table_for(isa), std::memory_order_relaxed); }

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace hybridpulse::kernels
