#include "tscore/kernels.hpp"

#include <cstdlib>
#include <string>

namespace tscore::kernels {

namespace {

constexpr KernelTable kScalar{Isa::Scalar, &scalar::dot, &scalar::axpy, &scalar::sum_squares};

#if defined(TSCORE_HAVE_AVX2)
constexpr KernelTable kAvx2{Isa::Avx2, &avx2::dot, &avx2::axpy, &avx2::sum_squares};
#endif

bool cpu_has_avx2() {
#if defined(TSCORE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* initial_table() {
  const char* env = std::getenv("TSCORE_SIMD");
  if (env != nullptr && std::string(env) == "scalar") return &kScalar;
#if defined(TSCORE_HAVE_AVX2)
  if (cpu_has_avx2()) return &kAvx2;
#endif
  return &kScalar;
}

const KernelTable*& current() {
  static const KernelTable* table = initial_table();
  return table;
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

bool available(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2: return cpu_has_avx2();
  }
  return false;
}

std::optional<KernelTable> table(Isa isa) {
  if (!available(isa)) return std::nullopt;
#if defined(TSCORE_HAVE_AVX2)
  if (isa == Isa::Avx2) return kAvx2;
#endif
  return kScalar;
}

const KernelTable& active() { return *current(); }

bool select(Isa isa) {
  if (!available(isa)) return false;
#if defined(TSCORE_HAVE_AVX2)
  if (isa == Isa::Avx2) {
    current() = &kAvx2;
    return true;
  }
#endif
  current() = &kScalar;
  return true;
}

}  // namespace tscore::kernels
