#pragma once
// Data-parallel inner loops used by the dense linear algebra and the scoring
// rules. Every kernel has a portable scalar reference implementation; wider
// variants are compiled in separate translation units and picked at runtime.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace tscore::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

struct KernelTable {
  Isa isa;
  /// sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  /// y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  /// sum_i x[i]^2
  double (*sum_squares)(const double* x, std::size_t n);
};

namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
double sum_squares(const double* x, std::size_t n);
}  // namespace scalar

namespace avx2 {
// Only callable when `available(Isa::Avx2)` is true.
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
double sum_squares(const double* x, std::size_t n);
}  // namespace avx2

/// True when the ISA was compiled in and the running CPU supports it.
bool available(Isa isa);

/// Table for a specific ISA; nullopt when unavailable.
std::optional<KernelTable> table(Isa isa);

/// The table used by the library. Defaults to the widest available ISA; the
/// environment variable TSCORE_SIMD=scalar|avx2 overrides the choice at
/// startup.
const KernelTable& active();

/// Switch the active table. Not thread-safe: call before spawning workers.
/// Returns false (and leaves the selection unchanged) if `isa` is unavailable.
bool select(Isa isa);

inline double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}

inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  active().axpy(a, x.data(), y.data(), x.size());
}

inline double sum_squares(std::span<const double> x) {
  return active().sum_squares(x.data(), x.size());
}

}  // namespace tscore::kernels
