#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace tscore {

/// Mixes a root seed with a path of counters (grid point, replicate, purpose)
/// into an independent 64-bit seed. Distinct paths give distinct streams.
std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path);

class RandomStream {
public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}
  RandomStream(std::uint64_t root, std::initializer_list<std::uint64_t> path)
      : engine_(derive_seed(root, path)) {}

  double normal() { return normal_(engine_); }
  double chi_squared(double df) { return std::chi_squared_distribution<double>(df)(engine_); }
  std::uint64_t next_u64() { return engine_(); }

private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace tscore
