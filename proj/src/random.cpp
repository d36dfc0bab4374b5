#include "tscore/random.hpp"

namespace tscore {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = splitmix64(root);
  std::uint64_t depth = 0;
  for (std::uint64_t c : path) {
    ++depth;
    h = splitmix64(h ^ splitmix64(c + depth * 0xD1B54A32D192ED03ULL));
  }
  return h;
}

}  // namespace tscore
