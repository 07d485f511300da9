#pragma once

#include <cstdint>
#include <random>

#include "nl0r/core_types.hpp"

namespace nl0r {

/// Seeded generator with platform-independent output.
///
/// Raw bits come from std::mt19937_64, whose sequence is fixed by the
/// standard. The distribution layer is implemented here (53-bit uniforms,
/// Box-Muller normals, rejection-sampled bounded integers) because the
/// standard library distributions differ between implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform();

  double normal();

  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

  /// k distinct indices from [0, n) in draw order (partial Fisher-Yates).
  std::vector<Index> sample_without_replacement(Index n, Index k);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace nl0r
