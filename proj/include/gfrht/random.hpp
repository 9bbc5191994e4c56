#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace gfrht {

/// Seeded generator with a fixed, documented stream: std::mt19937_64 words
/// (sequence fixed by the C++ standard), uniform doubles from the top 53 bits,
/// normals by Box-Muller. The std distributions are avoided because their
/// output differs between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

  double normal();

  /// k distinct indices of [0, n), in draw order (partial Fisher-Yates).
  std::vector<std::size_t> sample(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace gfrht
