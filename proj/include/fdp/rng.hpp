#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace fdp {

/// Seeded generator with a distribution layer that does not depend on the
/// standard library implementation, so a seed reproduces the same instance
/// on every toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    if (hi <= lo) return lo;
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(engine_());
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t draw;
    do {
      draw = engine_();
    } while (draw >= limit);
    return lo + static_cast<std::int64_t>(draw % span);
  }

  bool coin(std::uint64_t numerator, std::uint64_t denominator) {
    return static_cast<std::uint64_t>(uniform(0, static_cast<std::int64_t>(denominator) - 1)) <
           numerator;
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(i) - 1))]);
    }
  }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fdp
