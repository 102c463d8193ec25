#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace nclb {

// Deterministic source for property tests and suite sampling.  All draws go
// through next()/below() so that streams are identical across platforms
// (std distributions are implementation-defined and must not be used here).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform-ish integer in [0, n).  Modulo bias is irrelevant at test scale.
  std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }

  // Inclusive range.
  long long range(long long lo, long long hi) {
    return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  bool coin() { return (next() & 1u) != 0; }

  template <typename T>
  const T& pick(const std::vector<T>& xs) {
    return xs[static_cast<std::size_t>(below(xs.size()))];
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace nclb
