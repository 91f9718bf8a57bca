#pragma once

#include <cstdint>

#include "pw/types.hpp"

namespace pw::rng {

// SplitMix64: platform-independent seeded stream, used everywhere a test or
// experiment needs reproducible draws (std:: distributions are not
// bit-stable across standard libraries).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(
                                             hi - lo + 1));
  }

  Vector vector(int dim, double lo, double hi) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = uniform(lo, hi);
    return v;
  }

  Vector unit_vector(int dim) {
    for (;;) {
      Vector v = vector(dim, -1.0, 1.0);
      double n = v.norm();
      if (n > 1e-3) return v / n;
    }
  }

 private:
  std::uint64_t state_;
};

// Halton radical inverse; `dim` selects the prime base.
inline double halton(std::size_t index, int dim) {
  static constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
  int base = kPrimes[dim % 10];
  double f = 1.0;
  double r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % static_cast<std::size_t>(base));
    index /= static_cast<std::size_t>(base);
  }
  return r;
}

}  // namespace pw::rng
