#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace gamot {

// Seeded random source used everywhere the project needs randomness.
//
// Engine: std::mt19937_64, whose output stream is fixed bit-for-bit by the
// C++ standard. Distributions are implemented here by hand because standard
// library distributions are allowed to differ between implementations, which
// would silently invalidate golden files. The exact transforms:
//
//   uniform01()    (next() >> 11) * 2^-53                   in [0, 1)
//   uniform(a,b)   a + (b - a) * uniform01()
//   normal(m,s)    Box-Muller: z0 = sqrt(-2 ln u1) cos(2 pi u2),
//                  z1 = sqrt(-2 ln u1) sin(2 pi u2), with
//                  u1 = ((next() >> 11) + 1) * 2^-53 in (0, 1], u2 = uniform01();
//                  z1 is cached and returned by the following call
//   poisson(mean)  Knuth multiplication: count draws until the product of
//                  uniform01() values falls below exp(-mean)
//   below(n)       next() % n
//   shuffle        Fisher-Yates from the back using below()
//
// Draw order is part of the reproducibility contract of every file format.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  double normal(double mean = 0.0, double stddev = 1.0) {
    if (have_cached_) {
      have_cached_ = false;
      return mean + stddev * cached_;
    }
    double u1 = (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return mean + stddev * r * std::cos(a);
  }

  int poisson(double mean) {
    double limit = std::exp(-mean);
    double prod = 1.0;
    int k = 0;
    for (;;) {
      prod *= uniform01();
      if (prod <= limit) return k;
      ++k;
    }
  }

  bool bernoulli(double p) { return uniform01() < p; }

  std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace gamot
