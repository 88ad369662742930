#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "gamot/rng.hpp"

using namespace gamot;

TEST_CASE("same seed reproduces the exact stream") {
  Rng a(123), b(123);
  for (int i = 0; i < 200; ++i) {
    CHECK(a.uniform01() == b.uniform01());
    CHECK(a.normal(0.0, 1.0) == b.normal(0.0, 1.0));
    CHECK(a.below(17) == b.below(17));
  }
  CHECK(a.poisson(2.5) == b.poisson(2.5));
}

TEST_CASE("different seeds diverge") {
  Rng a(1), b(2);
  int equal = 0;
  for (int i = 0; i < 100; ++i) equal += a.uniform01() == b.uniform01();
  CHECK(equal < 5);
}

TEST_CASE("uniform01 stays in the half-open unit interval") {
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("uniform maps into the requested range") {
  Rng rng(8);
  for (int i = 0; i < 1000; ++i) {
    double v = rng.uniform(-3.0, 5.0);
    CHECK(v >= -3.0);
    CHECK(v < 5.0);
  }
}

TEST_CASE("below is always a valid index") {
  Rng rng(9);
  for (int i = 0; i < 1000; ++i) CHECK(rng.below(13) < 13);
}

TEST_CASE("bernoulli degenerate probabilities") {
  Rng rng(10);
  for (int i = 0; i < 100; ++i) {
    CHECK_FALSE(rng.bernoulli(0.0));
    CHECK(rng.bernoulli(1.0));
  }
}

TEST_CASE("shuffle permutes without loss") {
  Rng rng(11);
  std::vector<int> v(50);
  for (int i = 0; i < 50; ++i) v[i] = i;
  std::vector<int> shuffled = v;
  rng.shuffle(shuffled);
  CHECK(shuffled != v);  // 50! makes identity astronomically unlikely
  std::sort(shuffled.begin(), shuffled.end());
  CHECK(shuffled == v);
}

TEST_CASE("normal moments are plausible") {
  Rng rng(12);
  const int n = 20000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    double x = rng.normal(1.0, 2.0);
    sum += x;
    sq += x * x;
  }
  double mean = sum / n;
  double var = sq / n - mean * mean;
  CHECK(std::abs(mean - 1.0) < 0.05);      // ~3.5 standard errors
  CHECK(std::abs(var - 4.0) < 0.25);
}

TEST_CASE("poisson mean is plausible") {
  Rng rng(13);
  const int n = 20000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += static_cast<double>(rng.poisson(3.0));
  CHECK(std::abs(sum / n - 3.0) < 0.05);
}

TEST_CASE("poisson of zero rate is zero") {
  Rng rng(14);
  for (int i = 0; i < 50; ++i) CHECK(rng.poisson(0.0) == 0);
}
