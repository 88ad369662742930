#include <cmath>
#include <vector>

#include "doctest.h"
#include "gamot/rng.hpp"
#include "gamot/solvers.hpp"

using namespace gamot;

namespace {

Tensor random_weights(Rng& rng, int rows, int cols) {
  Tensor t = Tensor::zeros(rows, cols);
  for (double& v : t.data()) v = rng.uniform(-1.0, 1.0);
  return t;
}

}  // namespace

TEST_CASE("hungarian picks the diagonal of an identity-reward matrix") {
  ExactAssignment a = hungarian(Tensor::matrix(2, 2, {1, 0, 0, 1}));
  CHECK(a.objective == doctest::Approx(2.0).epsilon(1e-12));
  REQUIRE(a.pairs.size() == 2);
  CHECK(a.pairs[0] == std::pair<int, int>{0, 0});
  CHECK(a.pairs[1] == std::pair<int, int>{1, 1});
}

TEST_CASE("hungarian on a uniform matrix returns the lexicographic matching") {
  ExactAssignment a = hungarian(Tensor::matrix(2, 2, {0, 0, 0, 0}));
  CHECK(a.objective == 0.0);
  REQUIRE(a.pairs.size() == 2);
  CHECK(a.pairs[0] == std::pair<int, int>{0, 0});
  CHECK(a.pairs[1] == std::pair<int, int>{1, 1});
}

TEST_CASE("brute force on hand cases") {
  ExactAssignment one = brute_force(Tensor::matrix(1, 1, {3}));
  CHECK(one.objective == 3.0);
  REQUIRE(one.pairs.size() == 1);
  CHECK(one.pairs[0] == std::pair<int, int>{0, 0});

  // Both matchings score 5; the tie keeps the lexicographically smaller list.
  ExactAssignment tied = brute_force(Tensor::matrix(2, 2, {1, 2, 3, 4}));
  CHECK(tied.objective == doctest::Approx(5.0).epsilon(1e-12));
  REQUIRE(tied.pairs.size() == 2);
  CHECK(tied.pairs[0] == std::pair<int, int>{0, 0});
  CHECK(tied.pairs[1] == std::pair<int, int>{1, 1});
}

TEST_CASE("rectangular matchings have size min(rows, cols)") {
  Rng rng(55);
  ExactAssignment tall = brute_force(random_weights(rng, 3, 2));
  CHECK(tall.pairs.size() == 2);
  ExactAssignment wide = hungarian(random_weights(rng, 2, 5));
  CHECK(wide.pairs.size() == 2);
}

TEST_CASE("brute force refuses oversized inputs") {
  CHECK_THROWS(brute_force(Tensor::zeros(9, 9)));
  CHECK_NOTHROW(brute_force(Tensor::zeros(8, 2)));
  CHECK_NOTHROW(brute_force(Tensor::zeros(2, 12)));  // min side caps the blowup
}

TEST_CASE("hungarian equals brute force across seeded rectangles") {
  Rng rng(1234);
  for (int rows = 1; rows <= 4; ++rows)
    for (int cols = 1; cols <= 4; ++cols)
      for (int trial = 0; trial < 200; ++trial) {
        Tensor w = random_weights(rng, rows, cols);
        ExactAssignment h = hungarian(w);
        ExactAssignment b = brute_force(w);
        CAPTURE(rows);
        CAPTURE(cols);
        CAPTURE(trial);
        CHECK(std::abs(h.objective - b.objective) <= 1e-9);
        CHECK(h.pairs.size() == b.pairs.size());
      }
}

TEST_CASE("adding a row constant shifts the objective without changing the matching") {
  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    Tensor w = random_weights(rng, 3, 3);
    ExactAssignment base = hungarian(w);
    Tensor shifted = w;
    const double c = 2.75;
    for (int j = 0; j < 3; ++j) shifted.at(1, j) += c;
    ExactAssignment moved = hungarian(shifted);
    CHECK(moved.pairs == base.pairs);
    CHECK(moved.objective == doctest::Approx(base.objective + c).epsilon(1e-9));
  }
}

TEST_CASE("greedy on hand cases") {
  ExactAssignment id = greedy(Tensor::matrix(2, 2, {1, 0, 0, 1}));
  CHECK(id.objective == doctest::Approx(2.0).epsilon(1e-12));
  REQUIRE(id.pairs.size() == 2);
  CHECK(id.pairs[0] == std::pair<int, int>{0, 0});

  // Greedy grabs the 3 in row 0 first and strands row 1 with the 0 cell.
  ExactAssignment trap = greedy(Tensor::matrix(2, 2, {2, 3, 0, 3}));
  CHECK(trap.objective == doctest::Approx(3.0).epsilon(1e-12));
  REQUIRE(trap.pairs.size() == 2);
  CHECK(trap.pairs[0] == std::pair<int, int>{0, 1});
  CHECK(trap.pairs[1] == std::pair<int, int>{1, 0});
}

TEST_CASE("greedy never beats hungarian") {
  Rng rng(4321);
  for (int trial = 0; trial < 300; ++trial) {
    int rows = 1 + static_cast<int>(rng.below(4));
    int cols = 1 + static_cast<int>(rng.below(4));
    Tensor w = random_weights(rng, rows, cols);
    CHECK(greedy(w).objective <= hungarian(w).objective + 1e-12);
  }
}

TEST_CASE("birth-death thresholding on hand cases") {
  AssociationResult keep = solve_with_birth_death(Tensor::matrix(1, 1, {0.9}), 0.5);
  REQUIRE(keep.matches.size() == 1);
  CHECK(keep.matches[0] == std::pair<int, int>{0, 0});
  CHECK(keep.deaths.empty());
  CHECK(keep.births.empty());

  AssociationResult drop = solve_with_birth_death(Tensor::matrix(1, 1, {0.1}), 0.5);
  CHECK(drop.matches.empty());
  CHECK(drop.deaths == std::vector<int>{0});
  CHECK(drop.births == std::vector<int>{0});

  AssociationResult mixed =
      solve_with_birth_death(Tensor::matrix(2, 2, {0.9, 0.2, 0.2, 0.3}), 0.5);
  REQUIRE(mixed.matches.size() == 1);
  CHECK(mixed.matches[0] == std::pair<int, int>{0, 0});
  CHECK(mixed.deaths == std::vector<int>{1});
  CHECK(mixed.births == std::vector<int>{1});
}

TEST_CASE("birth-death output always validates") {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    int rows = 1 + static_cast<int>(rng.below(5));
    int cols = 1 + static_cast<int>(rng.below(5));
    Tensor w = Tensor::zeros(rows, cols);
    for (double& v : w.data()) v = rng.uniform01();
    AssociationResult r = solve_with_birth_death(w, 0.5);
    CHECK_NOTHROW(r.validate(rows, cols));
  }
}
