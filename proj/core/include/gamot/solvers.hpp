#pragma once

#include "gamot/assoc.hpp"
#include "gamot/tensor.hpp"

namespace gamot {

// A maximum-total-weight one-to-one matching of size min(rows, cols).
struct ExactAssignment {
  std::vector<std::pair<int, int>> pairs;  // sorted by row
  double objective = 0.0;
};

// Optimal assignment by the O(n^3) potentials method, run on negated weights
// so maximization reduces to the classical minimization kernel. Rectangular
// inputs are handled by solving the transposed problem when rows > cols,
// which is equivalent to padding with zero-weight rows/columns. Deterministic
// for tied optima.
ExactAssignment hungarian(const Tensor& weights);

// Exhaustive enumeration of all maximal matchings; requires
// min(rows, cols) <= 8. Tied objectives keep the lexicographically smallest
// pair list, so the result is a deterministic oracle for hungarian().
ExactAssignment brute_force(const Tensor& weights);

// Row-order argmax with conflict suppression: each row takes the best still
// free column (ties: smallest column). Objective is never above hungarian's.
ExactAssignment greedy(const Tensor& weights);

// hungarian() followed by thresholding: matched pairs with weight < theta
// are dropped; dropped and never-matched rows become deaths, columns births.
AssociationResult solve_with_birth_death(const Tensor& weights, double theta);

}  // namespace gamot
