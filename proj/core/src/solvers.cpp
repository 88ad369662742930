#include "gamot/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gamot {

namespace {

void check_weights(const Tensor& w, const char* op) {
  if (w.rows() < 1 || w.cols() < 1)
    throw std::invalid_argument(std::string(op) + ": empty matrix");
  if (!w.all_finite()) throw std::invalid_argument(std::string(op) + ": non-finite weights");
}

// Minimum-cost assignment of all rows (requires rows <= cols), potentials
// formulation with one Dijkstra-like augmentation per row. cost(i, j) is
// supplied as a callable so callers can negate or transpose without copying.
template <typename Cost>
std::vector<int> min_cost_rows(int n, int m, Cost cost) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);  // p[j]: row matched to column j (1-based)
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      int i0 = p[j0], j1 = -1;
      double delta = inf;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= m; ++j)
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

}  // namespace

ExactAssignment hungarian(const Tensor& weights) {
  check_weights(weights, "hungarian");
  int rows = weights.rows(), cols = weights.cols();
  ExactAssignment result;
  if (rows <= cols) {
    auto rc = min_cost_rows(rows, cols, [&](int i, int j) { return -weights.at(i, j); });
    for (int i = 0; i < rows; ++i) result.pairs.emplace_back(i, rc[i]);
  } else {
    auto cr = min_cost_rows(cols, rows, [&](int j, int i) { return -weights.at(i, j); });
    for (int j = 0; j < cols; ++j) result.pairs.emplace_back(cr[j], j);
    std::sort(result.pairs.begin(), result.pairs.end());
  }
  for (auto [i, j] : result.pairs) result.objective += weights.at(i, j);
  return result;
}

ExactAssignment brute_force(const Tensor& weights) {
  check_weights(weights, "brute_force");
  int rows = weights.rows(), cols = weights.cols();
  if (std::min(rows, cols) > 8)
    throw std::invalid_argument("brute_force: min(rows, cols) must be <= 8");

  // Enumerate over the smaller side in index order; candidate pair lists are
  // produced in lexicographic order, so keeping the first strict improvement
  // yields the lexicographically smallest optimal matching.
  bool by_rows = rows <= cols;
  int small = by_rows ? rows : cols;
  int large = by_rows ? cols : rows;

  ExactAssignment best;
  best.objective = -std::numeric_limits<double>::infinity();
  std::vector<int> pick(small, -1);
  std::vector<bool> used(large, false);

  auto emit = [&]() {
    double obj = 0.0;
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(small);
    for (int s = 0; s < small; ++s) {
      int i = by_rows ? s : pick[s];
      int j = by_rows ? pick[s] : s;
      pairs.emplace_back(i, j);
      obj += weights.at(i, j);
    }
    std::sort(pairs.begin(), pairs.end());
    if (obj > best.objective) {
      best.objective = obj;
      best.pairs = std::move(pairs);
    }
  };

  auto rec = [&](auto&& self, int s) -> void {
    if (s == small) {
      emit();
      return;
    }
    for (int t = 0; t < large; ++t) {
      if (used[t]) continue;
      used[t] = true;
      pick[s] = t;
      self(self, s + 1);
      used[t] = false;
    }
  };
  rec(rec, 0);
  return best;
}

ExactAssignment greedy(const Tensor& weights) {
  check_weights(weights, "greedy");
  int rows = weights.rows(), cols = weights.cols();
  std::vector<bool> used(cols, false);
  ExactAssignment result;
  int left = std::min(rows, cols);
  for (int i = 0; i < rows && left > 0; ++i) {
    int bj = -1;
    double best = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < cols; ++j) {
      if (used[j]) continue;
      if (weights.at(i, j) > best) {
        best = weights.at(i, j);
        bj = j;
      }
    }
    if (bj < 0) break;
    used[bj] = true;
    result.pairs.emplace_back(i, bj);
    result.objective += best;
    --left;
  }
  return result;
}

AssociationResult solve_with_birth_death(const Tensor& weights, double theta) {
  ExactAssignment assignment = hungarian(weights);
  AssociationResult result;
  std::vector<bool> row_used(weights.rows(), false), col_used(weights.cols(), false);
  for (auto [i, j] : assignment.pairs) {
    if (weights.at(i, j) < theta) continue;
    result.matches.emplace_back(i, j);
    row_used[i] = true;
    col_used[j] = true;
  }
  for (int i = 0; i < weights.rows(); ++i)
    if (!row_used[i]) result.deaths.push_back(i);
  for (int j = 0; j < weights.cols(); ++j)
    if (!col_used[j]) result.births.push_back(j);
  return result;
}

}  // namespace gamot
