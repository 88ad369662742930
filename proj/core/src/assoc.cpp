#include "gamot/assoc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gamot {

bool BoundingBox::valid() const {
  return std::isfinite(x) && std::isfinite(y) && std::isfinite(w) && std::isfinite(h) && w > 0.0 &&
         h > 0.0;
}

double iou(const BoundingBox& a, const BoundingBox& b) {
  double x1 = std::max(a.x, b.x);
  double y1 = std::max(a.y, b.y);
  double x2 = std::min(a.x + a.w, b.x + b.w);
  double y2 = std::min(a.y + a.h, b.y + b.h);
  double inter = std::max(0.0, x2 - x1) * std::max(0.0, y2 - y1);
  double uni = a.w * a.h + b.w * b.h - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

Tracklet Tracklet::padded(std::span<const BoundingBox> history, int length) {
  if (history.empty()) throw std::invalid_argument("Tracklet::padded: empty history");
  if (length <= 0) throw std::invalid_argument("Tracklet::padded: non-positive length");
  for (const BoundingBox& b : history)
    if (!b.valid()) throw std::invalid_argument("Tracklet::padded: invalid box");
  std::vector<BoundingBox> boxes;
  boxes.reserve(length);
  int missing = length - static_cast<int>(history.size());
  for (int i = 0; i < missing; ++i) boxes.push_back(history.front());
  int from = std::max(0, static_cast<int>(history.size()) - length);
  for (std::size_t i = from; i < history.size(); ++i) boxes.push_back(history[i]);
  return Tracklet(std::move(boxes));
}

void AssociationProblem::validate() const {
  if (trajectory_count < 1 || detection_count < 1)
    throw std::invalid_argument("AssociationProblem: both sides must be non-empty");
  auto check = [&](const Tensor& t, int r, int c, const char* name) {
    if (t.rows() != r || t.cols() != c)
      throw std::invalid_argument(std::string("AssociationProblem: bad shape for ") + name + ": " +
                                  t.shape_str());
    if (!t.all_finite())
      throw std::invalid_argument(std::string("AssociationProblem: non-finite ") + name);
  };
  check(appearance, trajectory_count, detection_count, "appearance");
  check(motion, trajectory_count, detection_count, "motion");
  check(fused, trajectory_count, detection_count, "fused");
  if (traj_features.rows() != trajectory_count || det_features.rows() != detection_count ||
      traj_features.cols() != det_features.cols())
    throw std::invalid_argument("AssociationProblem: feature shape mismatch");
}

GroundTruthMatrix::GroundTruthMatrix(int rows, int cols, std::vector<std::pair<int, int>> matches)
    : rows_(rows), cols_(cols), matches_(std::move(matches)) {
  if (rows_ < 1 || cols_ < 1) throw std::invalid_argument("GroundTruthMatrix: empty shape");
  row_matched_.assign(rows_, false);
  col_matched_.assign(cols_, false);
  for (auto [i, j] : matches_) {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
      throw std::invalid_argument("GroundTruthMatrix: match out of range");
    if (row_matched_[i] || col_matched_[j])
      throw std::invalid_argument("GroundTruthMatrix: duplicate row or column in matches");
    row_matched_[i] = true;
    col_matched_[j] = true;
  }
  std::sort(matches_.begin(), matches_.end());
}

double GroundTruthMatrix::entry(int i, int j) const {
  for (auto [r, c] : matches_)
    if (r == i) return c == j ? 1.0 : 0.0;
  return 0.0;
}

Tensor GroundTruthMatrix::dense() const {
  Tensor t = Tensor::zeros(rows_, cols_);
  for (auto [i, j] : matches_) t.at(i, j) = 1.0;
  return t;
}

GroundTruthMatrix build_ground_truth(std::vector<std::pair<int, int>> matches, int rows, int cols) {
  return GroundTruthMatrix(rows, cols, std::move(matches));
}

void AssociationResult::validate(int rows, int cols) const {
  std::vector<bool> row_used(rows, false), col_used(cols, false);
  for (auto [i, j] : matches) {
    if (i < 0 || i >= rows || j < 0 || j >= cols)
      throw std::invalid_argument("AssociationResult: match out of range");
    if (row_used[i] || col_used[j])
      throw std::invalid_argument("AssociationResult: row or column matched twice");
    row_used[i] = true;
    col_used[j] = true;
  }
  for (int d : deaths) {
    if (d < 0 || d >= rows || row_used[d])
      throw std::invalid_argument("AssociationResult: bad death index");
    row_used[d] = true;
  }
  for (int b : births) {
    if (b < 0 || b >= cols || col_used[b])
      throw std::invalid_argument("AssociationResult: bad birth index");
    col_used[b] = true;
  }
  for (int i = 0; i < rows; ++i)
    if (!row_used[i]) throw std::invalid_argument("AssociationResult: row not covered");
  for (int j = 0; j < cols; ++j)
    if (!col_used[j]) throw std::invalid_argument("AssociationResult: column not covered");
}

AssociationResult interpret_association(const Tensor& scores) {
  if (scores.rows() < 1 || scores.cols() < 1)
    throw std::invalid_argument("interpret_association: empty matrix");
  if (!scores.all_finite())
    throw std::invalid_argument("interpret_association: non-finite scores");

  int rows = scores.rows(), cols = scores.cols();
  std::vector<bool> row_done(rows, false), col_done(cols, false);
  AssociationResult result;
  int remaining = std::min(rows, cols);
  while (remaining-- > 0) {
    double best = 0.0;
    int bi = -1, bj = -1;
    for (int i = 0; i < rows; ++i) {
      if (row_done[i]) continue;
      for (int j = 0; j < cols; ++j) {
        if (col_done[j]) continue;
        if (scores.at(i, j) > best) {  // strict: ties keep the earlier (smaller) index
          best = scores.at(i, j);
          bi = i;
          bj = j;
        }
      }
    }
    if (bi < 0) break;  // nothing strictly positive left
    result.matches.emplace_back(bi, bj);
    row_done[bi] = true;
    col_done[bj] = true;
  }
  for (int i = 0; i < rows; ++i)
    if (!row_done[i]) result.deaths.push_back(i);
  for (int j = 0; j < cols; ++j)
    if (!col_done[j]) result.births.push_back(j);
  std::sort(result.matches.begin(), result.matches.end());
  return result;
}

}  // namespace gamot
