#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "gamot/tensor.hpp"

namespace gamot {

// Axis-aligned box; (x, y) is the top-left corner, w/h strictly positive.
struct BoundingBox {
  double x = 0, y = 0, w = 0, h = 0;

  double cx() const { return x + 0.5 * w; }
  double cy() const { return y + 0.5 * h; }
  bool valid() const;
};

double iou(const BoundingBox& a, const BoundingBox& b);

// Fixed-length box history, oldest first. Shorter histories are padded by
// repeating the oldest box.
class Tracklet {
 public:
  static Tracklet padded(std::span<const BoundingBox> history, int length);

  const std::vector<BoundingBox>& boxes() const { return boxes_; }
  int length() const { return static_cast<int>(boxes_.size()); }
  const BoundingBox& newest() const { return boxes_.back(); }

 private:
  explicit Tracklet(std::vector<BoundingBox> boxes) : boxes_(std::move(boxes)) {}
  std::vector<BoundingBox> boxes_;
};

// Trajectory-side input to association: recent box history plus the
// descriptor of the last observation.
struct TrackSnapshot {
  Tracklet tracklet;
  std::vector<double> descriptor;
};

// Detection-side input: one box and its descriptor.
struct Detection {
  BoundingBox box;
  std::vector<double> descriptor;
};

// One emitted (or ground-truth) box of an identified track.
struct TrackRow {
  int frame = 0;
  std::int64_t id = 0;
  BoundingBox box;
};

// All pairwise scores for one frame transition: I trajectories x J
// detections, with the per-stream matrices, the fused matrix and the node
// features both sides carry into the relation stage.
struct AssociationProblem {
  int trajectory_count = 0;  // I
  int detection_count = 0;   // J
  Tensor appearance;         // I x J
  Tensor motion;             // I x J
  Tensor fused;              // I x J
  Tensor traj_features;      // I x D
  Tensor det_features;       // J x D

  void validate() const;
};

// Binary one-to-one supervision target. Unmatched rows are deaths, unmatched
// columns are births.
class GroundTruthMatrix {
 public:
  GroundTruthMatrix(int rows, int cols, std::vector<std::pair<int, int>> matches);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int match_count() const { return static_cast<int>(matches_.size()); }  // k
  const std::vector<std::pair<int, int>>& matches() const { return matches_; }
  bool row_matched(int i) const { return row_matched_[i]; }
  bool col_matched(int j) const { return col_matched_[j]; }
  double entry(int i, int j) const;
  Tensor dense() const;

 private:
  int rows_, cols_;
  std::vector<std::pair<int, int>> matches_;  // sorted by row index
  std::vector<bool> row_matched_, col_matched_;
};

GroundTruthMatrix build_ground_truth(std::vector<std::pair<int, int>> matches, int rows, int cols);

// Hard assignment decoded from a score matrix: matched pairs O, unmatched
// column indices B (births), unmatched row indices D (deaths).
struct AssociationResult {
  std::vector<std::pair<int, int>> matches;  // sorted by row
  std::vector<int> births;                   // sorted
  std::vector<int> deaths;                   // sorted

  void validate(int rows, int cols) const;
};

// Repeatedly extracts the largest remaining entry while it is strictly
// positive, removing its row and column; ties prefer the smallest row, then
// the smallest column. Exactly-zero scores do not match. Rows left over go to
// deaths, columns to births. Non-finite entries are rejected.
AssociationResult interpret_association(const Tensor& scores);

}  // namespace gamot
