#pragma once

#include <optional>
#include <span>

#include "gamot/assoc.hpp"
#include "gamot/model_config.hpp"
#include "gamot/rng.hpp"
#include "gamot/tape.hpp"

namespace gamot {

enum class StreamHead { Appearance, Motion };

struct LinearLayer {
  Parameter weight;  // in x out
  Parameter bias;    // 1 x out

  LinearLayer(const std::string& name, int in, int out, Rng& rng);
  Tape::Id apply(Tape& tape, Tape::Id x);
};

// Two-stream pairwise scorer. The motion stream runs a recurrent unit over
// the normalized box history of each trajectory and a small dense stack over
// each detection box; the appearance stream runs one shared encoder over the
// descriptors of both sides. Three heads score trajectory/detection pairs:
// appearance, motion, and their fusion.
class AffinityNet {
 public:
  AffinityNet(const ModelConfig& cfg, Rng& rng);

  const ModelConfig& config() const { return cfg_; }
  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;

  struct Forward {
    Tape::Id appearance;     // I x J
    Tape::Id motion;         // I x J
    Tape::Id fused;          // I x J
    Tape::Id traj_features;  // I x D
    Tape::Id det_features;   // J x D
  };
  // Whole-problem forward on a tape, batched across rows; both sides must be
  // non-empty.
  Forward forward(Tape& tape, std::span<const TrackSnapshot> trajectories,
                  std::span<const Detection> detections);

  // Single-item conveniences (fresh tape per call, values only). The batched
  // path computes each row independently, so these agree bit-for-bit.
  Tensor encode_motion(const Tracklet& tracklet);
  Tensor encode_detection_box(const BoundingBox& box);
  Tensor encode_appearance(std::span<const double> descriptor);
  double pairwise_affinity(const Tensor& fi, const Tensor& fj, StreamHead head);
  double fuse(double appearance_score, double motion_score);

  // Runs forward and snapshots the resulting matrices and features. Empty on
  // an empty side; the caller decides how to treat a one-sided frame.
  std::optional<AssociationProblem> build_problem(std::span<const TrackSnapshot> trajectories,
                                                  std::span<const Detection> detections);

 private:
  Tape::Id motion_states(Tape& tape, std::span<const TrackSnapshot> trajectories);
  Tape::Id box_encoder(Tape& tape, Tape::Id boxes);
  Tape::Id appearance_encoder(Tape& tape, Tape::Id descriptors);
  Tape::Id head(Tape& tape, LinearLayer& h1, LinearLayer& h2, Tape::Id pair_rows);
  Tensor normalized_boxes(std::span<const BoundingBox> boxes) const;

  ModelConfig cfg_;
  // Recurrent unit, gate order [input, forget, cell, output].
  Parameter lstm_w_in;   // 4 x 4H
  Parameter lstm_w_rec;  // H x 4H
  Parameter lstm_bias;   // 1 x 4H, forget block starts at 1
  LinearLayer box_fc1, box_fc2;
  LinearLayer app_fc1, app_fc2;
  LinearLayer head_app1, head_app2;
  LinearLayer head_mot1, head_mot2;
  LinearLayer head_fuse1, head_fuse2;
};

}  // namespace gamot
