#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "gamot/affinity.hpp"
#include "gamot/gnn.hpp"
#include "gamot/model_config.hpp"

namespace gamot {

// The full scorer: two-stream affinities feeding one message-passing round
// and a relation stage. Seed fixes every initial weight; construction order
// (affinity first, then the message-passing stage) is part of that contract.
class AssociationModel {
 public:
  AssociationModel(const ModelConfig& cfg, std::uint64_t seed);

  const ModelConfig& config() const { return cfg_; }
  AffinityNet& affinity() { return affinity_; }
  GnnModule& gnn() { return gnn_; }

  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;
  std::vector<Parameter*> affinity_parameters() { return affinity_.parameters(); }

  struct Forward {
    Tape::Id appearance;      // I x J
    Tape::Id motion;          // I x J
    Tape::Id fused;           // I x J
    Tape::Id association;     // I x J, valid only when with_relation
    bool has_association;
    Tape::Id traj_features;   // I x D
    Tape::Id det_features;    // J x D
  };
  // Both sides must be non-empty. with_relation=false stops after the fused
  // head (the direct-affinity ablation).
  Forward forward(Tape& tape, std::span<const TrackSnapshot> trajectories,
                  std::span<const Detection> detections, bool with_relation = true);

  // Value-level scores on a fresh tape. Throw on an empty side.
  Tensor association_matrix(std::span<const TrackSnapshot> trajectories,
                            std::span<const Detection> detections);
  Tensor affinity_matrix(std::span<const TrackSnapshot> trajectories,
                         std::span<const Detection> detections);

  void save(const std::string& path) const;
  void load(const std::string& path);

 private:
  AssociationModel(const ModelConfig& cfg, Rng rng);

  ModelConfig cfg_;
  AffinityNet affinity_;
  GnnModule gnn_;
};

}  // namespace gamot
