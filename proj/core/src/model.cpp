#include "gamot/model.hpp"

#include <stdexcept>
#include <utility>

#include "gamot/checkpoint.hpp"

namespace gamot {

AssociationModel::AssociationModel(const ModelConfig& cfg, std::uint64_t seed)
    : AssociationModel(cfg, Rng(seed)) {}

// Members initialize in declaration order, so the affinity stage consumes the
// seeded stream first and the message-passing stage continues it.
AssociationModel::AssociationModel(const ModelConfig& cfg, Rng rng)
    : cfg_(cfg), affinity_(cfg, rng), gnn_(cfg, rng) {}

std::vector<Parameter*> AssociationModel::parameters() {
  std::vector<Parameter*> out = affinity_.parameters();
  std::vector<Parameter*> g = gnn_.parameters();
  out.insert(out.end(), g.begin(), g.end());
  return out;
}

std::vector<const Parameter*> AssociationModel::parameters() const {
  std::vector<const Parameter*> out = affinity_.parameters();
  std::vector<const Parameter*> g = gnn_.parameters();
  out.insert(out.end(), g.begin(), g.end());
  return out;
}

AssociationModel::Forward AssociationModel::forward(Tape& tape,
                                                    std::span<const TrackSnapshot> trajectories,
                                                    std::span<const Detection> detections,
                                                    bool with_relation) {
  AffinityNet::Forward aff = affinity_.forward(tape, trajectories, detections);
  Forward out;
  out.appearance = aff.appearance;
  out.motion = aff.motion;
  out.fused = aff.fused;
  out.traj_features = aff.traj_features;
  out.det_features = aff.det_features;
  out.has_association = with_relation;
  out.association = with_relation
                        ? gnn_.forward(tape, aff.fused, aff.traj_features, aff.det_features)
                        : aff.fused;
  return out;
}

namespace {
void require_two_sided(std::span<const TrackSnapshot> trajectories,
                       std::span<const Detection> detections, const char* what) {
  if (trajectories.empty() || detections.empty())
    throw std::invalid_argument(std::string(what) + ": both sides must be non-empty");
}
}  // namespace

Tensor AssociationModel::association_matrix(std::span<const TrackSnapshot> trajectories,
                                            std::span<const Detection> detections) {
  require_two_sided(trajectories, detections, "association_matrix");
  Tape tape;
  Forward f = forward(tape, trajectories, detections, true);
  return tape.value(f.association);
}

Tensor AssociationModel::affinity_matrix(std::span<const TrackSnapshot> trajectories,
                                         std::span<const Detection> detections) {
  require_two_sided(trajectories, detections, "affinity_matrix");
  Tape tape;
  Forward f = forward(tape, trajectories, detections, false);
  return tape.value(f.fused);
}

void AssociationModel::save(const std::string& path) const {
  save_checkpoint(path, parameters());
}

void AssociationModel::load(const std::string& path) {
  std::vector<Parameter*> params = parameters();
  load_checkpoint_into(path, params);
}

}  // namespace gamot
