#include "gamot/gnn.hpp"

#include <cmath>
#include <stdexcept>

namespace gamot {

namespace {

Tensor xavier_uniform(int in, int out, Rng& rng) {
  double bound = std::sqrt(6.0 / (in + out));
  std::vector<double> data(static_cast<std::size_t>(in) * out);
  for (double& v : data) v = rng.uniform(-bound, bound);
  return Tensor::matrix(in, out, std::move(data));
}

}  // namespace

GnnModule::GnnModule(const ModelConfig& cfg, Rng& rng)
    : cfg_(cfg),
      embed("gnn.embed.weight", xavier_uniform(cfg.feature_dim(), cfg.embed_dim, rng)),
      rel1("gnn.relation.fc1", cfg.embed_dim, cfg.relation_hidden, rng),
      rel2("gnn.relation.fc2", cfg.relation_hidden, 1, rng) {
  if (!cfg.shared_embedding)
    embed_det.emplace("gnn.embed_det.weight", xavier_uniform(cfg.feature_dim(), cfg.embed_dim, rng));
}

std::vector<Parameter*> GnnModule::parameters() {
  std::vector<Parameter*> out = {&embed};
  if (embed_det) out.push_back(&*embed_det);
  out.push_back(&rel1.weight);
  out.push_back(&rel1.bias);
  out.push_back(&rel2.weight);
  out.push_back(&rel2.bias);
  return out;
}

std::vector<const Parameter*> GnnModule::parameters() const {
  auto mut = const_cast<GnnModule*>(this)->parameters();
  return std::vector<const Parameter*>(mut.begin(), mut.end());
}

GnnModule::Updated GnnModule::feature_update(Tape& tape, Tape::Id fused, Tape::Id traj_feats,
                                             Tape::Id det_feats) {
  const Tensor& s = tape.value(fused);
  if (tape.value(traj_feats).rows() != s.rows() || tape.value(det_feats).rows() != s.cols())
    throw std::invalid_argument("GnnModule::feature_update: feature/score shape mismatch");
  Tape::Id w_traj = tape.param(embed);
  Tape::Id w_det = embed_det ? tape.param(*embed_det) : w_traj;
  // Both updates read the pre-update features.
  Tape::Id traj_mix = tape.aggregate(tape.row_softmax(fused), det_feats);
  Tape::Id det_mix = tape.aggregate(tape.row_softmax(tape.transpose(fused)), traj_feats);
  Updated out;
  out.traj = tape.relu(tape.matmul(traj_mix, w_traj));
  out.det = tape.relu(tape.matmul(det_mix, w_det));
  return out;
}

Tape::Id GnnModule::relation_update(Tape& tape, Updated updated) {
  int I = tape.value(updated.traj).rows();
  int J = tape.value(updated.det).rows();
  std::vector<int> traj_index(static_cast<std::size_t>(I) * J);
  std::vector<int> det_index(static_cast<std::size_t>(I) * J);
  for (int i = 0; i < I; ++i)
    for (int j = 0; j < J; ++j) {
      traj_index[static_cast<std::size_t>(i) * J + j] = i;
      det_index[static_cast<std::size_t>(i) * J + j] = j;
    }
  Tape::Id diff = tape.subtract(tape.index_rows(updated.traj, traj_index),
                                tape.index_rows(updated.det, det_index));
  Tape::Id hidden = tape.relu(rel1.apply(tape, diff));
  return tape.reshape(rel2.apply(tape, hidden), I, J);
}

Tape::Id GnnModule::forward(Tape& tape, Tape::Id fused, Tape::Id traj_feats, Tape::Id det_feats) {
  return relation_update(tape, feature_update(tape, fused, traj_feats, det_feats));
}

Tensor GnnModule::forward(const AssociationProblem& problem) {
  problem.validate();
  Tape tape;
  Tape::Id fused = tape.constant(problem.fused);
  Tape::Id traj = tape.constant(problem.traj_features);
  Tape::Id det = tape.constant(problem.det_features);
  return tape.value(forward(tape, fused, traj, det));
}

}  // namespace gamot
