#pragma once

#include "gamot/affinity.hpp"
#include "gamot/assoc.hpp"
#include "gamot/model_config.hpp"

namespace gamot {

// One simultaneous round of bipartite message passing over the fused score
// matrix, followed by a pairwise relation scorer that produces the final
// association logits. Parameter count is independent of problem size.
class GnnModule {
 public:
  GnnModule(const ModelConfig& cfg, Rng& rng);

  const ModelConfig& config() const { return cfg_; }
  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;

  struct Updated {
    Tape::Id traj;  // I x C
    Tape::Id det;   // J x C
  };

  // Row-normalizes the scores in both directions and pulls each side's
  // features through the other side, both from the pre-update features:
  //   traj' = relu(softmax_rows(S)  * det_feats  * W)
  //   det'  = relu(softmax_rows(S^T) * traj_feats * W')
  // with W' == W when the embedding is shared.
  Updated feature_update(Tape& tape, Tape::Id fused, Tape::Id traj_feats, Tape::Id det_feats);

  // Scores every pair from the difference of updated features,
  // trajectory minus detection, through a small dense stack. Returns I x J.
  Tape::Id relation_update(Tape& tape, Updated updated);

  Tape::Id forward(Tape& tape, Tape::Id fused, Tape::Id traj_feats, Tape::Id det_feats);

  // Value-level forward over a snapshotted problem.
  Tensor forward(const AssociationProblem& problem);

 private:
  ModelConfig cfg_;
  Parameter embed;  // D x C
  std::optional<Parameter> embed_det;  // only when not shared
  LinearLayer rel1, rel2;
};

}  // namespace gamot
