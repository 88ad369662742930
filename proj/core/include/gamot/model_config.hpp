#pragma once

namespace gamot {

// Shared network dimensions. feature_dim() is the per-node feature width
// carried into the relation stage.
struct ModelConfig {
  int descriptor_dim = 16;   // appearance descriptor input width
  int appearance_dim = 32;   // appearance feature width
  int motion_dim = 32;       // motion feature width (also the recurrent state)
  int head_hidden = 64;      // hidden width of the three pairwise score heads
  int embed_dim = 64;        // width of the message-passing embedding
  int relation_hidden = 64;  // hidden width of the relation scorer
  int tracklet_len = 5;      // boxes per trajectory history window
  double arena_w = 1.0;      // box normalization extent
  double arena_h = 1.0;
  bool shared_embedding = true;  // one embedding matrix for both directions

  int feature_dim() const { return appearance_dim + motion_dim; }
};

}  // namespace gamot
