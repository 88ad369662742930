#pragma once

#include <map>
#include <string>
#include <vector>

#include "gamot/tape.hpp"

namespace gamot {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 5e-4;  // decoupled, applied as value -= lr * wd * value
};

// First/second-moment state keyed by parameter name, with bias correction.
// step() consumes and zeroes the gradients it applied.
class AdamState {
 public:
  explicit AdamState(AdamConfig cfg = {}) : cfg_(cfg) {}

  void step(const std::vector<Parameter*>& params) { step(params, cfg_.learning_rate); }
  void step(const std::vector<Parameter*>& params, double learning_rate);

  long iterations() const { return iterations_; }
  const AdamConfig& config() const { return cfg_; }

 private:
  struct Moments {
    Tensor m, v;
  };

  AdamConfig cfg_;
  std::map<std::string, Moments> moments_;
  long iterations_ = 0;
};

// Scales all gradients by max_norm / norm when the global L2 norm exceeds
// max_norm. Returns the pre-clip norm.
double clip_global_norm(const std::vector<Parameter*>& params, double max_norm);

}  // namespace gamot
