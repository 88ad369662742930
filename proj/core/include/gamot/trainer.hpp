#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gamot/adam.hpp"
#include "gamot/loss.hpp"
#include "gamot/model.hpp"
#include "gamot/scenario.hpp"

namespace gamot {

// Full:       every score matrix supervised, relation output gets the
//             structured matrix loss.
// NoAssembly: relation output only (score-matrix weights set to zero).
// NoGnn:      relation stage never runs; supervision is the element losses
//             on the three affinity matrices (the structured loss needs a
//             relation output, so it is absent here).
enum class TrainMode { Full, NoAssembly, NoGnn };

struct TrainerConfig {
  double learning_rate = 1e-3;
  double decay_factor = 10.0;  // divide the rate by this every interval
  int decay_interval = 2000;   // iterations per decay step
  int iterations = 5000;
  double clip_norm = 5.0;  // global gradient norm ceiling, <=0 disables
  double weight_decay = 5e-4;
  std::uint64_t shuffle_seed = 1;  // epoch-order stream
  TrainMode mode = TrainMode::Full;
  LossConfig loss;
};

// learning_rate / decay_factor^floor(iteration / decay_interval)
double lr_schedule(const TrainerConfig& cfg, int iteration);

// One row per iteration; the component columns hold raw, unweighted values.
struct HistoryRow {
  int iteration = 0;
  double lr = 0.0;
  double total = 0.0;
  double appearance = 0.0;
  double motion = 0.0;
  double fused = 0.0;
  double association = 0.0;  // zero when the relation stage is off
};

struct TrainResult {
  std::vector<HistoryRow> history;
  double initial_loss = 0.0;
  double final_loss = 0.0;
};

// Single-instance steps in epoch order, reshuffled each pass from one seeded
// stream. Throws on a non-finite loss or gradient.
class Trainer {
 public:
  Trainer(AssociationModel& model, TrainerConfig cfg);

  const TrainerConfig& config() const { return cfg_; }

  HistoryRow step(const TrainingInstance& instance, int iteration);
  TrainResult run(std::span<const TrainingInstance> instances);

 private:
  AssociationModel& model_;
  TrainerConfig cfg_;
  AdamState adam_;
  Rng shuffle_rng_;
};

// Header: iteration,lr,loss_total,loss_A,loss_M,loss_S,loss_Y
void write_history_csv(const std::string& path, std::span<const HistoryRow> rows);

struct ModelGradCheckReport {
  double max_rel_error = 0.0;
  int coords_checked = 0;
  int failures = 0;
  bool pass = true;
  std::string worst_parameter;
  int worst_coord = -1;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
};

// Central-difference check of the whole pipeline: d(assembled loss)/dθ on
// `samples` seeded parameter coordinates, against one backward pass.
// Restores values and leaves gradients zeroed.
ModelGradCheckReport check_model_gradients(AssociationModel& model,
                                           const TrainingInstance& instance,
                                           const LossConfig& loss_cfg, int samples,
                                           double tolerance, std::uint64_t seed,
                                           double step = 1e-5);

}  // namespace gamot
