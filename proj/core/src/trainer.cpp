#include "gamot/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "gamot/text.hpp"

namespace gamot {

double lr_schedule(const TrainerConfig& cfg, int iteration) {
  if (iteration < 0) throw std::invalid_argument("lr_schedule: negative iteration");
  int steps = cfg.decay_interval > 0 ? iteration / cfg.decay_interval : 0;
  return cfg.learning_rate / std::pow(cfg.decay_factor, static_cast<double>(steps));
}

Trainer::Trainer(AssociationModel& model, TrainerConfig cfg)
    : model_(model),
      cfg_(cfg),
      adam_(AdamConfig{cfg.learning_rate, 0.9, 0.999, 1e-8, cfg.weight_decay}),
      shuffle_rng_(cfg.shuffle_seed) {}

HistoryRow Trainer::step(const TrainingInstance& instance, int iteration) {
  Tape tape;
  bool relation = cfg_.mode != TrainMode::NoGnn;
  AssociationModel::Forward f =
      model_.forward(tape, instance.trajectories, instance.detections, relation);

  HistoryRow row;
  row.iteration = iteration;
  row.lr = lr_schedule(cfg_, iteration);

  Tape::Id total;
  if (relation) {
    LossConfig lc = cfg_.loss;
    if (cfg_.mode == TrainMode::NoAssembly)
      lc.lambda_appearance = lc.lambda_motion = lc.lambda_fused = 0.0;
    AssembledTerms terms =
        assembled_loss(tape, f.appearance, f.motion, f.fused, f.association, instance.target, lc);
    total = terms.total;
    row.appearance = tape.value(terms.appearance).item();
    row.motion = tape.value(terms.motion).item();
    row.fused = tape.value(terms.fused).item();
    row.association = tape.value(terms.association).item();
  } else {
    // With no relation stage there is no terminal output to give the
    // structured loss to, so supervision is the element losses on all three
    // affinity matrices and nothing more.
    Tape::Id e_app = element_loss(tape, f.appearance, instance.target, cfg_.loss.positive_weight);
    Tape::Id e_mot = element_loss(tape, f.motion, instance.target, cfg_.loss.positive_weight);
    Tape::Id e_fused = element_loss(tape, f.fused, instance.target, cfg_.loss.positive_weight);
    total = tape.add(tape.add(tape.scale(e_app, cfg_.loss.lambda_appearance),
                              tape.scale(e_mot, cfg_.loss.lambda_motion)),
                     tape.scale(e_fused, cfg_.loss.lambda_fused));
    row.appearance = tape.value(e_app).item();
    row.motion = tape.value(e_mot).item();
    row.fused = tape.value(e_fused).item();
    row.association = 0.0;
  }

  row.total = tape.value(total).item();
  if (!std::isfinite(row.total))
    throw std::runtime_error("trainer: non-finite loss at iteration " + std::to_string(iteration));

  tape.backward(total);
  std::vector<Parameter*> params =
      relation ? model_.parameters() : model_.affinity_parameters();
  for (const Parameter* p : params)
    if (!p->grad.all_finite())
      throw std::runtime_error("trainer: non-finite gradient in " + p->name + " at iteration " +
                               std::to_string(iteration));
  if (cfg_.clip_norm > 0.0) clip_global_norm(params, cfg_.clip_norm);
  adam_.step(params, row.lr);
  return row;
}

TrainResult Trainer::run(std::span<const TrainingInstance> instances) {
  if (instances.empty()) throw std::invalid_argument("trainer: no training instances");
  TrainResult result;
  result.history.reserve(static_cast<std::size_t>(cfg_.iterations));

  std::vector<std::size_t> order(instances.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::size_t cursor = order.size();  // forces a shuffle on the first step

  for (int it = 0; it < cfg_.iterations; ++it) {
    if (cursor == order.size()) {
      shuffle_rng_.shuffle(order);
      cursor = 0;
    }
    result.history.push_back(step(instances[order[cursor++]], it));
  }

  result.initial_loss = result.history.front().total;
  result.final_loss = result.history.back().total;
  return result;
}

ModelGradCheckReport check_model_gradients(AssociationModel& model,
                                           const TrainingInstance& instance,
                                           const LossConfig& loss_cfg, int samples,
                                           double tolerance, std::uint64_t seed, double step) {
  std::vector<Parameter*> params = model.parameters();
  for (Parameter* p : params) p->grad.fill(0.0);

  auto loss_value = [&] {
    Tape tape;
    AssociationModel::Forward f =
        model.forward(tape, instance.trajectories, instance.detections, true);
    AssembledTerms terms = assembled_loss(tape, f.appearance, f.motion, f.fused, f.association,
                                          instance.target, loss_cfg);
    return tape.value(terms.total).item();
  };

  {
    Tape tape;
    AssociationModel::Forward f =
        model.forward(tape, instance.trajectories, instance.detections, true);
    AssembledTerms terms = assembled_loss(tape, f.appearance, f.motion, f.fused, f.association,
                                          instance.target, loss_cfg);
    tape.backward(terms.total);
  }

  ModelGradCheckReport report;
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    Parameter* p = params[rng.below(params.size())];
    std::size_t coord = rng.below(p->value.data().size());
    double analytic = p->grad.data()[coord];
    double saved = p->value.data()[coord];
    p->value.data()[coord] = saved + step;
    double up = loss_value();
    p->value.data()[coord] = saved - step;
    double down = loss_value();
    p->value.data()[coord] = saved;
    double numeric = (up - down) / (2.0 * step);
    double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
    double rel = std::abs(analytic - numeric) / denom;
    ++report.coords_checked;
    if (rel > report.max_rel_error) {
      report.max_rel_error = rel;
      report.worst_parameter = p->name;
      report.worst_coord = static_cast<int>(coord);
      report.worst_analytic = analytic;
      report.worst_numeric = numeric;
    }
    if (rel > tolerance) ++report.failures;
  }
  report.pass = report.failures == 0;
  for (Parameter* p : params) p->grad.fill(0.0);
  return report;
}

void write_history_csv(const std::string& path, std::span<const HistoryRow> rows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("write_history_csv: cannot open " + path);
  out << "iteration,lr,loss_total,loss_A,loss_M,loss_S,loss_Y\n";
  for (const HistoryRow& r : rows)
    out << r.iteration << ',' << format_double(r.lr) << ',' << format_double(r.total) << ','
        << format_double(r.appearance) << ',' << format_double(r.motion) << ','
        << format_double(r.fused) << ',' << format_double(r.association) << "\n";
  if (!out) throw std::runtime_error("write_history_csv: write failed for " + path);
}

}  // namespace gamot
