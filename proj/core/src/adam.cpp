#include "gamot/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace gamot {

void AdamState::step(const std::vector<Parameter*>& params, double learning_rate) {
  ++iterations_;
  double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(iterations_));
  double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(iterations_));
  for (Parameter* p : params) {
    if (!p) throw std::invalid_argument("AdamState::step: null parameter");
    if (!p->value.same_shape(p->grad))
      throw std::invalid_argument("AdamState::step: grad shape mismatch for " + p->name);
    auto [it, inserted] = moments_.try_emplace(p->name);
    if (inserted) {
      it->second.m = Tensor::zeros(p->value.rows(), p->value.cols());
      it->second.v = Tensor::zeros(p->value.rows(), p->value.cols());
    }
    Tensor& m = it->second.m;
    Tensor& v = it->second.v;
    for (std::size_t i = 0; i < p->value.size(); ++i) {
      double g = p->grad[i];
      m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g;
      v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g * g;
      double mhat = m[i] / bc1;
      double vhat = v[i] / bc2;
      p->value[i] -= learning_rate * mhat / (std::sqrt(vhat) + cfg_.epsilon);
      p->value[i] -= learning_rate * cfg_.weight_decay * p->value[i];
      p->grad[i] = 0.0;
    }
  }
}

double clip_global_norm(const std::vector<Parameter*>& params, double max_norm) {
  double sq = 0.0;
  for (const Parameter* p : params)
    for (std::size_t i = 0; i < p->grad.size(); ++i) sq += p->grad[i] * p->grad[i];
  double norm = std::sqrt(sq);
  if (norm > max_norm && norm > 0.0) {
    double s = max_norm / norm;
    for (Parameter* p : params)
      for (std::size_t i = 0; i < p->grad.size(); ++i) p->grad[i] *= s;
  }
  return norm;
}

}  // namespace gamot
