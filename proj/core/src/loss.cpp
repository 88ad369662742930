#include "gamot/loss.hpp"

#include <stdexcept>

namespace gamot {

namespace {

void check_shape(Tape& tape, Tape::Id logits, const GroundTruthMatrix& target, const char* op) {
  const Tensor& y = tape.value(logits);
  if (y.rows() != target.rows() || y.cols() != target.cols())
    throw std::invalid_argument(std::string(op) + ": logits " + y.shape_str() +
                                " do not match target " + std::to_string(target.rows()) + "x" +
                                std::to_string(target.cols()));
}

}  // namespace

Tape::Id element_loss(Tape& tape, Tape::Id logits, const GroundTruthMatrix& target,
                      double positive_weight) {
  check_shape(tape, logits, target, "element_loss");
  int rows = target.rows(), cols = target.cols();
  Tensor pos = Tensor::zeros(rows, cols);   // p where matched, 0 elsewhere
  Tensor neg = Tensor::zeros(rows, cols);   // 1 where unmatched, 0 elsewhere
  neg.fill(1.0);
  for (auto [i, j] : target.matches()) {
    pos.at(i, j) = positive_weight;
    neg.at(i, j) = 0.0;
  }
  Tape::Id pos_term = tape.hadamard(tape.softplus(tape.scale(logits, -1.0)),
                                    tape.constant(std::move(pos)));
  Tape::Id neg_term = tape.hadamard(tape.softplus(logits), tape.constant(std::move(neg)));
  return tape.sum_all(tape.add(pos_term, neg_term));
}

Tape::Id one_to_one_loss(Tape& tape, Tape::Id logits, const GroundTruthMatrix& target,
                         bool columns_too) {
  check_shape(tape, logits, target, "one_to_one_loss");
  if (target.match_count() == 0) return tape.constant(Tensor::scalar(0.0));

  auto cross_entropy_rows = [&](Tape::Id mat, const std::vector<int>& row_index,
                                const std::vector<int>& target_col, int width) {
    Tape::Id picked = tape.index_rows(mat, row_index);  // k x width
    Tensor onehot = Tensor::zeros(static_cast<int>(row_index.size()), width);
    for (std::size_t r = 0; r < target_col.size(); ++r)
      onehot.at(static_cast<int>(r), target_col[r]) = 1.0;
    Tape::Id lse = tape.logsumexp_rows(picked);                                     // k x 1
    Tape::Id tgt = tape.row_sum(tape.hadamard(picked, tape.constant(std::move(onehot))));  // k x 1
    return tape.sum_all(tape.subtract(lse, tgt));
  };

  std::vector<int> rows, cols_of_rows;
  for (auto [i, j] : target.matches()) {
    rows.push_back(i);
    cols_of_rows.push_back(j);
  }
  Tape::Id loss = cross_entropy_rows(logits, rows, cols_of_rows, target.cols());

  if (columns_too) {
    std::vector<std::pair<int, int>> by_col(target.matches());
    std::sort(by_col.begin(), by_col.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    std::vector<int> cols, rows_of_cols;
    for (auto [i, j] : by_col) {
      cols.push_back(j);
      rows_of_cols.push_back(i);
    }
    loss = tape.add(loss, cross_entropy_rows(tape.transpose(logits), cols, rows_of_cols,
                                             target.rows()));
  }
  return loss;
}

Tape::Id birth_death_loss(Tape& tape, Tape::Id logits, const GroundTruthMatrix& target) {
  check_shape(tape, logits, target, "birth_death_loss");
  Tensor mask = Tensor::zeros(target.rows(), target.cols());
  bool any = false;
  for (int i = 0; i < target.rows(); ++i) {
    if (target.row_matched(i)) continue;
    for (int j = 0; j < target.cols(); ++j) {
      if (target.col_matched(j)) continue;
      mask.at(i, j) = 1.0;
      any = true;
    }
  }
  if (!any) return tape.constant(Tensor::scalar(0.0));
  Tape::Id sig = tape.sigmoid(logits);
  return tape.sum_all(tape.hadamard(tape.hadamard(sig, sig), tape.constant(std::move(mask))));
}

Tape::Id matrix_loss(Tape& tape, Tape::Id logits, const GroundTruthMatrix& target,
                     const LossConfig& cfg) {
  Tape::Id e = element_loss(tape, logits, target, cfg.positive_weight);
  Tape::Id o = one_to_one_loss(tape, logits, target, cfg.one_to_one_columns);
  Tape::Id b = birth_death_loss(tape, logits, target);
  return tape.add(tape.add(e, o), b);
}

AssembledTerms assembled_loss(Tape& tape, Tape::Id appearance, Tape::Id motion, Tape::Id fused,
                              Tape::Id association, const GroundTruthMatrix& target,
                              const LossConfig& cfg) {
  AssembledTerms terms;
  terms.appearance = element_loss(tape, appearance, target, cfg.positive_weight);
  terms.motion = element_loss(tape, motion, target, cfg.positive_weight);
  terms.fused = element_loss(tape, fused, target, cfg.positive_weight);
  Tape::Id total = tape.add(tape.add(tape.scale(terms.appearance, cfg.lambda_appearance),
                                     tape.scale(terms.motion, cfg.lambda_motion)),
                            tape.scale(terms.fused, cfg.lambda_fused));
  if (association >= 0) {
    terms.association = matrix_loss(tape, association, target, cfg);
    total = tape.add(total, tape.scale(terms.association, cfg.lambda_association));
  } else {
    terms.association = tape.constant(Tensor::scalar(0.0));
  }
  terms.total = total;
  return terms;
}

double element_loss_value(const Tensor& logits, const GroundTruthMatrix& target,
                          double positive_weight) {
  Tape tape;
  return tape.value(element_loss(tape, tape.constant(logits), target, positive_weight)).item();
}

double one_to_one_loss_value(const Tensor& logits, const GroundTruthMatrix& target,
                             bool columns_too) {
  Tape tape;
  return tape.value(one_to_one_loss(tape, tape.constant(logits), target, columns_too)).item();
}

double birth_death_loss_value(const Tensor& logits, const GroundTruthMatrix& target) {
  Tape tape;
  return tape.value(birth_death_loss(tape, tape.constant(logits), target)).item();
}

double matrix_loss_value(const Tensor& logits, const GroundTruthMatrix& target,
                         const LossConfig& cfg) {
  Tape tape;
  return tape.value(matrix_loss(tape, tape.constant(logits), target, cfg)).item();
}

}  // namespace gamot
