#pragma once

#include "gamot/assoc.hpp"
#include "gamot/tape.hpp"

namespace gamot {

struct LossConfig {
  double positive_weight = 25.0;  // extra weight on the sparse matched cells
  double lambda_appearance = 1.0;
  double lambda_motion = 1.0;
  double lambda_fused = 1.0;
  double lambda_association = 1.0;
  // When set, the one-to-one term also covers matched columns (softmax over
  // rows); by default it supervises matched rows only.
  bool one_to_one_columns = false;
};

// Weighted per-cell binary cross-entropy on logits:
//   sum_ij [ p * t_ij * log(1 + e^-y) + (1 - t_ij) * log(1 + e^y) ]
// computed in softplus form so saturated logits stay finite.
Tape::Id element_loss(Tape& tape, Tape::Id logits, const GroundTruthMatrix& target,
                      double positive_weight);

// Softmax cross-entropy over each matched row (optionally also each matched
// column): logsumexp(row) - row[target]. Unmatched rows contribute nothing.
// Zero when there are no matches.
Tape::Id one_to_one_loss(Tape& tape, Tape::Id logits, const GroundTruthMatrix& target,
                         bool columns_too = false);

// Squared sigmoid mass on the cells whose row and column are both unmatched,
// pushing birth/death scores toward -inf. Each such cell counts once. Zero
// when every row or every column is matched.
Tape::Id birth_death_loss(Tape& tape, Tape::Id logits, const GroundTruthMatrix& target);

// element + one-to-one + birth/death on a single matrix.
Tape::Id matrix_loss(Tape& tape, Tape::Id logits, const GroundTruthMatrix& target,
                     const LossConfig& cfg);

struct AssembledTerms {
  Tape::Id total;
  Tape::Id appearance;   // element term, unweighted
  Tape::Id motion;       // element term, unweighted
  Tape::Id fused;        // element term, unweighted
  Tape::Id association;  // matrix term, unweighted
};

// lambda_A * element(A) + lambda_M * element(M) + lambda_S * element(S)
//   + lambda_Y * matrix_loss(Y). All four matrices must match the target's
// shape. Pass association < 0 to drop the Y term (score-only training).
AssembledTerms assembled_loss(Tape& tape, Tape::Id appearance, Tape::Id motion, Tape::Id fused,
                              Tape::Id association, const GroundTruthMatrix& target,
                              const LossConfig& cfg);

// Value-level wrappers (fresh tape, forward only).
double element_loss_value(const Tensor& logits, const GroundTruthMatrix& target,
                          double positive_weight);
double one_to_one_loss_value(const Tensor& logits, const GroundTruthMatrix& target,
                             bool columns_too = false);
double birth_death_loss_value(const Tensor& logits, const GroundTruthMatrix& target);
double matrix_loss_value(const Tensor& logits, const GroundTruthMatrix& target,
                         const LossConfig& cfg);

}  // namespace gamot
