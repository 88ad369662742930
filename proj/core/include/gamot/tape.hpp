#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gamot/tensor.hpp"

namespace gamot {

// Named trainable tensor. Gradients accumulate across backward passes until
// the optimizer consumes and zeroes them.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;

  Parameter(std::string n, Tensor v);
};

// Reverse-mode computation tape. Every op records its output plus a closure
// that scatters output-gradients back onto its inputs; backward() walks the
// recording in reverse. One backward pass per tape.
//
// Reductions that cross the trajectory/detection axes (row_softmax
// normalizers, aggregate, logsumexp_rows) sum their terms in a canonical
// order (sorted by magnitude, then value), so permuting rows or columns of
// the inputs permutes the outputs bit-exactly.
class Tape {
 public:
  using Id = std::int32_t;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // ---- leaves ----
  // Constant: no gradient is tracked through it.
  Id constant(Tensor t);
  // Leaf with a gradient slot (finite-difference checks, probe inputs).
  Id leaf(Tensor t);
  // Leaf bound to a Parameter; backward() adds into p.grad. Binding the same
  // Parameter twice on one tape returns the same node.
  Id param(Parameter& p);

  // ---- elementwise / structural ----
  Id add(Id a, Id b);
  Id subtract(Id a, Id b);
  Id hadamard(Id a, Id b);
  Id scale(Id a, double c);
  Id relu(Id a);
  Id sigmoid(Id a);
  Id tanh(Id a);
  Id softplus(Id a);
  Id transpose(Id a);
  Id concat(Id a, Id b, int axis);  // 0 = rows, 1 = cols
  Id slice_cols(Id a, int from, int to);
  Id index_rows(Id a, std::vector<int> rows);
  Id reshape(Id a, int rows, int cols);

  // ---- contractions / reductions ----
  Id matmul(Id a, Id b);
  // Adds a 1 x N bias to every row of an M x N input.
  Id add_row_broadcast(Id a, Id bias);
  // matmul with a canonically ordered inner sum; used where the contracted
  // axis is a trajectory/detection axis that permutation tests may reorder.
  Id aggregate(Id weights, Id features);
  Id row_softmax(Id a);
  Id logsumexp_rows(Id a);
  Id row_sum(Id a);
  Id sum_all(Id a);

  // ---- composites ----
  // x * w + bias (bias broadcast across rows).
  Id linear(Id x, Id w, Id bias);

  // ---- access ----
  const Tensor& value(Id id) const { return nodes_[id].value; }
  const Tensor& grad(Id id) const;
  std::size_t size() const { return nodes_.size(); }

  // Seeds d(loss)/d(loss) = 1 and propagates to all leaves. `loss` must be a
  // size-1 tensor. Calling twice, or on an empty tape, is a logic error.
  void backward(Id loss);
  bool backward_done() const { return backward_done_; }

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    std::function<void(Tape&, Id)> back;  // null for leaves
    Parameter* bound = nullptr;
  };

  Id push(Tensor value, std::function<void(Tape&, Id)> back);
  Tensor& grad_ref(Id id) { return nodes_[id].grad; }
  void check(Id id, const char* op) const;

  std::vector<Node> nodes_;
  std::unordered_map<Parameter*, Id> bound_;
  bool backward_done_ = false;
};

// Sums in an input-order-independent way: terms sorted by |x| ascending
// (ties by value) before accumulation.
double canonical_sum(std::span<const double> terms);

// ---- finite differences --------------------------------------------------

struct FiniteDiffReport {
  double max_rel_error = 0.0;
  int coords_checked = 0;
  int failures = 0;
  bool pass = true;
  int worst_input = -1;
  int worst_coord = -1;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
};

// Central-difference check of d(scalar)/d(inputs) against the tape gradient.
// `build` receives leaf ids for `inputs` and returns the graph output; if the
// output is not scalar it is projected with a fixed deterministic weighting.
// Relative error uses max(|analytic|, |numeric|, denom_floor) as denominator.
FiniteDiffReport finite_diff_check(
    const std::function<Tape::Id(Tape&, const std::vector<Tape::Id>&)>& build,
    const std::vector<Tensor>& inputs, double tolerance, double step = 1e-5,
    double denom_floor = 1e-8);

}  // namespace gamot
