#include "gamot/tape.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gamot {

namespace {

double stable_sigmoid(double x) {
  if (x >= 0.0) {
    double e = std::exp(-x);
    return 1.0 / (1.0 + e);
  }
  double e = std::exp(x);
  return e / (1.0 + e);
}

double stable_softplus(double x) {
  // log(1 + e^x) without overflow on either tail.
  return std::max(x, 0.0) + std::log1p(std::exp(-std::fabs(x)));
}

[[noreturn]] void shape_error(const char* op, const Tensor& a, const Tensor& b) {
  throw std::invalid_argument(std::string(op) + ": shape mismatch " + a.shape_str() + " vs " +
                              b.shape_str());
}

}  // namespace

double canonical_sum(std::span<const double> terms) {
  static thread_local std::vector<double> scratch;
  scratch.assign(terms.begin(), terms.end());
  std::sort(scratch.begin(), scratch.end(), [](double a, double b) {
    double fa = std::fabs(a), fb = std::fabs(b);
    if (fa != fb) return fa < fb;
    return a < b;
  });
  double acc = 0.0;
  for (double v : scratch) acc += v;
  return acc;
}

Parameter::Parameter(std::string n, Tensor v) : name(std::move(n)), value(std::move(v)) {
  grad = Tensor::zeros(value.rows(), value.cols());
}

// ---- tape ------------------------------------------------------------------

Tape::Id Tape::push(Tensor value, std::function<void(Tape&, Id)> back) {
  if (backward_done_) throw std::logic_error("Tape: op recorded after backward()");
  nodes_.push_back(Node{std::move(value), Tensor{}, std::move(back), nullptr});
  return static_cast<Id>(nodes_.size()) - 1;
}

void Tape::check(Id id, const char* op) const {
  if (id < 0 || id >= static_cast<Id>(nodes_.size()))
    throw std::logic_error(std::string(op) + ": invalid tape id");
}

Tape::Id Tape::constant(Tensor t) { return push(std::move(t), nullptr); }

Tape::Id Tape::leaf(Tensor t) { return push(std::move(t), nullptr); }

Tape::Id Tape::param(Parameter& p) {
  auto it = bound_.find(&p);
  if (it != bound_.end()) return it->second;
  Id id = push(p.value, nullptr);
  nodes_[id].bound = &p;
  bound_.emplace(&p, id);
  return id;
}

const Tensor& Tape::grad(Id id) const {
  check(id, "grad");
  if (!backward_done_) throw std::logic_error("Tape::grad: backward() has not run");
  if (nodes_[id].grad.empty()) throw std::logic_error("Tape::grad: node outside backward walk");
  return nodes_[id].grad;
}

Tape::Id Tape::add(Id a, Id b) {
  check(a, "add");
  check(b, "add");
  const Tensor &x = nodes_[a].value, &y = nodes_[b].value;
  if (!x.same_shape(y)) shape_error("add", x, y);
  Tensor out = Tensor::zeros(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + y[i];
  return push(std::move(out), [a, b](Tape& t, Id self) {
    const Tensor& g = t.nodes_[self].grad;
    Tensor &ga = t.grad_ref(a), &gb = t.grad_ref(b);
    for (std::size_t i = 0; i < g.size(); ++i) {
      ga[i] += g[i];
      gb[i] += g[i];
    }
  });
}

Tape::Id Tape::subtract(Id a, Id b) {
  check(a, "subtract");
  check(b, "subtract");
  const Tensor &x = nodes_[a].value, &y = nodes_[b].value;
  if (!x.same_shape(y)) shape_error("subtract", x, y);
  Tensor out = Tensor::zeros(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - y[i];
  return push(std::move(out), [a, b](Tape& t, Id self) {
    const Tensor& g = t.nodes_[self].grad;
    Tensor &ga = t.grad_ref(a), &gb = t.grad_ref(b);
    for (std::size_t i = 0; i < g.size(); ++i) {
      ga[i] += g[i];
      gb[i] -= g[i];
    }
  });
}

Tape::Id Tape::hadamard(Id a, Id b) {
  check(a, "hadamard");
  check(b, "hadamard");
  const Tensor &x = nodes_[a].value, &y = nodes_[b].value;
  if (!x.same_shape(y)) shape_error("hadamard", x, y);
  Tensor out = Tensor::zeros(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * y[i];
  return push(std::move(out), [a, b](Tape& t, Id self) {
    const Tensor& g = t.nodes_[self].grad;
    const Tensor &x = t.nodes_[a].value, &y = t.nodes_[b].value;
    Tensor &ga = t.grad_ref(a), &gb = t.grad_ref(b);
    for (std::size_t i = 0; i < g.size(); ++i) {
      ga[i] += g[i] * y[i];
      gb[i] += g[i] * x[i];
    }
  });
}

Tape::Id Tape::scale(Id a, double c) {
  check(a, "scale");
  const Tensor& x = nodes_[a].value;
  Tensor out = Tensor::zeros(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = c * x[i];
  return push(std::move(out), [a, c](Tape& t, Id self) {
    const Tensor& g = t.nodes_[self].grad;
    Tensor& ga = t.grad_ref(a);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += c * g[i];
  });
}

Tape::Id Tape::relu(Id a) {
  check(a, "relu");
  const Tensor& x = nodes_[a].value;
  Tensor out = Tensor::zeros(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] > 0.0 ? x[i] : 0.0;
  return push(std::move(out), [a](Tape& t, Id self) {
    const Tensor& g = t.nodes_[self].grad;
    const Tensor& x = t.nodes_[a].value;
    Tensor& ga = t.grad_ref(a);
    for (std::size_t i = 0; i < g.size(); ++i)
      if (x[i] > 0.0) ga[i] += g[i];
  });
}

Tape::Id Tape::sigmoid(Id a) {
  check(a, "sigmoid");
  const Tensor& x = nodes_[a].value;
  Tensor out = Tensor::zeros(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = stable_sigmoid(x[i]);
  return push(std::move(out), [a](Tape& t, Id self) {
    const Tensor& g = t.nodes_[self].grad;
    const Tensor& y = t.nodes_[self].value;
    Tensor& ga = t.grad_ref(a);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * y[i] * (1.0 - y[i]);
  });
}

Tape::Id Tape::tanh(Id a) {
  check(a, "tanh");
  const Tensor& x = nodes_[a].value;
  Tensor out = Tensor::zeros(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::tanh(x[i]);
  return push(std::move(out), [a](Tape& t, Id self) {
    const Tensor& g = t.nodes_[self].grad;
    const Tensor& y = t.nodes_[self].value;
    Tensor& ga = t.grad_ref(a);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * (1.0 - y[i] * y[i]);
  });
}

Tape::Id Tape::softplus(Id a) {
  check(a, "softplus");
  const Tensor& x = nodes_[a].value;
  Tensor out = Tensor::zeros(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = stable_softplus(x[i]);
  return push(std::move(out), [a](Tape& t, Id self) {
    const Tensor& g = t.nodes_[self].grad;
    const Tensor& x = t.nodes_[a].value;
    Tensor& ga = t.grad_ref(a);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * stable_sigmoid(x[i]);
  });
}

Tape::Id Tape::transpose(Id a) {
  check(a, "transpose");
  const Tensor& x = nodes_[a].value;
  int r = x.rows(), c = x.cols();
  Tensor out = Tensor::zeros(c, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) out.at(j, i) = x.at(i, j);
  return push(std::move(out), [a](Tape& t, Id self) {
    const Tensor& g = t.nodes_[self].grad;
    Tensor& ga = t.grad_ref(a);
    for (int i = 0; i < g.rows(); ++i)
      for (int j = 0; j < g.cols(); ++j) ga.at(j, i) += g.at(i, j);
  });
}

Tape::Id Tape::concat(Id a, Id b, int axis) {
  check(a, "concat");
  check(b, "concat");
  const Tensor &x = nodes_[a].value, &y = nodes_[b].value;
  if (axis == 0) {
    if (x.cols() != y.cols()) shape_error("concat(axis=0)", x, y);
    Tensor out = Tensor::zeros(x.rows() + y.rows(), x.cols());
    std::copy(x.data().begin(), x.data().end(), out.data().begin());
    std::copy(y.data().begin(), y.data().end(), out.data().begin() + x.size());
    return push(std::move(out), [a, b](Tape& t, Id self) {
      const Tensor& g = t.nodes_[self].grad;
      Tensor &ga = t.grad_ref(a), &gb = t.grad_ref(b);
      for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += g[i];
      for (std::size_t i = 0; i < gb.size(); ++i) gb[i] += g[ga.size() + i];
    });
  }
  if (axis == 1) {
    if (x.rows() != y.rows()) shape_error("concat(axis=1)", x, y);
    int r = x.rows(), cx = x.cols(), cy = y.cols();
    Tensor out = Tensor::zeros(r, cx + cy);
    for (int i = 0; i < r; ++i) {
      for (int j = 0; j < cx; ++j) out.at(i, j) = x.at(i, j);
      for (int j = 0; j < cy; ++j) out.at(i, cx + j) = y.at(i, j);
    }
    return push(std::move(out), [a, b, cx, cy](Tape& t, Id self) {
      const Tensor& g = t.nodes_[self].grad;
      Tensor &ga = t.grad_ref(a), &gb = t.grad_ref(b);
      for (int i = 0; i < g.rows(); ++i) {
        for (int j = 0; j < cx; ++j) ga.at(i, j) += g.at(i, j);
        for (int j = 0; j < cy; ++j) gb.at(i, j) += g.at(i, cx + j);
      }
    });
  }
  throw std::invalid_argument("concat: axis must be 0 or 1");
}

Tape::Id Tape::slice_cols(Id a, int from, int to) {
  check(a, "slice_cols");
  const Tensor& x = nodes_[a].value;
  if (from < 0 || to <= from || to > x.cols())
    throw std::invalid_argument("slice_cols: bad range [" + std::to_string(from) + ", " +
                                std::to_string(to) + ") for " + x.shape_str());
  int r = x.rows(), w = to - from;
  Tensor out = Tensor::zeros(r, w);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < w; ++j) out.at(i, j) = x.at(i, from + j);
  return push(std::move(out), [a, from, w](Tape& t, Id self) {
    const Tensor& g = t.nodes_[self].grad;
    Tensor& ga = t.grad_ref(a);
    for (int i = 0; i < g.rows(); ++i)
      for (int j = 0; j < w; ++j) ga.at(i, from + j) += g.at(i, j);
  });
}

Tape::Id Tape::index_rows(Id a, std::vector<int> rows) {
  check(a, "index_rows");
  const Tensor& x = nodes_[a].value;
  if (rows.empty()) throw std::invalid_argument("index_rows: empty index list");
  for (int r : rows)
    if (r < 0 || r >= x.rows())
      throw std::invalid_argument("index_rows: index " + std::to_string(r) + " out of range for " +
                                  x.shape_str());
  int c = x.cols();
  Tensor out = Tensor::zeros(static_cast<int>(rows.size()), c);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < c; ++j) out.at(static_cast<int>(i), j) = x.at(rows[i], j);
  return push(std::move(out), [a, rows = std::move(rows)](Tape& t, Id self) {
    const Tensor& g = t.nodes_[self].grad;
    Tensor& ga = t.grad_ref(a);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (int j = 0; j < g.cols(); ++j) ga.at(rows[i], j) += g.at(static_cast<int>(i), j);
  });
}

Tape::Id Tape::reshape(Id a, int rows, int cols) {
  check(a, "reshape");
  const Tensor& x = nodes_[a].value;
  if (static_cast<std::size_t>(rows) * cols != x.size())
    throw std::invalid_argument("reshape: size mismatch for " + x.shape_str());
  Tensor out = Tensor::zeros(rows, cols);
  std::copy(x.data().begin(), x.data().end(), out.data().begin());
  return push(std::move(out), [a](Tape& t, Id self) {
    const Tensor& g = t.nodes_[self].grad;
    Tensor& ga = t.grad_ref(a);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
  });
}

Tape::Id Tape::matmul(Id a, Id b) {
  check(a, "matmul");
  check(b, "matmul");
  const Tensor &x = nodes_[a].value, &y = nodes_[b].value;
  if (x.cols() != y.rows()) shape_error("matmul", x, y);
  int r = x.rows(), k = x.cols(), c = y.cols();
  Tensor out = Tensor::zeros(r, c);
  for (int i = 0; i < r; ++i)
    for (int kk = 0; kk < k; ++kk) {
      double xv = x.at(i, kk);
      if (xv == 0.0) continue;
      for (int j = 0; j < c; ++j) out.at(i, j) += xv * y.at(kk, j);
    }
  return push(std::move(out), [a, b](Tape& t, Id self) {
    const Tensor& g = t.nodes_[self].grad;
    const Tensor &x = t.nodes_[a].value, &y = t.nodes_[b].value;
    Tensor &ga = t.grad_ref(a), &gb = t.grad_ref(b);
    int r = x.rows(), k = x.cols(), c = y.cols();
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) {
        double gij = g.at(i, j);
        if (gij == 0.0) continue;
        for (int kk = 0; kk < k; ++kk) ga.at(i, kk) += gij * y.at(kk, j);
      }
    for (int i = 0; i < r; ++i)
      for (int kk = 0; kk < k; ++kk) {
        double xv = x.at(i, kk);
        if (xv == 0.0) continue;
        for (int j = 0; j < c; ++j) gb.at(kk, j) += xv * g.at(i, j);
      }
  });
}

Tape::Id Tape::add_row_broadcast(Id a, Id bias) {
  check(a, "add_row_broadcast");
  check(bias, "add_row_broadcast");
  const Tensor &x = nodes_[a].value, &b = nodes_[bias].value;
  if (b.rows() != 1 || b.cols() != x.cols()) shape_error("add_row_broadcast", x, b);
  Tensor out = Tensor::zeros(x.rows(), x.cols());
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j) out.at(i, j) = x.at(i, j) + b.at(0, j);
  return push(std::move(out), [a, bias](Tape& t, Id self) {
    const Tensor& g = t.nodes_[self].grad;
    Tensor &ga = t.grad_ref(a), &gb = t.grad_ref(bias);
    for (int i = 0; i < g.rows(); ++i)
      for (int j = 0; j < g.cols(); ++j) {
        ga.at(i, j) += g.at(i, j);
        gb.at(0, j) += g.at(i, j);
      }
  });
}

Tape::Id Tape::aggregate(Id weights, Id features) {
  check(weights, "aggregate");
  check(features, "aggregate");
  const Tensor &w = nodes_[weights].value, &f = nodes_[features].value;
  if (w.cols() != f.rows()) shape_error("aggregate", w, f);
  int r = w.rows(), k = w.cols(), c = f.cols();
  Tensor out = Tensor::zeros(r, c);
  std::vector<double> terms(static_cast<std::size_t>(k));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) {
      for (int kk = 0; kk < k; ++kk) terms[kk] = w.at(i, kk) * f.at(kk, j);
      out.at(i, j) = canonical_sum(terms);
    }
  return push(std::move(out), [weights, features](Tape& t, Id self) {
    const Tensor& g = t.nodes_[self].grad;
    const Tensor &w = t.nodes_[weights].value, &f = t.nodes_[features].value;
    Tensor &gw = t.grad_ref(weights), &gf = t.grad_ref(features);
    int r = w.rows(), k = w.cols(), c = f.cols();
    for (int i = 0; i < r; ++i)
      for (int kk = 0; kk < k; ++kk) {
        double acc = 0.0;
        for (int j = 0; j < c; ++j) acc += g.at(i, j) * f.at(kk, j);
        gw.at(i, kk) += acc;
      }
    for (int kk = 0; kk < k; ++kk)
      for (int j = 0; j < c; ++j) {
        double acc = 0.0;
        for (int i = 0; i < r; ++i) acc += w.at(i, kk) * g.at(i, j);
        gf.at(kk, j) += acc;
      }
  });
}

Tape::Id Tape::row_softmax(Id a) {
  check(a, "row_softmax");
  const Tensor& x = nodes_[a].value;
  int r = x.rows(), c = x.cols();
  Tensor out = Tensor::zeros(r, c);
  std::vector<double> e(static_cast<std::size_t>(c));
  for (int i = 0; i < r; ++i) {
    double m = x.at(i, 0);
    for (int j = 1; j < c; ++j) m = std::max(m, x.at(i, j));
    for (int j = 0; j < c; ++j) e[j] = std::exp(x.at(i, j) - m);
    double denom = canonical_sum(e);
    for (int j = 0; j < c; ++j) out.at(i, j) = e[j] / denom;
  }
  return push(std::move(out), [a](Tape& t, Id self) {
    const Tensor& g = t.nodes_[self].grad;
    const Tensor& y = t.nodes_[self].value;
    Tensor& ga = t.grad_ref(a);
    for (int i = 0; i < g.rows(); ++i) {
      double dot = 0.0;
      for (int j = 0; j < g.cols(); ++j) dot += g.at(i, j) * y.at(i, j);
      for (int j = 0; j < g.cols(); ++j) ga.at(i, j) += y.at(i, j) * (g.at(i, j) - dot);
    }
  });
}

Tape::Id Tape::logsumexp_rows(Id a) {
  check(a, "logsumexp_rows");
  const Tensor& x = nodes_[a].value;
  int r = x.rows(), c = x.cols();
  Tensor out = Tensor::zeros(r, 1);
  std::vector<double> e(static_cast<std::size_t>(c));
  for (int i = 0; i < r; ++i) {
    double m = x.at(i, 0);
    for (int j = 1; j < c; ++j) m = std::max(m, x.at(i, j));
    for (int j = 0; j < c; ++j) e[j] = std::exp(x.at(i, j) - m);
    out.at(i, 0) = m + std::log(canonical_sum(e));
  }
  return push(std::move(out), [a](Tape& t, Id self) {
    const Tensor& g = t.nodes_[self].grad;
    const Tensor& lse = t.nodes_[self].value;
    const Tensor& x = t.nodes_[a].value;
    Tensor& ga = t.grad_ref(a);
    for (int i = 0; i < x.rows(); ++i)
      for (int j = 0; j < x.cols(); ++j)
        ga.at(i, j) += g.at(i, 0) * std::exp(x.at(i, j) - lse.at(i, 0));
  });
}

Tape::Id Tape::row_sum(Id a) {
  check(a, "row_sum");
  const Tensor& x = nodes_[a].value;
  Tensor out = Tensor::zeros(x.rows(), 1);
  for (int i = 0; i < x.rows(); ++i) {
    double acc = 0.0;
    for (int j = 0; j < x.cols(); ++j) acc += x.at(i, j);
    out.at(i, 0) = acc;
  }
  return push(std::move(out), [a](Tape& t, Id self) {
    const Tensor& g = t.nodes_[self].grad;
    Tensor& ga = t.grad_ref(a);
    for (int i = 0; i < ga.rows(); ++i)
      for (int j = 0; j < ga.cols(); ++j) ga.at(i, j) += g.at(i, 0);
  });
}

Tape::Id Tape::sum_all(Id a) {
  check(a, "sum_all");
  const Tensor& x = nodes_[a].value;
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i];
  return push(Tensor::scalar(acc), [a](Tape& t, Id self) {
    double g = t.nodes_[self].grad[0];
    Tensor& ga = t.grad_ref(a);
    for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += g;
  });
}

Tape::Id Tape::linear(Id x, Id w, Id bias) { return add_row_broadcast(matmul(x, w), bias); }

void Tape::backward(Id loss) {
  check(loss, "backward");
  if (backward_done_) throw std::logic_error("Tape::backward: called twice");
  if (nodes_[loss].value.size() != 1)
    throw std::logic_error("Tape::backward: loss is not scalar: " +
                           nodes_[loss].value.shape_str());
  for (Id i = 0; i <= loss; ++i) {
    const Tensor& v = nodes_[i].value;
    nodes_[i].grad = Tensor::zeros(v.rows(), v.cols());
  }
  nodes_[loss].grad[0] = 1.0;
  for (Id i = loss; i >= 0; --i)
    if (nodes_[i].back) nodes_[i].back(*this, i);
  for (Id i = 0; i <= loss; ++i)
    if (nodes_[i].bound) {
      Parameter* p = nodes_[i].bound;
      const Tensor& g = nodes_[i].grad;
      for (std::size_t j = 0; j < g.size(); ++j) p->grad[j] += g[j];
    }
  backward_done_ = true;
}

// ---- finite differences ----------------------------------------------------

namespace {

// Fixed, input-independent projection so non-scalar outputs reduce to one
// number with nonuniform weights.
std::vector<double> projection_weights(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = 1.0 + 0.5 * std::sin(2.7 * static_cast<double>(i) + 0.4);
  return w;
}

}  // namespace

FiniteDiffReport finite_diff_check(
    const std::function<Tape::Id(Tape&, const std::vector<Tape::Id>&)>& build,
    const std::vector<Tensor>& inputs, double tolerance, double step, double denom_floor) {
  auto evaluate = [&](const std::vector<Tensor>& ins, Tape* tape_out,
                      std::vector<Tape::Id>* ids_out) -> double {
    Tape local;
    Tape& tape = tape_out ? *tape_out : local;
    std::vector<Tape::Id> ids;
    ids.reserve(ins.size());
    for (const Tensor& t : ins) ids.push_back(tape.leaf(t));
    Tape::Id out = build(tape, ids);
    Tape::Id scalar = out;
    if (tape.value(out).size() != 1) {
      const Tensor& v = tape.value(out);
      auto w = projection_weights(v.size());
      Tensor wt = Tensor::zeros(v.rows(), v.cols());
      for (std::size_t i = 0; i < w.size(); ++i) wt[i] = w[i];
      scalar = tape.sum_all(tape.hadamard(out, tape.constant(std::move(wt))));
    }
    if (ids_out) *ids_out = ids;
    if (tape_out) tape.backward(scalar);
    return tape.value(scalar).item();
  };

  Tape tape;
  std::vector<Tape::Id> ids;
  evaluate(inputs, &tape, &ids);

  FiniteDiffReport report;
  std::vector<Tensor> work = inputs;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const Tensor& analytic = tape.grad(ids[i]);
    for (std::size_t c = 0; c < work[i].size(); ++c) {
      double saved = work[i][c];
      work[i][c] = saved + step;
      double up = evaluate(work, nullptr, nullptr);
      work[i][c] = saved - step;
      double down = evaluate(work, nullptr, nullptr);
      work[i][c] = saved;
      double numeric = (up - down) / (2.0 * step);
      double ana = analytic[c];
      double denom = std::max({std::fabs(ana), std::fabs(numeric), denom_floor});
      double rel = std::fabs(ana - numeric) / denom;
      ++report.coords_checked;
      if (rel > report.max_rel_error) {
        report.max_rel_error = rel;
        report.worst_input = static_cast<int>(i);
        report.worst_coord = static_cast<int>(c);
        report.worst_analytic = ana;
        report.worst_numeric = numeric;
      }
      if (rel > tolerance) ++report.failures;
    }
  }
  report.pass = report.failures == 0;
  return report;
}

}  // namespace gamot
