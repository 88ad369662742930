#include "gamot/tensor.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace gamot {

Tensor Tensor::zeros(int rows, int cols) {
  if (rows <= 0 || cols <= 0) throw std::invalid_argument("Tensor::zeros: non-positive shape");
  return Tensor({rows, cols}, std::vector<double>(static_cast<std::size_t>(rows) * cols, 0.0));
}

Tensor Tensor::scalar(double v) { return Tensor({1}, {v}); }

Tensor Tensor::vector(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("Tensor::vector: empty");
  int n = static_cast<int>(v.size());
  return Tensor({n}, std::move(v));
}

Tensor Tensor::matrix(int rows, int cols, std::vector<double> data) {
  if (rows <= 0 || cols <= 0) throw std::invalid_argument("Tensor::matrix: non-positive shape");
  if (data.size() != static_cast<std::size_t>(rows) * cols)
    throw std::invalid_argument("Tensor::matrix: data size does not match shape");
  return Tensor({rows, cols}, std::move(data));
}

Tensor Tensor::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows[0].empty()) throw std::invalid_argument("Tensor::from_rows: empty");
  std::size_t cols = rows[0].size();
  std::vector<double> data;
  data.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw std::invalid_argument("Tensor::from_rows: ragged rows");
    data.insert(data.end(), r.begin(), r.end());
  }
  return Tensor({static_cast<int>(rows.size()), static_cast<int>(cols)}, std::move(data));
}

std::span<const double> Tensor::row(int r) const {
  return std::span<const double>(data_).subspan(static_cast<std::size_t>(r) * cols(), cols());
}

bool Tensor::all_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

void Tensor::fill(double v) {
  for (double& x : data_) x = v;
}

double Tensor::item() const {
  if (data_.size() != 1) throw std::logic_error("Tensor::item: size != 1 (" + shape_str() + ")");
  return data_[0];
}

std::string Tensor::shape_str() const {
  std::string s = "[";
  for (std::size_t i = 0; i < shape_.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape_[i]);
  }
  return s + "]";
}

bool exactly_equal(const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b)) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

double max_abs_diff(const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b)) return std::numeric_limits<double>::infinity();
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

}  // namespace gamot
