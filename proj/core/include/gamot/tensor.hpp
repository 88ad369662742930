#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace gamot {

// Dense row-major array of 64-bit floats. Rank 1 (vector) or 2 (matrix);
// rank-1 values act as 1 x N in matrix contexts, scalars are size-1 tensors.
class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(int rows, int cols);
  static Tensor scalar(double v);
  static Tensor vector(std::vector<double> v);
  static Tensor matrix(int rows, int cols, std::vector<double> data);
  static Tensor from_rows(const std::vector<std::vector<double>>& rows);

  const std::vector<int>& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  int rows() const { return rank() == 2 ? shape_[0] : (shape_.empty() ? 0 : 1); }
  int cols() const {
    if (rank() == 2) return shape_[1];
    return shape_.empty() ? 0 : shape_[0];
  }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& at(int r, int c) { return data_[static_cast<std::size_t>(r) * cols() + c]; }
  double at(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols() + c]; }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  std::span<const double> row(int r) const;

  bool same_shape(const Tensor& o) const { return rows() == o.rows() && cols() == o.cols(); }
  bool all_finite() const;
  void fill(double v);
  // Requires size() == 1.
  double item() const;

  std::string shape_str() const;

 private:
  Tensor(std::vector<int> shape, std::vector<double> data)
      : shape_(std::move(shape)), data_(std::move(data)) {}

  std::vector<int> shape_;
  std::vector<double> data_;
};

bool exactly_equal(const Tensor& a, const Tensor& b);
double max_abs_diff(const Tensor& a, const Tensor& b);

}  // namespace gamot
