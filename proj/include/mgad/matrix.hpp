#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mgad {

// Row-major dense matrix of doubles. Plain value type; all heavy kernels are
// free functions so they can be reused on row blocks.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static DenseMatrix zeros(std::size_t rows, std::size_t cols) { return DenseMatrix(rows, cols); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  void fill(double v) { data_.assign(data_.size(), v); }

  bool same_shape(const DenseMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// C = A * B
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b, std::size_t threads = 1);

// C = A^T * B
DenseMatrix matmul_at_b(const DenseMatrix& a, const DenseMatrix& b);

// C = A * B^T restricted to rows [row_begin, row_end) of A; C has
// (row_end - row_begin) rows. Used for block-streamed Z Z^T products.
DenseMatrix matmul_a_bt_rows(const DenseMatrix& a, std::size_t row_begin, std::size_t row_end,
                             const DenseMatrix& b, std::size_t threads = 1);

void add_inplace(DenseMatrix& a, const DenseMatrix& b);
void scale_inplace(DenseMatrix& a, double s);

// sum_ij (a_ij - b_ij)^2
double frobenius_sq_diff(const DenseMatrix& a, const DenseMatrix& b);

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);

bool all_finite(const DenseMatrix& a);

}  // namespace mgad
