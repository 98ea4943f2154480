#include "mgad/matrix.hpp"

#include <cmath>
#include <stdexcept>

#include "mgad/parallel.hpp"

namespace mgad {

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b, std::size_t threads) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: inner dimensions differ");
  DenseMatrix c(a.rows(), b.cols());
  const std::size_t n = b.cols();
  parallel_for_rows(a.rows(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      double* ci = c.data() + i * n;
      const double* ai = a.data() + i * a.cols();
      for (std::size_t k = 0; k < a.cols(); ++k) {
        const double aik = ai[k];
        if (aik == 0.0) continue;
        const double* bk = b.data() + k * n;
        for (std::size_t j = 0; j < n; ++j) ci[j] += aik * bk[j];
      }
    }
  });
  return c;
}

DenseMatrix matmul_at_b(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("matmul_at_b: row counts differ");
  DenseMatrix c(a.cols(), b.cols());
  const std::size_t n = b.cols();
  for (std::size_t k = 0; k < a.rows(); ++k) {
    const double* ak = a.data() + k * a.cols();
    const double* bk = b.data() + k * n;
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double aki = ak[i];
      if (aki == 0.0) continue;
      double* ci = c.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += aki * bk[j];
    }
  }
  return c;
}

DenseMatrix matmul_a_bt_rows(const DenseMatrix& a, std::size_t row_begin, std::size_t row_end,
                             const DenseMatrix& b, std::size_t threads) {
  if (a.cols() != b.cols()) throw std::invalid_argument("matmul_a_bt_rows: column counts differ");
  if (row_end > a.rows() || row_begin > row_end)
    throw std::invalid_argument("matmul_a_bt_rows: bad row range");
  DenseMatrix c(row_end - row_begin, b.rows());
  const std::size_t d = a.cols();
  parallel_for_rows(row_end - row_begin, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double* ai = a.data() + (row_begin + i) * d;
      double* ci = c.data() + i * b.rows();
      for (std::size_t j = 0; j < b.rows(); ++j) {
        const double* bj = b.data() + j * d;
        double s = 0.0;
        for (std::size_t k = 0; k < d; ++k) s += ai[k] * bj[k];
        ci[j] = s;
      }
    }
  });
  return c;
}

void add_inplace(DenseMatrix& a, const DenseMatrix& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("add_inplace: shape mismatch");
  double* pa = a.data();
  const double* pb = b.data();
  for (std::size_t i = 0; i < a.size(); ++i) pa[i] += pb[i];
}

void scale_inplace(DenseMatrix& a, double s) {
  double* p = a.data();
  for (std::size_t i = 0; i < a.size(); ++i) p[i] *= s;
}

double frobenius_sq_diff(const DenseMatrix& a, const DenseMatrix& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("frobenius_sq_diff: shape mismatch");
  double s = 0.0;
  const double* pa = a.data();
  const double* pb = b.data();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = pa[i] - pb[i];
    s += d * d;
  }
  return s;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("max_abs_diff: shape mismatch");
  double m = 0.0;
  const double* pa = a.data();
  const double* pb = b.data();
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(pa[i] - pb[i]));
  return m;
}

bool all_finite(const DenseMatrix& a) {
  const double* p = a.data();
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!std::isfinite(p[i])) return false;
  return true;
}

}  // namespace mgad
