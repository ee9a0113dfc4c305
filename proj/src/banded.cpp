#include "cbs/banded.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "cbs/error.hpp"

namespace cbs {

BandMatrix::BandMatrix(std::size_t n, std::size_t lower, std::size_t upper)
    : n_(n), kl_(lower), ku_(upper), width_(2 * lower + upper + 1), data_(n * width_, 0.0) {}

double& BandMatrix::at(std::size_t row, std::size_t col) {
  if (row >= n_ || col >= n_ || !in_band(row, col)) {
    throw Error(ErrorCode::IndexOutOfRange,
                "band entry (" + std::to_string(row) + ", " + std::to_string(col) + ")");
  }
  return slot(row, col);
}

double BandMatrix::get(std::size_t row, std::size_t col) const {
  if (row >= n_ || col >= n_ || !in_band(row, col)) return 0.0;
  return slot(row, col);
}

std::vector<double> BandMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(n_, 0.0);
  for (std::size_t r = 0; r < n_; ++r) {
    const std::size_t c0 = r > kl_ ? r - kl_ : 0;
    const std::size_t c1 = std::min(n_ - 1, r + ku_);
    double acc = 0.0;
    for (std::size_t c = c0; c <= c1; ++c) acc += slot(r, c) * x[c];
    y[r] = acc;
  }
  return y;
}

std::vector<double> solve_banded(BandMatrix a, std::span<const double> rhs, double pivot_tol) {
  const std::size_t n = a.n_;
  const std::size_t kl = a.kl_;
  const std::size_t reach = a.kl_ + a.ku_;  // upper reach of U after pivoting
  if (rhs.size() != n) throw Error(ErrorCode::InvalidArgument, "rhs size does not match matrix");
  std::vector<double> b(rhs.begin(), rhs.end());

  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t last_row = std::min(n - 1, k + kl);
    const std::size_t last_col = std::min(n - 1, k + reach);

    std::size_t piv = k;
    double best = std::abs(a.slot(k, k));
    for (std::size_t r = k + 1; r <= last_row; ++r) {
      const double v = std::abs(a.slot(r, k));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    double row_norm = 0.0;
    for (std::size_t c = k; c <= last_col; ++c) row_norm = std::max(row_norm, std::abs(a.slot(piv, c)));
    if (row_norm == 0.0 || best < pivot_tol * row_norm) {
      throw Error(ErrorCode::SingularSystem, "pivot " + std::to_string(best) + " at column " + std::to_string(k));
    }
    if (piv != k) {
      for (std::size_t c = k; c <= last_col; ++c) std::swap(a.slot(k, c), a.slot(piv, c));
      std::swap(b[k], b[piv]);
    }

    const double pivot = a.slot(k, k);
    for (std::size_t r = k + 1; r <= last_row; ++r) {
      const double m = a.slot(r, k) / pivot;
      if (m == 0.0) continue;
      a.slot(r, k) = 0.0;
      for (std::size_t c = k + 1; c <= last_col; ++c) a.slot(r, c) -= m * a.slot(k, c);
      b[r] -= m * b[k];
    }
  }

  std::vector<double> x(n, 0.0);
  for (std::size_t k = n; k-- > 0;) {
    const std::size_t last_col = std::min(n - 1, k + reach);
    double acc = b[k];
    for (std::size_t c = k + 1; c <= last_col; ++c) acc -= a.slot(k, c) * x[c];
    x[k] = acc / a.slot(k, k);
  }
  return x;
}

}  // namespace cbs
