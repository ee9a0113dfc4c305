#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cbs {

/// Square matrix with `lower` sub-diagonals and `upper` super-diagonals.
/// Storage reserves room for the extra `lower` super-diagonals that partial
/// pivoting can fill in, so factorization happens in place.
class BandMatrix {
 public:
  BandMatrix(std::size_t n, std::size_t lower, std::size_t upper);

  std::size_t size() const { return n_; }
  std::size_t lower() const { return kl_; }
  std::size_t upper() const { return ku_; }

  /// Mutable access; (row, col) must lie inside the declared band.
  double& at(std::size_t row, std::size_t col);
  double get(std::size_t row, std::size_t col) const;

  bool in_band(std::size_t row, std::size_t col) const {
    return col + kl_ >= row && col <= row + ku_;
  }

  /// y = A x using the declared band.
  std::vector<double> multiply(std::span<const double> x) const;

 private:
  friend std::vector<double> solve_banded(BandMatrix a, std::span<const double> rhs, double pivot_tol);

  double& slot(std::size_t row, std::size_t col) { return data_[row * width_ + (col + kl_ - row)]; }
  double slot(std::size_t row, std::size_t col) const { return data_[row * width_ + (col + kl_ - row)]; }

  std::size_t n_;
  std::size_t kl_;
  std::size_t ku_;
  std::size_t width_;
  std::vector<double> data_;
};

/// Gaussian elimination with partial pivoting restricted to the band.
/// Throws Error(SingularSystem) when the chosen pivot is below
/// `pivot_tol` times the infinity norm of its row.
std::vector<double> solve_banded(BandMatrix a, std::span<const double> rhs, double pivot_tol = 1e-12);

}  // namespace cbs
