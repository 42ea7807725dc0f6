#pragma once

#include <cstddef>
#include <vector>

namespace radelast {

/**
 * Symmetric banded matrix, lower band storage: band(i, k) = A(i, i-k) for
 * k = 0..bandwidth. Entries outside the band are implicit zeros.
 */
class BandedMatrix {
 public:
  BandedMatrix() = default;
  BandedMatrix(std::size_t n, std::size_t bandwidth);

  std::size_t size() const { return n_; }
  std::size_t bandwidth() const { return bw_; }

  /// Symmetric access; |i-j| must be within the band for writes.
  double operator()(std::size_t i, std::size_t j) const;
  void add(std::size_t i, std::size_t j, double value);
  void add_diagonal(double shift);

  std::vector<double> multiply(const std::vector<double>& x) const;
  double quadratic_form(const std::vector<double>& x) const;

 private:
  friend class BandedCholesky;
  double& at(std::size_t i, std::size_t k) { return data_[i * (bw_ + 1) + k]; }
  double at(std::size_t i, std::size_t k) const { return data_[i * (bw_ + 1) + k]; }

  std::size_t n_ = 0;
  std::size_t bw_ = 0;
  std::vector<double> data_;
};

/// In-place LL^T of a banded SPD matrix. ok() is false on a nonpositive pivot.
class BandedCholesky {
 public:
  explicit BandedCholesky(BandedMatrix a);

  bool ok() const { return ok_; }
  std::vector<double> solve(const std::vector<double>& b) const;

 private:
  BandedMatrix l_;
  bool ok_ = true;
};

/// Solves A x = b, retrying with a diagonal shift growing by 10x on pivot failure.
/// shift_used reports the last shift (0 when the plain factorization succeeded).
std::vector<double> solve_spd_shifted(const BandedMatrix& a, const std::vector<double>& b,
                                      double* shift_used = nullptr);

}  // namespace radelast
