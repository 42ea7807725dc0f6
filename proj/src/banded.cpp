#include "radelast/banded.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace radelast {

BandedMatrix::BandedMatrix(std::size_t n, std::size_t bandwidth)
    : n_(n), bw_(bandwidth), data_(n * (bandwidth + 1), 0.0) {}

double BandedMatrix::operator()(std::size_t i, std::size_t j) const {
  if (i < j) std::swap(i, j);
  if (i - j > bw_) return 0.0;
  return at(i, i - j);
}

void BandedMatrix::add(std::size_t i, std::size_t j, double value) {
  if (i < j) std::swap(i, j);
  if (i - j > bw_) throw std::out_of_range("BandedMatrix::add outside band");
  at(i, i - j) += value;
}

void BandedMatrix::add_diagonal(double shift) {
  for (std::size_t i = 0; i < n_; ++i) at(i, 0) += shift;
}

std::vector<double> BandedMatrix::multiply(const std::vector<double>& x) const {
  std::vector<double> y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    y[i] += at(i, 0) * x[i];
    for (std::size_t k = 1; k <= bw_ && k <= i; ++k) {
      const double a = at(i, k);
      y[i] += a * x[i - k];
      y[i - k] += a * x[i];
    }
  }
  return y;
}

double BandedMatrix::quadratic_form(const std::vector<double>& x) const {
  const auto y = multiply(x);
  double s = 0.0;
  for (std::size_t i = 0; i < n_; ++i) s += x[i] * y[i];
  return s;
}

BandedCholesky::BandedCholesky(BandedMatrix a) : l_(std::move(a)) {
  const std::size_t n = l_.n_;
  const std::size_t bw = l_.bw_;
  for (std::size_t i = 0; i < n; ++i) {
    // Row i of L: L(i,j) for j in [i-bw, i].
    const std::size_t j0 = i > bw ? i - bw : 0;
    for (std::size_t j = j0; j <= i; ++j) {
      double s = l_.at(i, i - j);
      const std::size_t k0 = std::max(j0, j > bw ? j - bw : 0);
      for (std::size_t k = k0; k < j; ++k) s -= l_.at(i, i - k) * l_.at(j, j - k);
      if (j == i) {
        if (!(s > 0.0) || !std::isfinite(s)) {
          ok_ = false;
          return;
        }
        l_.at(i, 0) = std::sqrt(s);
      } else {
        l_.at(i, i - j) = s / l_.at(j, 0);
      }
    }
  }
}

std::vector<double> BandedCholesky::solve(const std::vector<double>& b) const {
  if (!ok_) throw std::logic_error("BandedCholesky::solve on failed factorization");
  const std::size_t n = l_.n_;
  const std::size_t bw = l_.bw_;
  std::vector<double> y(b);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j0 = i > bw ? i - bw : 0;
    for (std::size_t j = j0; j < i; ++j) y[i] -= l_.at(i, i - j) * y[j];
    y[i] /= l_.at(i, 0);
  }
  for (std::size_t ii = n; ii-- > 0;) {
    for (std::size_t k = 1; k <= bw && ii + k < n; ++k) y[ii] -= l_.at(ii + k, k) * y[ii + k];
    y[ii] /= l_.at(ii, 0);
  }
  return y;
}

std::vector<double> solve_spd_shifted(const BandedMatrix& a, const std::vector<double>& b, double* shift_used) {
  double scale = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) scale = std::max(scale, std::abs(a(i, i)));
  if (scale == 0.0) scale = 1.0;
  double shift = 0.0;
  for (int attempt = 0; attempt < 40; ++attempt) {
    BandedMatrix m = a;
    if (shift > 0.0) m.add_diagonal(shift);
    BandedCholesky chol(std::move(m));
    if (chol.ok()) {
      if (shift_used) *shift_used = shift;
      return chol.solve(b);
    }
    shift = shift == 0.0 ? 1e-12 * scale : shift * 10.0;
  }
  throw std::runtime_error("banded Cholesky failed even with a diagonal shift");
}

}  // namespace radelast
