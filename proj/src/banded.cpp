#include "breakup/banded.hpp"

#include <lapacke.h>

#include <algorithm>
#include <string>

#include "breakup/errors.hpp"

namespace breakup {

BandMatrix::BandMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ld_(2 * kl + ku + 1), ab_(std::size_t(ld_) * n, 0.0) {
  if (n <= 0 || kl < 0 || ku < 0) throw ShapeError("BandMatrix: bad dimensions");
}

double& BandMatrix::operator()(int i, int j) {
  if (!in_band(i, j)) throw ShapeError("BandMatrix: entry outside the band");
  return ab_[std::size_t(j) * ld_ + (kl_ + ku_ + i - j)];
}

double BandMatrix::operator()(int i, int j) const {
  if (!in_band(i, j)) return 0.0;
  return ab_[std::size_t(j) * ld_ + (kl_ + ku_ + i - j)];
}

void BandMatrix::zero_row(int i) {
  for (int j = std::max(0, i - kl_); j <= std::min(n_ - 1, i + ku_); ++j) (*this)(i, j) = 0.0;
}

std::vector<double> BandMatrix::solve(const std::vector<double>& b) const {
  if (int(b.size()) != n_) throw ShapeError("BandMatrix::solve: rhs size mismatch");
  std::vector<double> ab = ab_;
  std::vector<double> x = b;
  std::vector<lapack_int> piv(n_);
  const lapack_int info =
      LAPACKE_dgbsv(LAPACK_COL_MAJOR, n_, kl_, ku_, 1, ab.data(), ld_, piv.data(), x.data(), n_);
  if (info > 0) throw SingularityError("banded LU: zero pivot at row " + std::to_string(info));
  if (info < 0) throw ShapeError("banded LU: bad argument " + std::to_string(-info));
  return x;
}

}  // namespace breakup
