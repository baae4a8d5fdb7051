#pragma once

#include <vector>

namespace breakup {

/// Square band matrix in LAPACK general-band storage (column major, with
/// kl extra rows for the fill-in of partial pivoting).
class BandMatrix {
 public:
  BandMatrix(int n, int kl, int ku);

  int size() const { return n_; }
  int lower() const { return kl_; }
  int upper() const { return ku_; }
  bool in_band(int i, int j) const { return j - i <= ku_ && i - j <= kl_; }
  double& operator()(int i, int j);
  double operator()(int i, int j) const;
  void zero_row(int i);

  /// Solves A x = b by banded LU; the matrix itself is left untouched.
  std::vector<double> solve(const std::vector<double>& b) const;

 private:
  int n_, kl_, ku_, ld_;
  std::vector<double> ab_;
};

}  // namespace breakup
