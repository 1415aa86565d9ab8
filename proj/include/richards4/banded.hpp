#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cassert>
#include <cmath>
#include <vector>

#include "richards4/error.hpp"

namespace richards4 {

/// Square band matrix with kl sub- and ku super-diagonals.
///
/// Storage reserves kl extra super-diagonals so that BandedLU can factor in
/// place with row pivoting (fill-in reaches kl + ku above the diagonal).
class BandedMatrix {
 public:
  BandedMatrix(int n, int kl, int ku)
      : n_(n), kl_(kl), ku_(ku), band_(Eigen::MatrixXd::Zero(n, 2 * kl + ku + 1)) {}

  int rows() const noexcept { return n_; }
  int lower() const noexcept { return kl_; }
  int upper() const noexcept { return ku_; }

  bool in_band(int i, int j) const noexcept { return j - i >= -kl_ && j - i <= ku_; }

  double& operator()(int i, int j) {
    assert(j - i >= -kl_ && j - i <= kl_ + ku_);
    return band_(i, j - i + kl_);
  }
  double operator()(int i, int j) const {
    if (j - i < -kl_ || j - i > kl_ + ku_) return 0.0;
    return band_(i, j - i + kl_);
  }

  Eigen::VectorXd operator*(const Eigen::VectorXd& x) const {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n_);
    for (int i = 0; i < n_; ++i) {
      const int j0 = std::max(0, i - kl_);
      const int j1 = std::min(n_ - 1, i + ku_);
      for (int j = j0; j <= j1; ++j) y[i] += (*this)(i, j) * x[j];
    }
    return y;
  }

  Eigen::MatrixXd to_dense() const {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (int j = std::max(0, i - kl_); j <= std::min(n_ - 1, i + ku_); ++j) a(i, j) = (*this)(i, j);
    return a;
  }

 private:
  int n_, kl_, ku_;
  Eigen::MatrixXd band_;
};

/// In-place banded LU with partial pivoting (the dgbtrf scheme).
class BandedLU {
 public:
  explicit BandedLU(BandedMatrix a) : lu_(std::move(a)), pivots_(lu_.rows()) {
    const int n = lu_.rows();
    const int kl = lu_.lower();
    const int reach = lu_.lower() + lu_.upper();
    for (int k = 0; k < n; ++k) {
      int p = k;
      double best = std::abs(lu_(k, k));
      for (int i = k + 1; i <= std::min(n - 1, k + kl); ++i) {
        if (std::abs(lu_(i, k)) > best) {
          best = std::abs(lu_(i, k));
          p = i;
        }
      }
      pivots_[k] = p;
      if (best == 0.0) throw ConvergenceError("banded LU: singular matrix", 0.0);
      if (p != k) {
        for (int j = k; j <= std::min(n - 1, k + reach); ++j) std::swap(lu_(k, j), lu_(p, j));
      }
      const double pivot = lu_(k, k);
      for (int i = k + 1; i <= std::min(n - 1, k + kl); ++i) {
        const double l = lu_(i, k) / pivot;
        lu_(i, k) = l;
        if (l == 0.0) continue;
        for (int j = k + 1; j <= std::min(n - 1, k + reach); ++j) lu_(i, j) -= l * lu_(k, j);
      }
    }
  }

  Eigen::VectorXd solve(Eigen::VectorXd b) const {
    const int n = lu_.rows();
    const int kl = lu_.lower();
    const int reach = lu_.lower() + lu_.upper();
    for (int k = 0; k < n; ++k) {
      std::swap(b[k], b[pivots_[k]]);
      for (int i = k + 1; i <= std::min(n - 1, k + kl); ++i) b[i] -= lu_(i, k) * b[k];
    }
    for (int k = n - 1; k >= 0; --k) {
      double s = b[k];
      for (int j = k + 1; j <= std::min(n - 1, k + reach); ++j) s -= lu_(k, j) * b[j];
      b[k] = s / lu_(k, k);
    }
    return b;
  }

 private:
  BandedMatrix lu_;
  std::vector<int> pivots_;
};

/// Gaussian elimination without row exchanges; true iff every pivot is
/// positive, i.e. A = L D U with D > 0 (positive definite for symmetric A).
inline bool positive_pivots(BandedMatrix a) {
  const int n = a.rows();
  const int kl = a.lower();
  const int ku = a.upper();
  for (int k = 0; k < n; ++k) {
    const double pivot = a(k, k);
    if (!(pivot > 0.0)) return false;
    for (int i = k + 1; i <= std::min(n - 1, k + kl); ++i) {
      const double l = a(i, k) / pivot;
      if (l == 0.0) continue;
      for (int j = k + 1; j <= std::min(n - 1, k + ku); ++j) a(i, j) -= l * a(k, j);
    }
  }
  return true;
}

}  // namespace richards4
