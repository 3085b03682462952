#pragma once

#include "conelab/types.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <vector>

namespace conelab {

struct NnlsResult {
  Vec x;
  double residual = 0.0;  // |A x - b|
};

/// Nonnegative least squares, min |A x - b| subject to x >= 0
/// (Lawson & Hanson active-set method).
inline NnlsResult nnls(const Mat& A, const Vec& b) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  Vec x = Vec::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  const double tol = 10.0 * std::numeric_limits<double>::epsilon() *
                     std::max<double>(1.0, A.cwiseAbs().maxCoeff()) *
                     static_cast<double>(std::max(m, n));

  auto solve_passive = [&](Vec& z) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < n; ++j)
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    z = Vec::Zero(n);
    if (idx.empty()) return;
    Mat Ap(m, static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) Ap.col(static_cast<Eigen::Index>(k)) = A.col(idx[k]);
    const Vec zp = Ap.colPivHouseholderQr().solve(b);
    for (std::size_t k = 0; k < idx.size(); ++k) z(idx[k]) = zp(static_cast<Eigen::Index>(k));
  };

  const int max_outer = static_cast<int>(3 * n + 10);
  for (int outer = 0; outer < max_outer; ++outer) {
    const Vec w = A.transpose() * (b - A * x);
    Eigen::Index best = -1;
    double best_w = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && w(j) > best_w) {
        best_w = w(j);
        best = j;
      }
    }
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = true;

    for (int inner = 0; inner < max_outer; ++inner) {
      Vec z;
      solve_passive(z);
      bool feasible = true;
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) feasible = false;
      if (feasible) {
        x = z;
        break;
      }
      double alpha = 1.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) {
          const double denom = x(j) - z(j);
          if (denom > 0.0) alpha = std::min(alpha, x(j) / denom);
        }
      }
      x += alpha * (z - x);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && x(j) <= tol) {
          passive[static_cast<std::size_t>(j)] = false;
          x(j) = 0.0;
        }
      }
    }
  }
  return {x, (A * x - b).norm()};
}

/// Least distance programming: the minimum-norm x with rows(A) x >= b, or
/// nullopt when the system is infeasible. Reduced to NNLS on [A^T; b^T].
inline std::optional<Vec> least_distance(const Mat& A, const Vec& b, double tol = 1e-10) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  Mat E(n + 1, m);
  E.topRows(n) = A.transpose();
  E.row(n) = b.transpose();
  Vec f = Vec::Zero(n + 1);
  f(n) = 1.0;
  const NnlsResult sol = nnls(E, f);
  const Vec r = E * sol.x - f;
  if (r.norm() <= tol || r(n) >= -tol) return std::nullopt;
  Vec x = -r.head(n) / r(n);
  return x;
}

}  // namespace conelab
