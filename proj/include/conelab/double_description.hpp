#pragma once

// Double description method for pointed polyhedral cones: given rows h_i,
// enumerate the extreme rays of {x : h_i . x >= 0 for all i}. The same
// routine converts generators to facet normals (apply it to the generators)
// and facet normals to generators.

#include "conelab/linalg.hpp"
#include "conelab/types.hpp"

#include <bit>
#include <cstdint>
#include <vector>

namespace conelab {

namespace detail {

class ZeroSet {
 public:
  ZeroSet() = default;
  explicit ZeroSet(std::size_t bits) : words_((bits + 63) / 64, 0) {}

  void set(std::size_t i) { words_[i / 64] |= (std::uint64_t{1} << (i % 64)); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }

  ZeroSet operator&(const ZeroSet& o) const {
    ZeroSet r;
    r.words_.resize(words_.size());
    for (std::size_t k = 0; k < words_.size(); ++k) r.words_[k] = words_[k] & o.words_[k];
    return r;
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  bool contains(const ZeroSet& o) const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if ((o.words_[k] & ~words_[k]) != 0) return false;
    return true;
  }

 private:
  std::vector<std::uint64_t> words_;
};

struct Ray {
  Vec dir;
  ZeroSet zeros;
};

}  // namespace detail

/// Extreme rays (unit length) of the cone {x : rows(H) x >= 0}. The cone must
/// be pointed, i.e. H must have full column rank; otherwise Degenerate.
/// Returns an empty list when the cone is {0}.
inline std::vector<Vec> extreme_rays(const Mat& H_in, double tol = 1e-9) {
  const Eigen::Index d = H_in.cols();
  const Eigen::Index m = H_in.rows();
  if (d == 0) return {};
  Mat H = H_in;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double nrm = H.row(i).norm();
    if (nrm > 0.0) H.row(i) /= nrm;
  }
  if (m < d || numerical_rank(H, 1e-10) < d) {
    throw Error(ErrorCode::Degenerate, "extreme_rays: constraint matrix does not have full column rank");
  }

  // Initial simplicial cone from d well-conditioned rows.
  Eigen::ColPivHouseholderQR<Mat> qr(H.transpose());
  const auto& perm = qr.colsPermutation().indices();
  std::vector<Eigen::Index> init(static_cast<std::size_t>(d));
  std::vector<bool> used(static_cast<std::size_t>(m), false);
  Mat H0(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    init[static_cast<std::size_t>(k)] = perm(k);
    used[static_cast<std::size_t>(perm(k))] = true;
    H0.row(k) = H.row(perm(k));
  }
  const Mat R0 = H0.inverse();

  std::vector<detail::Ray> rays;
  rays.reserve(static_cast<std::size_t>(d));
  for (Eigen::Index j = 0; j < d; ++j) {
    detail::Ray ray{R0.col(j).normalized(), detail::ZeroSet(static_cast<std::size_t>(m))};
    for (Eigen::Index k = 0; k < d; ++k)
      if (k != j) ray.zeros.set(static_cast<std::size_t>(init[static_cast<std::size_t>(k)]));
    rays.push_back(std::move(ray));
  }

  const std::size_t need = d >= 2 ? static_cast<std::size_t>(d - 2) : 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (used[static_cast<std::size_t>(i)]) continue;
    const auto row = H.row(i);
    std::vector<double> val(rays.size());
    std::vector<std::size_t> pos, neg, zero;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      val[r] = row.dot(rays[r].dir);
      if (val[r] > tol) pos.push_back(r);
      else if (val[r] < -tol) neg.push_back(r);
      else zero.push_back(r);
    }
    if (neg.empty()) {
      for (std::size_t r : zero) rays[r].zeros.set(static_cast<std::size_t>(i));
      continue;
    }

    std::vector<detail::Ray> next;
    next.reserve(pos.size() + zero.size());
    for (std::size_t p : pos) next.push_back(rays[p]);
    for (std::size_t z : zero) {
      next.push_back(rays[z]);
      next.back().zeros.set(static_cast<std::size_t>(i));
    }
    for (std::size_t p : pos) {
      for (std::size_t q : neg) {
        detail::ZeroSet common = rays[p].zeros & rays[q].zeros;
        if (common.count() < need) continue;
        // Combinatorial adjacency: no third ray vanishes on all of `common`.
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
          if (r == p || r == q) continue;
          if (rays[r].zeros.contains(common)) adjacent = false;
        }
        if (!adjacent) continue;
        Vec dir = val[p] * rays[q].dir - val[q] * rays[p].dir;
        const double nrm = dir.norm();
        if (nrm <= 1e-14) continue;
        common.set(static_cast<std::size_t>(i));
        next.push_back({dir / nrm, std::move(common)});
      }
    }
    rays = std::move(next);
  }

  std::vector<Vec> out;
  for (auto& ray : rays) {
    bool dup = false;
    for (const Vec& v : out) {
      if ((v - ray.dir).norm() < 1e-9) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(std::move(ray.dir));
  }
  return out;
}

inline Mat rows_of(const std::vector<Vec>& vs, Eigen::Index n) {
  Mat M(static_cast<Eigen::Index>(vs.size()), n);
  for (std::size_t i = 0; i < vs.size(); ++i) M.row(static_cast<Eigen::Index>(i)) = vs[i].transpose();
  return M;
}

}  // namespace conelab
