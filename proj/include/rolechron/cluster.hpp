#ifndef ROLECHRON_CLUSTER_HPP
#define ROLECHRON_CLUSTER_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "rolechron/rng.hpp"

namespace rolechron {

struct KMeansOptions {
  std::size_t n_init = 10;
  std::size_t max_iter = 300;
  double tol = 1e-6;  // max centroid shift
};

template <typename Scalar>
struct KMeansResult {
  std::vector<int> labels;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> centroids;  // k x dims
  Scalar inertia = 0;
  std::uint64_t seed = 0;  // seed of the winning restart
};

namespace detail {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Derived, typename Scalar = typename Derived::Scalar>
Mat<Scalar> kmeanspp_init(const Eigen::MatrixBase<Derived>& x, std::size_t k, Engine& rng) {
  const auto n = x.rows();
  Mat<Scalar> c(static_cast<Eigen::Index>(k), x.cols());
  c.row(0) = x.row(static_cast<Eigen::Index>(uniform_index(rng, static_cast<std::uint64_t>(n))));
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> d2(n);
  for (Eigen::Index i = 0; i < n; ++i) d2(i) = (x.row(i) - c.row(0)).squaredNorm();
  for (std::size_t j = 1; j < k; ++j) {
    const Scalar total = d2.sum();
    Eigen::Index pick = 0;
    if (total > Scalar(0)) {
      Scalar r = static_cast<Scalar>(uniform01(rng)) * total;
      pick = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (r < d2(i)) {
          pick = i;
          break;
        }
        r -= d2(i);
      }
    } else {
      pick = static_cast<Eigen::Index>(uniform_index(rng, static_cast<std::uint64_t>(n)));
    }
    c.row(static_cast<Eigen::Index>(j)) = x.row(pick);
    for (Eigen::Index i = 0; i < n; ++i) d2(i) = std::min(d2(i), (x.row(i) - c.row(static_cast<Eigen::Index>(j))).squaredNorm());
  }
  return c;
}

template <typename Derived, typename Scalar = typename Derived::Scalar>
void recompute_means(const Eigen::MatrixBase<Derived>& x, const std::vector<int>& labels, Mat<Scalar>& c,
                     std::vector<std::size_t>& sizes) {
  c.setZero();
  std::fill(sizes.begin(), sizes.end(), 0);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    c.row(labels[static_cast<std::size_t>(i)]) += x.row(i);
    ++sizes[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])];
  }
  for (Eigen::Index j = 0; j < c.rows(); ++j)
    if (sizes[static_cast<std::size_t>(j)]) c.row(j) /= static_cast<Scalar>(sizes[static_cast<std::size_t>(j)]);
}

// Moves the point farthest from its centroid into each empty cluster.
template <typename Derived, typename Scalar = typename Derived::Scalar>
void repair_empty(const Eigen::MatrixBase<Derived>& x, std::vector<int>& labels, Mat<Scalar>& c,
                  std::vector<std::size_t>& sizes) {
  for (std::size_t j = 0; j < sizes.size(); ++j) {
    if (sizes[j]) continue;
    Eigen::Index far = -1;
    Scalar best = -1;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const auto l = static_cast<std::size_t>(labels[static_cast<std::size_t>(i)]);
      if (sizes[l] < 2) continue;
      const Scalar d = (x.row(i) - c.row(static_cast<Eigen::Index>(l))).squaredNorm();
      if (d > best) {
        best = d;
        far = i;
      }
    }
    if (far < 0) return;
    labels[static_cast<std::size_t>(far)] = static_cast<int>(j);
    recompute_means(x, labels, c, sizes);
  }
}

// One sweep of single-point transfers that lower the total inertia.
template <typename Derived, typename Scalar = typename Derived::Scalar>
bool hartigan_sweep(const Eigen::MatrixBase<Derived>& x, std::vector<int>& labels, Mat<Scalar>& c,
                    std::vector<std::size_t>& sizes) {
  bool moved = false;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const auto from = static_cast<std::size_t>(labels[static_cast<std::size_t>(i)]);
    const Scalar nf = static_cast<Scalar>(sizes[from]);
    if (sizes[from] < 2) continue;
    const Scalar removal = nf / (nf - 1) * (x.row(i) - c.row(static_cast<Eigen::Index>(from))).squaredNorm();
    std::size_t to = from;
    Scalar best = removal;
    for (std::size_t j = 0; j < sizes.size(); ++j) {
      if (j == from) continue;
      const Scalar nj = static_cast<Scalar>(sizes[j]);
      const Scalar add = nj / (nj + 1) * (x.row(i) - c.row(static_cast<Eigen::Index>(j))).squaredNorm();
      if (add < best * (Scalar(1) - Scalar(1e-12))) {
        best = add;
        to = j;
      }
    }
    if (to == from) continue;
    const auto f = static_cast<Eigen::Index>(from), t = static_cast<Eigen::Index>(to);
    c.row(f) = (c.row(f) * nf - x.row(i)) / (nf - 1);
    const Scalar nt = static_cast<Scalar>(sizes[to]);
    c.row(t) = (c.row(t) * nt + x.row(i)) / (nt + 1);
    --sizes[from];
    ++sizes[to];
    labels[static_cast<std::size_t>(i)] = static_cast<int>(to);
    moved = true;
  }
  return moved;
}

template <typename Derived, typename Scalar = typename Derived::Scalar>
KMeansResult<Scalar> kmeans_single(const Eigen::MatrixBase<Derived>& x, std::size_t k, std::uint64_t seed,
                                   const KMeansOptions& options) {
  auto rng = make_engine(seed);
  KMeansResult<Scalar> r;
  r.seed = seed;
  r.centroids = kmeanspp_init(x, k, rng);
  const auto n = x.rows();
  r.labels.assign(static_cast<std::size_t>(n), 0);
  std::vector<std::size_t> sizes(k, 0);

  for (std::size_t round = 0; round < options.max_iter; ++round) {
    for (std::size_t iter = 0; iter < options.max_iter; ++iter) {
      for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index best;
        (r.centroids.rowwise() - x.row(i)).rowwise().squaredNorm().minCoeff(&best);
        r.labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
      }
      const Mat<Scalar> previous = r.centroids;
      recompute_means(x, r.labels, r.centroids, sizes);
      repair_empty(x, r.labels, r.centroids, sizes);
      const Scalar shift = (r.centroids - previous).rowwise().norm().maxCoeff();
      if (shift < static_cast<Scalar>(options.tol)) break;
    }
    bool moved = false;
    while (hartigan_sweep(x, r.labels, r.centroids, sizes)) moved = true;
    recompute_means(x, r.labels, r.centroids, sizes);
    if (!moved) break;
  }
  r.inertia = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    r.inertia += (x.row(i) - r.centroids.row(r.labels[static_cast<std::size_t>(i)])).squaredNorm();
  return r;
}

}  // namespace detail

/// Euclidean k-means: k-means++ seeding, Lloyd iterations refined by
/// single-point transfers, best inertia over `n_init` seeded restarts.
template <typename Derived>
KMeansResult<typename Derived::Scalar> kmeans(const Eigen::MatrixBase<Derived>& points, std::size_t k,
                                              std::uint64_t seed, const KMeansOptions& options = {}) {
  if (k == 0) throw std::invalid_argument("kmeans: k must be >= 1");
  if (k > static_cast<std::size_t>(points.rows()))
    throw std::invalid_argument("kmeans: k exceeds the number of points");
  KMeansResult<typename Derived::Scalar> best;
  for (std::size_t run = 0; run < std::max<std::size_t>(1, options.n_init); ++run) {
    auto r = detail::kmeans_single(points, k, derive_seed(seed, run), options);
    if (run == 0 || r.inertia < best.inertia) best = std::move(r);
  }
  return best;
}

struct ElbowResult {
  std::size_t k_star = 0;
  std::map<std::size_t, double> inertia;  // k -> inertia, k_min-1 .. k_max+1
  std::map<std::size_t, double> second_difference;
  bool flat_warning = false;
  bool clamped_warning = false;  // k_max lowered to |points| - 1
};

/// k* = argmax over k in [k_min, k_max] of I(k-1) - 2 I(k) + I(k+1); ties go
/// to the smaller k; no positive value gives k_min with a warning.
template <typename Derived>
ElbowResult elbow_k(const Eigen::MatrixBase<Derived>& points, std::uint64_t seed, std::size_t k_min = 2,
                    std::size_t k_max = 10, const KMeansOptions& options = {}) {
  if (k_min < 2) throw std::invalid_argument("elbow_k: k_min must be >= 2");
  const auto n = static_cast<std::size_t>(points.rows());
  ElbowResult out;
  if (n <= k_max) {
    k_max = n == 0 ? 0 : n - 1;
    out.clamped_warning = true;
  }
  if (k_max < k_min) throw std::invalid_argument("elbow_k: too few points for the requested k range");

  for (std::size_t k = k_min - 1; k <= k_max + 1; ++k)
    out.inertia[k] = static_cast<double>(kmeans(points, k, derive_seed(seed, k), options).inertia);
  const double scale = out.inertia.at(k_min - 1);
  double best = 0.0;
  for (std::size_t k = k_min; k <= k_max; ++k) {
    const double d2 = out.inertia.at(k - 1) - 2.0 * out.inertia.at(k) + out.inertia.at(k + 1);
    out.second_difference[k] = d2;
    if (d2 > best && d2 > 1e-12 * scale) {
      best = d2;
      out.k_star = k;
    }
  }
  if (out.k_star == 0) {
    out.k_star = k_min;
    out.flat_warning = true;
  }
  return out;
}

/// Mean silhouette; singleton clusters and a = b = 0 contribute 0.
template <typename Derived>
typename Derived::Scalar silhouette(const Eigen::MatrixBase<Derived>& points, const std::vector<int>& labels) {
  using Scalar = typename Derived::Scalar;
  const auto n = points.rows();
  if (static_cast<std::size_t>(n) != labels.size()) throw std::invalid_argument("silhouette: label count mismatch");
  std::map<int, std::size_t> size;
  for (int l : labels) ++size[l];
  if (size.size() < 2) throw std::invalid_argument("silhouette: need at least 2 clusters");

  Scalar total = 0;
  std::map<int, Scalar> sum;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int own = labels[static_cast<std::size_t>(i)];
    if (size[own] == 1) continue;
    for (auto& [l, s] : sum) s = 0;
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i) sum[labels[static_cast<std::size_t>(j)]] += (points.row(i) - points.row(j)).norm();
    const Scalar a = sum[own] / static_cast<Scalar>(size[own] - 1);
    Scalar b = std::numeric_limits<Scalar>::infinity();
    for (const auto& [l, count] : size)
      if (l != own) b = std::min(b, sum[l] / static_cast<Scalar>(count));
    const Scalar denom = std::max(a, b);
    if (denom > 0) total += (b - a) / denom;
  }
  return total / static_cast<Scalar>(n);
}

}  // namespace rolechron

#endif
