#include "rolechron/align.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include <fmt/format.h>

#include "rolechron/linalg.hpp"

namespace rolechron {

AlignmentResult procrustes_align(const EmbeddingSpace& source, const EmbeddingSpace& target,
                                 std::span<const UserId> anchors, const AlignmentOptions& options) {
  if (anchors.size() < 2)
    throw std::invalid_argument(fmt::format("procrustes_align: need at least 2 anchors, got {}", anchors.size()));
  if (source.dim() != target.dim())
    throw std::invalid_argument(
        fmt::format("procrustes_align: dimension mismatch {} vs {}", source.dim(), target.dim()));
  std::vector<std::string> missing;
  for (const auto& id : anchors) {
    if (!source.contains(id)) missing.push_back(id + " (source)");
    if (!target.contains(id)) missing.push_back(id + " (target)");
  }
  if (!missing.empty())
    throw std::invalid_argument(fmt::format("procrustes_align: anchors missing: {}", fmt::join(missing, ", ")));

  Eigen::MatrixXd a = source.gather(anchors);
  Eigen::MatrixXd b = target.gather(anchors);
  AlignmentResult result;
  result.source_mean = Eigen::RowVectorXd::Zero(a.cols());
  result.target_mean = Eigen::RowVectorXd::Zero(b.cols());
  if (options.center) {
    result.source_mean = a.colwise().mean();
    result.target_mean = b.colwise().mean();
    a.rowwise() -= result.source_mean;
    b.rowwise() -= result.target_mean;
  }
  if (options.scale) {
    const double na = a.norm(), nb = b.norm();
    if (na == 0.0 || nb == 0.0) throw std::invalid_argument("procrustes_align: anchor block has zero norm");
    a /= na;
    b /= nb;
  }

  auto solution = orthogonal_procrustes(a, b);
  result.rotation = std::move(solution.rotation);
  result.residual = solution.residual;
  result.rank_deficient = solution.rank_deficient();
  result.anchors.assign(anchors.begin(), anchors.end());
  result.source_id = source.provenance().snapshot_id;
  result.target_id = target.provenance().snapshot_id;

  Eigen::MatrixXd moved = (source.vectors().rowwise() - result.source_mean) * result.rotation;
  moved.rowwise() += result.target_mean;
  result.aligned_source = source.with_vectors(std::move(moved));
  return result;
}

void write_alignment(std::ostream& out, const AlignmentResult& result) {
  const auto& q = result.rotation;
  out << "rotation " << q.rows() << '\n';
  for (Eigen::Index i = 0; i < q.rows(); ++i) {
    std::string line;
    for (Eigen::Index j = 0; j < q.cols(); ++j) fmt::format_to(std::back_inserter(line), "{}{}", j ? " " : "", q(i, j));
    out << line << '\n';
  }
  out << "anchors " << result.anchors.size() << '\n';
  for (const auto& id : result.anchors) out << id << '\n';
  out << fmt::format("residual {}\n", result.residual);
  out << "rank_deficient " << (result.rank_deficient ? 1 : 0) << '\n';
}

CosineStats cosine_agreement(const EmbeddingSpace& a, const EmbeddingSpace& b, std::span<const UserId> users) {
  if (users.empty()) throw std::invalid_argument("cosine_agreement: no shared users");
  std::vector<double> cos;
  cos.reserve(users.size());
  for (const auto& id : users) cos.push_back(cosine_similarity(a.row(id), b.row(id)));
  CosineStats s;
  s.n = cos.size();
  for (double c : cos) s.mean += c;
  s.mean /= static_cast<double>(s.n);
  for (double c : cos) s.std += (c - s.mean) * (c - s.mean);
  s.std = std::sqrt(s.std / static_cast<double>(s.n));
  return s;
}

AlignmentEvaluation evaluate_alignment(const EmbeddingSpace& target, const EmbeddingSpace& source,
                                       const EmbeddingSpace& aligned_source, std::span<const UserId> users) {
  return {cosine_agreement(target, source, users), cosine_agreement(target, aligned_source, users)};
}

void write_alignment_eval_csv(std::ostream& out, std::span<const AlignmentEvalRow> rows) {
  out << "subreddit,window_pair,n_users,baseline_mean,baseline_std,aligned_mean,aligned_std\n";
  for (const auto& r : rows) {
    const auto& e = r.evaluation;
    out << fmt::format("{},{},{},{:.6f},{:.6f},{:.6f},{:.6f}\n", r.subreddit, r.window_pair, e.aligned.n,
                       e.baseline.mean, e.baseline.std, e.aligned.mean, e.aligned.std);
  }
}

std::string window_tag(int window) { return fmt::format("T{}", window); }

AmalgamatedSpace amalgamate(const EmbeddingSpace& target, int target_window, const EmbeddingSpace& aligned_source,
                            int source_window) {
  if (!aligned_source.empty() && aligned_source.dim() != target.dim())
    throw std::invalid_argument(
        fmt::format("amalgamate: dimension mismatch {} vs {}", target.dim(), aligned_source.dim()));
  AmalgamatedSpace out;
  out.label = fmt::format("{}-{} Aligned", window_tag(target_window), window_tag(source_window));
  out.vectors.resize(target.rows() + aligned_source.rows(), target.dim());
  out.vectors.topRows(target.rows()) = target.vectors();
  if (!aligned_source.empty()) out.vectors.bottomRows(aligned_source.rows()) = aligned_source.vectors();
  out.keys.reserve(static_cast<std::size_t>(out.vectors.rows()));
  for (const auto& id : target.ids()) out.keys.push_back({id, target_window});
  for (const auto& id : aligned_source.ids()) out.keys.push_back({id, source_window});
  return out;
}

PcaProjection pca_project(const AmalgamatedSpace& space) {
  if (space.vectors.rows() < 3)
    throw std::invalid_argument(fmt::format("pca_project: need at least 3 rows, got {}", space.vectors.rows()));
  if (space.vectors.cols() < 2) throw std::invalid_argument("pca_project: need at least 2 dimensions");
  const auto axes = principal_axes(space.vectors, 2);
  if (!(axes.total_variance > 0.0)) throw std::invalid_argument("pca_project: zero variance");

  PcaProjection p;
  p.keys = space.keys;
  p.components = axes.components;
  p.mean = axes.mean;
  p.explained = axes.variances / axes.total_variance;
  p.coords = (space.vectors.rowwise() - p.mean) * p.components.transpose();
  return p;
}

std::vector<RowKey> shared_keys(const PcaProjection& a, const PcaProjection& b) {
  std::vector<RowKey> ka = a.keys, kb = b.keys, out;
  std::sort(ka.begin(), ka.end());
  std::sort(kb.begin(), kb.end());
  std::set_intersection(ka.begin(), ka.end(), kb.begin(), kb.end(), std::back_inserter(out));
  return out;
}

SignAlignment sign_align(const PcaProjection& reference, const PcaProjection& other, std::span<const RowKey> shared) {
  if (shared.empty()) throw std::invalid_argument("sign_align: no shared rows");
  std::map<RowKey, Eigen::Index> ref_row, other_row;
  for (std::size_t i = 0; i < reference.keys.size(); ++i) ref_row.emplace(reference.keys[i], static_cast<Eigen::Index>(i));
  for (std::size_t i = 0; i < other.keys.size(); ++i) other_row.emplace(other.keys[i], static_cast<Eigen::Index>(i));

  SignAlignment out;
  out.projection = other;
  for (const auto& key : shared) {
    auto r = ref_row.find(key);
    auto o = other_row.find(key);
    if (r == ref_row.end() || o == other_row.end())
      throw std::invalid_argument(fmt::format("sign_align: row {}@{} not in both projections", key.user,
                                              window_tag(key.window)));
    for (int j = 0; j < 2; ++j) out.agreement[j] += reference.coords(r->second, j) * other.coords(o->second, j);
  }
  for (int j = 0; j < 2; ++j) {
    if (out.agreement[j] == 0.0) out.zero_agreement_warning = true;
    if (out.agreement[j] < 0.0) {
      out.flipped[j] = true;
      out.projection.coords.col(j) *= -1.0;
      out.projection.components.row(j) *= -1.0;
    }
  }
  return out;
}

}  // namespace rolechron
