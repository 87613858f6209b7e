#ifndef ROLECHRON_ALIGN_HPP
#define ROLECHRON_ALIGN_HPP

#include <array>
#include <compare>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rolechron/embedding_space.hpp"

namespace rolechron {

struct AlignmentOptions {
  bool center = true;  // subtract anchor means before solving
  bool scale = true;   // unit Frobenius norm of each anchor block before solving
};

struct AlignmentResult {
  Eigen::MatrixXd rotation;  // d x d, applied on the right of row vectors
  std::vector<UserId> anchors;
  std::string source_id;
  std::string target_id;
  EmbeddingSpace aligned_source;
  double residual = 0.0;  // ||A Q - B||_F on the normalised anchor blocks
  bool rank_deficient = false;
  Eigen::RowVectorXd source_mean;
  Eigen::RowVectorXd target_mean;
};

/// Rotates `source` onto `target` using the anchor rows. Every source row x
/// maps to (x - source_mean) Q + target_mean; vectors are not rescaled.
AlignmentResult procrustes_align(const EmbeddingSpace& source, const EmbeddingSpace& target,
                                 std::span<const UserId> anchors, const AlignmentOptions& options = {});

/// Text: `rotation d`, d rows, `anchors n`, n ids, `residual r`.
void write_alignment(std::ostream& out, const AlignmentResult& result);

struct CosineStats {
  double mean = 0.0;
  double std = 0.0;  // population
  std::size_t n = 0;
};

/// Mean and std of cos(a_u, b_u) over `users`.
CosineStats cosine_agreement(const EmbeddingSpace& a, const EmbeddingSpace& b, std::span<const UserId> users);

struct AlignmentEvaluation {
  CosineStats baseline;  // target vs unaligned source
  CosineStats aligned;   // target vs aligned source
};

AlignmentEvaluation evaluate_alignment(const EmbeddingSpace& target, const EmbeddingSpace& source,
                                       const EmbeddingSpace& aligned_source, std::span<const UserId> users);

struct AlignmentEvalRow {
  std::string subreddit;
  std::string window_pair;
  AlignmentEvaluation evaluation;
};

void write_alignment_eval_csv(std::ostream& out, std::span<const AlignmentEvalRow> rows);

struct RowKey {
  UserId user;
  int window = 0;
  auto operator<=>(const RowKey&) const = default;
};

std::string window_tag(int window);

struct AmalgamatedSpace {
  std::vector<RowKey> keys;
  Eigen::MatrixXd vectors;
  std::string label;  // e.g. "T1-T2 Aligned"
};

/// Target rows followed by aligned-source rows, each tagged with its window.
AmalgamatedSpace amalgamate(const EmbeddingSpace& target, int target_window, const EmbeddingSpace& aligned_source,
                            int source_window);

struct PcaProjection {
  std::vector<RowKey> keys;
  Eigen::MatrixX2d coords;                  // (x - mean) * components^T
  Eigen::Matrix<double, 2, Eigen::Dynamic> components;
  Eigen::Vector2d explained{0.0, 0.0};      // fractions of total variance
  Eigen::RowVectorXd mean;
};

PcaProjection pca_project(const AmalgamatedSpace& space);

/// Keys present in both projections, sorted.
std::vector<RowKey> shared_keys(const PcaProjection& a, const PcaProjection& b);

struct SignAlignment {
  PcaProjection projection;
  std::array<bool, 2> flipped{false, false};
  std::array<double, 2> agreement{0.0, 0.0};  // dot products before correction
  bool zero_agreement_warning = false;
};

/// Negates each component of `other` whose shared-row coordinates have a
/// negative dot product with those of `reference`.
SignAlignment sign_align(const PcaProjection& reference, const PcaProjection& other, std::span<const RowKey> shared);

}  // namespace rolechron

#endif
