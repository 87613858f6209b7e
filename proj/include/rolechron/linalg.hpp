#ifndef ROLECHRON_LINALG_HPP
#define ROLECHRON_LINALG_HPP

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace rolechron {

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar cosine_similarity(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  const Scalar denom = a.norm() * b.norm();
  if (denom == Scalar(0)) throw std::domain_error("cosine of a zero vector");
  return a.dot(b) / denom;
}

template <typename Scalar>
struct ProcrustesSolution {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> rotation;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> singular_values;
  Eigen::Index rank = 0;
  Scalar residual = 0;  // ||A Q - B||_F
  bool rank_deficient() const { return rank < rotation.rows(); }
};

/// Orthogonal Q minimising ||A Q - B||_F: Q = U V^T from the SVD of A^T B.
/// Rows of A and B are paired observations.
template <typename DerivedA, typename DerivedB>
ProcrustesSolution<typename DerivedA::Scalar> orthogonal_procrustes(const Eigen::MatrixBase<DerivedA>& a,
                                                                     const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("orthogonal_procrustes: shape mismatch");

  const Matrix cross = a.transpose() * b;
  Eigen::JacobiSVD<Matrix> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  ProcrustesSolution<Scalar> out;
  out.rotation = svd.matrixU() * svd.matrixV().transpose();
  out.singular_values = svd.singularValues();
  const Scalar top = out.singular_values.size() ? out.singular_values(0) : Scalar(0);
  const Scalar tol = std::max(top, Scalar(1)) * Eigen::NumTraits<Scalar>::epsilon() * Scalar(cross.rows()) * Scalar(16);
  out.rank = (out.singular_values.array() > tol).count();
  out.residual = (a * out.rotation - b).norm();
  return out;
}

template <typename Scalar>
struct PrincipalAxes {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> components;  // one component per row
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> variances;               // descending
  Eigen::Matrix<Scalar, 1, Eigen::Dynamic> mean;
  Scalar total_variance = 0;
};

/// Leading `count` principal axes of the rows of `x`. Each component's
/// entry of largest magnitude is made positive.
template <typename Derived>
PrincipalAxes<typename Derived::Scalar> principal_axes(const Eigen::MatrixBase<Derived>& x, Eigen::Index count) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (x.rows() < 2) throw std::invalid_argument("principal_axes: need at least 2 rows");
  if (count > x.cols()) throw std::invalid_argument("principal_axes: more components than columns");

  PrincipalAxes<Scalar> out;
  out.mean = x.colwise().mean();
  const Matrix centered = x.rowwise() - out.mean;
  const Matrix cov = centered.transpose() * centered / Scalar(x.rows() - 1);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
  if (eig.info() != Eigen::Success) throw std::runtime_error("principal_axes: eigensolver failed");

  const Eigen::Index d = x.cols();
  out.components.resize(count, d);
  out.variances.resize(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    // SelfAdjointEigenSolver sorts eigenvalues ascending.
    auto v = eig.eigenvectors().col(d - 1 - i);
    Eigen::Index at;
    v.cwiseAbs().maxCoeff(&at);
    out.components.row(i) = v.transpose();
    if (v(at) < 0) out.components.row(i) *= Scalar(-1);
    out.variances(i) = std::max(Scalar(0), eig.eigenvalues()(d - 1 - i));
  }
  out.total_variance = std::max(Scalar(0), eig.eigenvalues().sum());
  return out;
}

}  // namespace rolechron

#endif
