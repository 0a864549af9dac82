#ifndef KPLANE_SUBSPACE_HPP
#define KPLANE_SUBSPACE_HPP

#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "kplane/errors.hpp"
#include "kplane/numeric.hpp"
#include "kplane/quadrature.hpp"

namespace kplane {

inline constexpr double kSpanConditionTol = 1e-10;  // sigma_min/sigma_max cutoff
inline constexpr double kOrthonormalTol = 1e-12;

namespace detail {

// Modified Gram-Schmidt with a second orthogonalization pass. Keeps the
// direction of the first input vector, which callers rely on.
inline Eigen::MatrixXd gram_schmidt(const Eigen::MatrixXd& a) {
  Eigen::MatrixXd q = a;
  for (int j = 0; j < q.cols(); ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i < j; ++i) q.col(j) -= q.col(i).dot(q.col(j)) * q.col(i);
    double norm = q.col(j).norm();
    if (!(norm > 0.0)) throw DegenerateSpan("spanning vector collapsed during orthonormalization");
    q.col(j) /= norm;
  }
  return q;
}

}  // namespace detail

// A linear subspace of R^n carried by an orthonormal basis. Instances are
// immutable; construction re-orthonormalizes whatever it is given.
class Subspace {
 public:
  Subspace(int ambient_dim, const Eigen::MatrixXd& spanning) {
    if (ambient_dim < 1) throw DimensionMismatch("ambient dimension must be positive");
    if (spanning.rows() != ambient_dim)
      throw DimensionMismatch("spanning vectors do not live in the stated ambient space");
    if (spanning.cols() < 1) throw DegenerateSpan("empty spanning set");
    if (spanning.cols() > ambient_dim)
      throw DegenerateSpan("more spanning vectors than ambient dimensions");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(spanning);
    const auto& sv = svd.singularValues();
    if (!(sv(0) > 0.0) || sv(sv.size() - 1) <= kSpanConditionTol * sv(0))
      throw DegenerateSpan("spanning set is numerically dependent");
    basis_ = detail::gram_schmidt(spanning);
  }

  explicit Subspace(const std::vector<Eigen::VectorXd>& spanning)
      : Subspace(spanning.empty() ? 1 : static_cast<int>(spanning.front().size()),
                 pack(spanning)) {}

  int ambient_dim() const { return static_cast<int>(basis_.rows()); }
  int dim() const { return static_cast<int>(basis_.cols()); }
  const Eigen::MatrixXd& basis() const { return basis_; }

  // Orthogonal complement, via the trailing columns of a full QR of the basis.
  Subspace orthogonal_complement() const {
    int n = ambient_dim(), d = dim();
    if (d == n) throw DimensionMismatch("complement of the full space is empty");
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis_);
    Eigen::MatrixXd q = qr.householderQ();
    return Subspace(n, q.rightCols(n - d));
  }

 private:
  static Eigen::MatrixXd pack(const std::vector<Eigen::VectorXd>& vecs) {
    if (vecs.empty()) throw DegenerateSpan("empty spanning set");
    Eigen::MatrixXd m(vecs.front().size(), vecs.size());
    for (std::size_t j = 0; j < vecs.size(); ++j) {
      if (vecs[j].size() != m.rows())
        throw DimensionMismatch("spanning vectors have mixed lengths");
      m.col(j) = vecs[j];
    }
    return m;
  }

  Eigen::MatrixXd basis_;
};

inline Subspace orthonormalize(const std::vector<Eigen::VectorXd>& spanning) {
  return Subspace(spanning);
}

inline Eigen::VectorXd project_onto(const Eigen::VectorXd& x, const Subspace& v) {
  if (x.size() != v.ambient_dim())
    throw DimensionMismatch("point and subspace live in different ambient spaces");
  return v.basis() * (v.basis().transpose() * x);
}

// |V wedge W| for complementary subspaces: the absolute determinant of the
// two orthonormal bases stacked side by side. 1 for orthogonal complements,
// 0 when the pair shares a direction.
inline double wedge_abs(const Subspace& v, const Subspace& w) {
  if (v.ambient_dim() != w.ambient_dim())
    throw DimensionMismatch("wedge of subspaces from different ambient spaces");
  int n = v.ambient_dim();
  if (v.dim() + w.dim() != n)
    throw DimensionMismatch("wedge needs complementary dimensions");
  Eigen::MatrixXd m(n, n);
  m.leftCols(v.dim()) = v.basis();
  m.rightCols(w.dim()) = w.basis();
  double d = std::abs(m.determinant());
  return std::min(d, 1.0);
}

// Gaussian-integral counterpart of wedge_abs: integrates exp(-pi |u+v|^2)
// over W x V numerically and returns the value, which converges to
// 1 / wedge_abs(V, W). Kept as an independent cross-check; node placement
// follows the principal axes of the quadratic form because a fixed box in raw
// coordinates cannot resolve near-parallel pairs, but every integrand
// evaluation goes through the ambient vector u + v.
inline double wedge_gaussian_oracle(const Subspace& v, const Subspace& w, int quad_order = 32) {
  if (v.ambient_dim() != w.ambient_dim())
    throw DimensionMismatch("wedge of subspaces from different ambient spaces");
  int n = v.ambient_dim();
  int dv = v.dim(), dw = w.dim();
  if (dv + dw != n) throw DimensionMismatch("wedge needs complementary dimensions");
  if (quad_order < 8) throw ValidationError("oracle quadrature order must be at least 8");

  // Quadratic form of the exponent in (t, s) coordinates: [[I, G], [G^T, I]].
  Eigen::MatrixXd g = v.basis().transpose() * w.basis();
  Eigen::MatrixXd form = Eigen::MatrixXd::Identity(n, n);
  form.topRightCorner(dv, dw) = g;
  form.bottomLeftCorner(dw, dv) = g.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(form);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  if (lambda(0) < 1e-12)
    throw DegenerateSpan("Gaussian integral diverges: subspaces share a direction");

  // Per principal axis: radius 6 after whitening, split at the origin into
  // two panels (a single Gauss span underresolves the shoulder at low order).
  struct Axis {
    std::vector<double> x, w;
  };
  std::vector<Axis> axes(n);
  int per_panel = std::max(quad_order / 2, 4);
  const GaussLegendre& gl = gauss_legendre(per_panel);
  for (int i = 0; i < n; ++i) {
    double radius = 6.0 / std::sqrt(lambda(i));
    for (int panel = 0; panel < 2; ++panel) {
      double lo = panel == 0 ? -radius : 0.0;
      double hi = panel == 0 ? 0.0 : radius;
      double half = 0.5 * (hi - lo);
      for (int j = 0; j < per_panel; ++j) {
        axes[i].x.push_back(lo + half * (gl.x[j] + 1.0));
        axes[i].w.push_back(half * gl.w[j]);
      }
    }
  }

  int per_axis = static_cast<int>(axes[0].x.size());
  std::vector<int> idx(n, 0);
  Eigen::VectorXd coords(n);
  KahanSum total;
  for (;;) {
    double weight = 1.0;
    for (int i = 0; i < n; ++i) {
      coords[i] = axes[i].x[idx[i]];
      weight *= axes[i].w[idx[i]];
    }
    Eigen::VectorXd ts = eig.eigenvectors() * coords;
    Eigen::VectorXd sum = v.basis() * ts.head(dv) + w.basis() * ts.tail(dw);
    total.add(weight * std::exp(-M_PI * sum.squaredNorm()));
    int a = 0;
    while (a < n && ++idx[a] == per_axis) idx[a++] = 0;
    if (a == n) break;
  }
  return total.value();
}

// Affine k-plane: direction subspace plus an offset. The offset is reduced to
// its component orthogonal to the direction, the canonical representative of
// the same plane.
class AffinePlane {
 public:
  AffinePlane(Subspace direction, const Eigen::VectorXd& offset)
      : direction_(std::move(direction)) {
    if (offset.size() != direction_.ambient_dim())
      throw DimensionMismatch("plane offset has the wrong ambient dimension");
    offset_ = offset - project_onto(offset, direction_);
    for (int i = 0; i < offset_.size(); ++i)
      if (std::abs(offset_[i]) < 1e-15) offset_[i] = 0.0;  // drop projection dust
  }

  explicit AffinePlane(const Subspace& direction)
      : AffinePlane(direction, Eigen::VectorXd::Zero(direction.ambient_dim())) {}

  const Subspace& direction() const { return direction_; }
  const Eigen::VectorXd& offset() const { return offset_; }
  int ambient_dim() const { return direction_.ambient_dim(); }
  int dim() const { return direction_.dim(); }

 private:
  Subspace direction_;
  Eigen::VectorXd offset_;
};

inline AffinePlane affine_plane_through(Subspace direction, const Eigen::VectorXd& offset) {
  return AffinePlane(std::move(direction), offset);
}

}  // namespace kplane

#endif
