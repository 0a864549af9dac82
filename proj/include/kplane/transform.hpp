#ifndef KPLANE_TRANSFORM_HPP
#define KPLANE_TRANSFORM_HPP

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "kplane/errors.hpp"
#include "kplane/manifold.hpp"
#include "kplane/numeric.hpp"
#include "kplane/quadrature.hpp"
#include "kplane/subspace.hpp"

namespace kplane {

inline constexpr double kNodeWedgeTol = 1e-10;

// Non-fatal quality indicators accumulated by the integration routines.
struct EvalDiagnostics {
  bool oscillation_budget_exceeded = false;
  bool plane_resolution_marginal = false;
};

// Tensor Gauss-Legendre data over all patches of a manifold, with the density
// folded in. Built once per operation; every transform-side quantity reads
// from here.
struct ManifoldNodes {
  std::vector<Eigen::VectorXd> xi;
  std::vector<int> patch;
  std::vector<Eigen::VectorXd> point;        // map(xi)
  std::vector<Eigen::MatrixXd> deriv;        // derivative at xi (n x k)
  std::vector<double> glw;                   // tensor quadrature weight
  std::vector<double> jac;                   // area element sqrt(det(D^T D))
  std::vector<std::complex<double>> fval;    // density value
  std::size_t size() const { return xi.size(); }
};

inline ManifoldNodes build_nodes(const ParametrizedManifold& m, const SurfaceDensity& f,
                                 int order) {
  ManifoldNodes nodes;
  for (int pi = 0; pi < m.patch_count(); ++pi) {
    const Patch& p = m.patch(pi);
    for_each_tensor_node(p.domain, order, [&](const Eigen::VectorXd& xi, double w) {
      nodes.xi.push_back(xi);
      nodes.patch.push_back(pi);
      nodes.point.push_back(p.map(xi));
      Eigen::MatrixXd d = map_derivative(m, pi, xi);
      nodes.jac.push_back(std::sqrt((d.transpose() * d).determinant()));
      nodes.deriv.push_back(std::move(d));
      nodes.glw.push_back(w);
      nodes.fval.push_back(f.eval(xi, p.domain));
    });
  }
  return nodes;
}

// || f ||^2 over the parameter domain (the squared norm of the induced
// surface density is integral of |f|^2 / jacobian instead; see density_norms).
inline double param_l2_squared(const ManifoldNodes& nodes) {
  KahanSum s;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    s.add(nodes.glw[i] * std::norm(nodes.fval[i]));
  return s.value();
}

// Integral of |f|^2 / jacobian: the squared L2 norm of the surface density
// g = f / jacobian against the surface measure.
inline double surface_l2_squared(const ManifoldNodes& nodes) {
  KahanSum s;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    s.add(nodes.glw[i] * std::norm(nodes.fval[i]) / nodes.jac[i]);
  return s.value();
}

// Fourier extension: integral of exp(-2 pi i <x, map(xi)>) f(xi) over the
// parameter domain. The budget flag trips when the per-axis order is too low
// for the phase to be resolved at this x.
inline std::complex<double> extension_eval(const ManifoldNodes& nodes, double image_diameter,
                                           int order, const Eigen::VectorXd& x,
                                           EvalDiagnostics* diag = nullptr) {
  if (diag && order < 4.0 * x.norm() * image_diameter)
    diag->oscillation_budget_exceeded = true;
  KahanSum re, im;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    double phase = -2.0 * M_PI * x.dot(nodes.point[i]);
    std::complex<double> term = nodes.glw[i] * nodes.fval[i] *
                                std::complex<double>(std::cos(phase), std::sin(phase));
    re.add(term.real());
    im.add(term.imag());
  }
  return {re.value(), im.value()};
}

inline std::complex<double> extension_eval(const ParametrizedManifold& m,
                                           const SurfaceDensity& f, const Eigen::VectorXd& x,
                                           const QuadratureRule& rule,
                                           EvalDiagnostics* diag = nullptr) {
  rule.validate();
  if (x.size() != m.ambient_dim())
    throw DimensionMismatch("evaluation point has wrong ambient dimension");
  ManifoldNodes nodes = build_nodes(m, f, rule.order);
  return extension_eval(nodes, m.image_diameter(), rule.order, x, diag);
}

struct PlaneIntegral {
  double value = 0.0;
  double tail_bound = 0.0;  // 3x the outermost 10% shell contribution
  EvalDiagnostics diag;
};

namespace detail {

// Equispaced midpoint nodes on [-R, R]. The restriction of the extension to a
// plane is band-limited (spectrum inside the projected image of the
// manifold), so midpoint sampling above the Nyquist spacing integrates it to
// truncation accuracy; Gauss panels buy nothing here.
inline void midpoint_axis(double radius, int points, std::vector<double>& x, double& h) {
  h = 2.0 * radius / points;
  x.resize(points);
  for (int i = 0; i < points; ++i) x[i] = -radius + (i + 0.5) * h;
}

inline double raised_cosine(double r, double radius) {
  double t = r / radius;
  if (t <= 0.8) return 1.0;
  if (t >= 1.0) return 0.0;
  double s = std::cos(0.5 * M_PI * (t - 0.8) / 0.2);
  return s * s;
}

}  // namespace detail

// Truncated integral of |extension|^2 over the affine plane. Cubature is a
// tensor midpoint grid of plane_points_per_axis per direction, radius
// plane_trunc_radius, in the plane's orthonormal coordinates.
inline PlaneIntegral plane_integral_squared(const ParametrizedManifold& m,
                                            const SurfaceDensity& f, const AffinePlane& plane,
                                            const QuadratureRule& rule) {
  rule.validate();
  if (plane.ambient_dim() != m.ambient_dim())
    throw DimensionMismatch("plane and manifold ambient dimensions differ");
  ManifoldNodes nodes = build_nodes(m, f, rule.order);

  int pdim = plane.dim();
  std::vector<double> axis;
  double h = 0.0;
  detail::midpoint_axis(rule.plane_trunc_radius, rule.plane_points_per_axis, axis, h);

  PlaneIntegral result;

  // Budget checks once, against the farthest grid point.
  double max_norm = std::sqrt(static_cast<double>(pdim)) * rule.plane_trunc_radius +
                    plane.offset().norm();
  if (rule.order < 4.0 * max_norm * m.image_diameter())
    result.diag.oscillation_budget_exceeded = true;
  // Nyquist guard for the plane grid: the restricted extension has spectrum
  // inside the projection of the manifold image, squared modulus doubles it.
  double band = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    Eigen::VectorXd proj = plane.direction().basis().transpose() * nodes.point[i];
    band = std::max(band, proj.lpNorm<Eigen::Infinity>());
  }
  if (band > 0.0 && h > 0.999 / (4.0 * band)) result.diag.plane_resolution_marginal = true;

  std::size_t total = 1;
  for (int a = 0; a < pdim; ++a) total *= axis.size();

  const bool windowed = rule.window == "raised_cosine";
  const double radius = rule.plane_trunc_radius;
  const Eigen::MatrixXd& basis = plane.direction().basis();
  const Eigen::VectorXd& offset = plane.offset();

  // Phase factors are separable across plane axes; precompute per axis and
  // per manifold node to turn the inner loop into complex multiplies.
  std::size_t nn = nodes.size();
  std::vector<std::complex<double>> base(nn);
  for (std::size_t i = 0; i < nn; ++i) {
    double phase = -2.0 * M_PI * offset.dot(nodes.point[i]);
    base[i] = nodes.glw[i] * nodes.fval[i] *
              std::complex<double>(std::cos(phase), std::sin(phase));
  }
  std::vector<std::vector<std::complex<double>>> axis_phase(pdim);
  for (int a = 0; a < pdim; ++a) {
    axis_phase[a].resize(axis.size() * nn);
    for (std::size_t t = 0; t < axis.size(); ++t)
      for (std::size_t i = 0; i < nn; ++i) {
        double phase = -2.0 * M_PI * axis[t] * basis.col(a).dot(nodes.point[i]);
        axis_phase[a][t * nn + i] = {std::cos(phase), std::sin(phase)};
      }
  }

  double cell = 1.0;
  for (int a = 0; a < pdim; ++a) cell *= h;

  KahanSum tail;
  std::vector<double> tail_partial(total, 0.0);
  double value = parallel_sum(total, [&](std::size_t flat) {
    std::size_t rest = flat;
    std::complex<double> sum_acc = 0.0;
    double r2 = 0.0;
    // accumulate per-node product across axes without materializing indices
    thread_local std::vector<std::complex<double>> prod;
    prod.assign(base.begin(), base.end());
    for (int a = 0; a < pdim; ++a) {
      std::size_t ta = rest % axis.size();
      rest /= axis.size();
      const std::complex<double>* ph = &axis_phase[a][ta * nn];
      for (std::size_t i = 0; i < nn; ++i) prod[i] *= ph[i];
      r2 += axis[ta] * axis[ta];
    }
    KahanSum re, im;
    for (std::size_t i = 0; i < nn; ++i) {
      re.add(prod[i].real());
      im.add(prod[i].imag());
    }
    sum_acc = {re.value(), im.value()};
    double integrand = std::norm(sum_acc);
    if (windowed) integrand *= detail::raised_cosine(std::sqrt(r2), radius);
    double contrib = cell * integrand;
    if (std::sqrt(r2) > 0.9 * radius) tail_partial[flat] = contrib;
    return contrib;
  });
  for (double t : tail_partial) tail.add(t);

  result.value = value;
  result.tail_bound = 3.0 * tail.value();
  return result;
}

// Tangent-side integral: |f(xi)|^2 divided by the absolute determinant of the
// derivative frame stacked against an orthonormal basis of the plane's
// complement. Equals area element times the unit-frame wedge, which is why a
// per-node transversality floor is enforced.
inline double rhs_tangent_integral(const ParametrizedManifold& m, const SurfaceDensity& f,
                                   const Subspace& plane, int order) {
  if (plane.ambient_dim() != m.ambient_dim())
    throw DimensionMismatch("plane and manifold ambient dimensions differ");
  if (plane.dim() != m.param_dim())
    throw DimensionMismatch("plane dimension must match the manifold parameter dimension");
  Subspace perp = plane.orthogonal_complement();
  ManifoldNodes nodes = build_nodes(m, f, order);
  int n = m.ambient_dim(), k = m.param_dim();
  Eigen::MatrixXd stacked(n, n);
  stacked.rightCols(n - k) = perp.basis();
  KahanSum s;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    stacked.leftCols(k) = nodes.deriv[i];
    double det = std::abs(stacked.determinant());
    if (det / nodes.jac[i] < kNodeWedgeTol)
      throw TransversalityViolation("tangent frame degenerates against the plane at a node");
    s.add(nodes.glw[i] * std::norm(nodes.fval[i]) / det);
  }
  return s.value();
}

// Weight of one plane against another: the reciprocal wedge. theta and pi
// must have complementary dimensions.
inline double plane_pair_weight(const Subspace& theta, const Subspace& pi) {
  double wedge = wedge_abs(theta, pi);
  if (wedge < kNodeWedgeTol)
    throw TransversalityViolation("paired planes are not transverse");
  return 1.0 / wedge;
}

// ---------------------------------------------------------------------------
// Discrete pushforward measure.

struct PlaneAtom {
  AffinePlane plane;
  double weight;
};

struct ProvenanceAtom {
  Eigen::VectorXd xi;
  int patch = 0;
  Eigen::VectorXd y;
  double weight = 0.0;
};

// Atomic measure on (plane, offset) pairs obtained by pushing the weighted
// quadrature nodes of a surface density through the map
// xi -> (normal space at xi, offset(xi)).
struct DiscretePlaneMeasure {
  std::vector<PlaneAtom> atoms;
  std::vector<ProvenanceAtom> provenance;

  double total_mass() const {
    KahanSum s;
    for (const auto& a : atoms) s.add(a.weight);
    return s.value();
  }
};

struct OffsetRule {
  enum class Kind { zero, tangent };
  Kind kind = Kind::zero;
  double scale = 0.0;  // tangent: offset = scale x first unit tangent direction
};

inline DiscretePlaneMeasure pushforward_measure(const ParametrizedManifold& m,
                                                const SurfaceDensity& f, int order,
                                                const OffsetRule& offsets = {}) {
  ManifoldNodes nodes = build_nodes(m, f, order);
  DiscretePlaneMeasure mu;
  mu.atoms.reserve(nodes.size());
  mu.provenance.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    Subspace tangent(m.ambient_dim(), nodes.deriv[i]);
    Subspace normal = tangent.orthogonal_complement();
    Eigen::VectorXd y = Eigen::VectorXd::Zero(m.ambient_dim());
    if (offsets.kind == OffsetRule::Kind::tangent)
      y = offsets.scale * tangent.basis().col(0);
    double w = std::norm(nodes.fval[i]) * nodes.glw[i] / nodes.jac[i];
    mu.atoms.push_back({AffinePlane(normal, y), w});
    mu.provenance.push_back({nodes.xi[i], nodes.patch[i], y, w});
  }
  return mu;
}

// Adjoint-of-adjoint composition evaluated at a plane: sum of atom weights
// against the reciprocal wedge between each atom's plane and pi. The offset
// argument is part of the call signature for symmetry with the plane
// integrals but cannot influence the value; the composition is constant in it.
inline double composed_adjoint_transform(const DiscretePlaneMeasure& mu, const Subspace& pi,
                                         const Eigen::VectorXd& y_ignored = Eigen::VectorXd()) {
  (void)y_ignored;
  KahanSum s;
  for (const auto& atom : mu.atoms)
    s.add(atom.weight * plane_pair_weight(atom.plane.direction(), pi));
  return s.value();
}

// ---------------------------------------------------------------------------
// Identity verification.

struct IdentityReport {
  std::vector<Eigen::VectorXd> y_samples;
  std::vector<double> lhs_values;        // truncated plane integrals per offset
  double rhs = 0.0;                      // tangent-side integral
  double adjoint = 0.0;                  // composed adjoint route
  double identity_error = 0.0;           // max_j |lhs_j - rhs| / rhs
  double y_spread = 0.0;                 // (max_j - min_j) / rhs
  double adjoint_error = 0.0;            // |adjoint - rhs| / rhs
  double margin_T = 0.0;
  double margin_GT = 0.0;
  double max_tail_bound = 0.0;
  EvalDiagnostics diag;
};

// Checks both hypotheses, then compares the truncated plane integrals at each
// offset with the tangent-side integral and the composed adjoint route.
inline IdentityReport verify_identity(const ParametrizedManifold& m, const SurfaceDensity& f,
                                      const Subspace& plane,
                                      const std::vector<Eigen::VectorXd>& y_samples,
                                      const QuadratureRule& rule,
                                      int grid_res = kDefaultGridRes) {
  rule.validate();
  auto t_cert = check_transversality_T(m, plane, grid_res);
  if (!t_cert.pass)
    throw TransversalityViolation("tangent condition fails (margin " +
                                  std::to_string(t_cert.margin) + "); identity not applicable");
  auto gt_cert = check_transversality_GT(m, plane, grid_res);
  if (!gt_cert.pass)
    throw TransversalityViolation("chord condition fails (margin " +
                                  std::to_string(gt_cert.margin) + "); identity not applicable");

  IdentityReport report;
  report.margin_T = t_cert.margin;
  report.margin_GT = gt_cert.margin;
  report.y_samples = y_samples;
  if (y_samples.empty()) throw ValidationError("identity check needs at least one offset");

  report.rhs = rhs_tangent_integral(m, f, plane, rule.order);
  DiscretePlaneMeasure mu = pushforward_measure(m, f, rule.order);
  report.adjoint = composed_adjoint_transform(mu, plane);

  double lo = std::numeric_limits<double>::infinity(), hi = -lo, worst = 0.0;
  for (const auto& y : y_samples) {
    PlaneIntegral pi2 = plane_integral_squared(m, f, AffinePlane(plane, y), rule);
    report.lhs_values.push_back(pi2.value);
    report.max_tail_bound = std::max(report.max_tail_bound, pi2.tail_bound);
    report.diag.oscillation_budget_exceeded |= pi2.diag.oscillation_budget_exceeded;
    report.diag.plane_resolution_marginal |= pi2.diag.plane_resolution_marginal;
    lo = std::min(lo, pi2.value);
    hi = std::max(hi, pi2.value);
    worst = std::max(worst, std::abs(pi2.value - report.rhs));
  }
  report.identity_error = worst / report.rhs;
  report.y_spread = (hi - lo) / report.rhs;
  report.adjoint_error = std::abs(report.adjoint - report.rhs) / report.rhs;
  return report;
}

}  // namespace kplane

#endif
