#ifndef KPLANE_APPLICATIONS_HPP
#define KPLANE_APPLICATIONS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "kplane/errors.hpp"
#include "kplane/manifold.hpp"
#include "kplane/numeric.hpp"
#include "kplane/simplex.hpp"
#include "kplane/transform.hpp"

namespace kplane {

// ---------------------------------------------------------------------------
// Dispersive energy conservation.

struct EnergyScan {
  std::vector<double> t_samples;
  std::vector<double> energies;
  double datum_l2_squared = 0.0;   // |f|^2 over the parameter domain
  double initial_error = 0.0;      // |energy(0) - datum| / datum
  double max_rel_deviation = 0.0;  // worst |energy(t) - energy(t0)| / energy(t0)
  double max_tail_bound = 0.0;
  EvalDiagnostics diag;
};

// Conserved L2 mass of the free evolution whose spatial profile at time t is
// the extension restricted to the horizontal plane at height t. Only the
// quadratic-graph family qualifies.
inline EnergyScan schrodinger_energy_scan(const ParametrizedManifold& m,
                                          const SurfaceDensity& f,
                                          const std::vector<double>& t_samples,
                                          const QuadratureRule& rule) {
  if (m.family() != "paraboloid")
    throw WrongScenario("energy scan is defined for the paraboloid family");
  if (t_samples.empty()) throw ValidationError("energy scan needs at least one time sample");
  rule.validate();
  int n = m.ambient_dim();
  Eigen::MatrixXd horizontal = Eigen::MatrixXd::Identity(n, n).leftCols(n - 1);
  Subspace plane(n, horizontal);

  EnergyScan scan;
  scan.t_samples = t_samples;
  scan.datum_l2_squared = param_l2_squared(build_nodes(m, f, rule.order));
  for (double t : t_samples) {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
    y[n - 1] = t;
    PlaneIntegral pi2 = plane_integral_squared(m, f, AffinePlane(plane, y), rule);
    scan.energies.push_back(pi2.value);
    scan.max_tail_bound = std::max(scan.max_tail_bound, pi2.tail_bound);
    scan.diag.oscillation_budget_exceeded |= pi2.diag.oscillation_budget_exceeded;
    scan.diag.plane_resolution_marginal |= pi2.diag.plane_resolution_marginal;
  }
  double e0 = scan.energies.front();
  scan.initial_error = std::abs(e0 - scan.datum_l2_squared) / scan.datum_l2_squared;
  for (double e : scan.energies)
    scan.max_rel_deviation = std::max(scan.max_rel_deviation, std::abs(e - e0) / e0);
  return scan;
}

// ---------------------------------------------------------------------------
// Extension values on a planar grid (ambient dimension 2), separable phases.

namespace detail {

inline Eigen::MatrixXcd extension_grid_2d(const ManifoldNodes& nodes,
                                          const std::vector<double>& x1,
                                          const std::vector<double>& x2) {
  const std::size_t nn = nodes.size();
  Eigen::MatrixXcd a(x1.size(), nn);  // phases along the first coordinate
  Eigen::MatrixXcd b(x2.size(), nn);
  for (std::size_t l = 0; l < nn; ++l) {
    double p0 = nodes.point[l][0], p1 = nodes.point[l][1];
    std::complex<double> c = nodes.glw[l] * nodes.fval[l];
    for (std::size_t i = 0; i < x1.size(); ++i) {
      double ph = -2.0 * M_PI * x1[i] * p0;
      a(i, l) = std::complex<double>(std::cos(ph), std::sin(ph)) * c;
    }
    for (std::size_t j = 0; j < x2.size(); ++j) {
      double ph = -2.0 * M_PI * x2[j] * p1;
      b(j, l) = {std::cos(ph), std::sin(ph)};
    }
  }
  return a * b.transpose();  // (i, j) -> sum_l c_l e(x1_i p0) e(x2_j p1)
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Autocorrelation constancy for a pair of transverse curves.

struct ConvolutionCheck {
  std::vector<Eigen::VectorXd> x_samples;
  std::vector<double> lhs_values;  // convolution of the squared extensions
  double rhs = 0.0;                // weighted double surface integral
  double max_rel_error = 0.0;      // worst |lhs - rhs| / rhs
  double min_normal_wedge = 0.0;
};

inline ConvolutionCheck convolution_identity_check(const ParametrizedManifold& m1,
                                                   const SurfaceDensity& f1,
                                                   const ParametrizedManifold& m2,
                                                   const SurfaceDensity& f2,
                                                   const std::vector<Eigen::VectorXd>& x_samples,
                                                   const QuadratureRule& rule) {
  if (m1.ambient_dim() != 2 || m2.ambient_dim() != 2 || m1.param_dim() != 1 ||
      m2.param_dim() != 1)
    throw WrongScenario("convolution check runs on curve pairs in the plane");
  if (x_samples.empty()) throw ValidationError("convolution check needs sample points");
  rule.validate();

  ManifoldNodes n1 = build_nodes(m1, f1, rule.order);
  ManifoldNodes n2 = build_nodes(m2, f2, rule.order);

  // Unit normals at the nodes; the weight in the double integral is the
  // reciprocal wedge of a normal from each curve.
  auto unit_normals = [](const ManifoldNodes& nodes) {
    std::vector<Eigen::Vector2d> out(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      Eigen::Vector2d t = nodes.deriv[i].col(0);
      out[i] = Eigen::Vector2d(-t[1], t[0]) / t.norm();
    }
    return out;
  };
  std::vector<Eigen::Vector2d> v1 = unit_normals(n1);
  std::vector<Eigen::Vector2d> v2 = unit_normals(n2);

  ConvolutionCheck check;
  check.x_samples = x_samples;
  check.min_normal_wedge = 2.0;
  for (const auto& a : v1)
    for (const auto& b : v2) {
      double wedge = std::abs(a[0] * b[1] - a[1] * b[0]);
      check.min_normal_wedge = std::min(check.min_normal_wedge, wedge);
    }
  if (check.min_normal_wedge < 1e-6)
    throw NormalWedgeDegenerate("normals of the two curves come within 1e-6 of parallel");

  // Right side: |f1|^2 |f2|^2 / (jac1 jac2 wedge) summed over node pairs.
  {
    KahanSum s;
    for (std::size_t i = 0; i < n1.size(); ++i) {
      double wi = std::norm(n1.fval[i]) * n1.glw[i] / n1.jac[i];
      for (std::size_t j = 0; j < n2.size(); ++j) {
        double wedge = std::abs(v1[i][0] * v2[j][1] - v1[i][1] * v2[j][0]);
        s.add(wi * std::norm(n2.fval[j]) * n2.glw[j] / (n2.jac[j] * wedge));
      }
    }
    check.rhs = s.value();
  }

  // Left side: midpoint grid over the truncated plane for each sample.
  std::vector<double> grid;
  double h = 0.0;
  detail::midpoint_axis(rule.plane_trunc_radius, rule.plane_points_per_axis, grid, h);
  Eigen::MatrixXcd e1 = detail::extension_grid_2d(n1, grid, grid);
  Eigen::ArrayXXd e1sq = e1.array().abs2();

  for (const auto& x : x_samples) {
    if (x.size() != 2) throw DimensionMismatch("convolution sample must be planar");
    std::vector<double> s1(grid.size()), s2(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      s1[i] = x[0] - grid[i];
      s2[i] = x[1] - grid[i];
    }
    Eigen::MatrixXcd e2 = detail::extension_grid_2d(n2, s1, s2);
    Eigen::ArrayXXd e2sq = e2.array().abs2();
    const std::size_t rows = e1sq.rows();
    double val = h * h * parallel_sum(e1sq.size(), [&](std::size_t flat) {
                   std::size_t i = flat % rows, j = flat / rows;
                   return e1sq(i, j) * e2sq(i, j);
                 });
    check.lhs_values.push_back(val);
    check.max_rel_error =
        std::max(check.max_rel_error, std::abs(val - check.rhs) / check.rhs);
  }
  return check;
}

// ---------------------------------------------------------------------------
// Product-manifold wedge factor.

struct ProductWedge {
  double direct = 0.0;       // wedge of the stacked normal space against the zero-sum plane
  double closed_form = 0.0;  // n^{-n/2} |det of the normals|
};

// Stacks n unit normals block-diagonally into R^{n^2} and wedges the
// resulting n-dimensional space against the zero-sum plane {sum of blocks=0};
// the second route is the closed-form determinant expression it must equal.
inline ProductWedge product_wedge_factor(const std::vector<Eigen::VectorXd>& normals) {
  int n = static_cast<int>(normals.size());
  if (n < 2) throw ValidationError("product wedge needs at least two normals");
  for (const auto& v : normals) {
    if (v.size() != n)
      throw DimensionMismatch("need n normals of dimension n");
    if (std::abs(v.norm() - 1.0) > 1e-9)
      throw ValidationError("normals must be unit vectors");
  }
  int big = n * n;

  Eigen::MatrixXd normal_block = Eigen::MatrixXd::Zero(big, n);
  for (int j = 0; j < n; ++j) normal_block.block(j * n, j, n, 1) = normals[j];

  // Zero-sum plane: spanned by per-axis differences of consecutive blocks.
  Eigen::MatrixXd zero_sum = Eigen::MatrixXd::Zero(big, big - n);
  int col = 0;
  for (int j = 0; j + 1 < n; ++j)
    for (int a = 0; a < n; ++a) {
      zero_sum(j * n + a, col) = 1.0;
      zero_sum((j + 1) * n + a, col) = -1.0;
      ++col;
    }

  ProductWedge out;
  out.direct = wedge_abs(Subspace(big, normal_block), Subspace(big, zero_sum));

  Eigen::MatrixXd dets(n, n);
  for (int j = 0; j < n; ++j) dets.col(j) = normals[j];
  out.closed_form = std::pow(static_cast<double>(n), -0.5 * n) * std::abs(dets.determinant());
  return out;
}

// ---------------------------------------------------------------------------
// Rank-1 exponent feasibility.

struct BLInstance {
  int n = 0;                             // ambient dimension
  std::vector<Eigen::VectorXd> vectors;  // m distinct unit vectors
  Eigen::VectorXd p;                     // candidate exponents in [0, 1]^m

  void validate() const {
    if (n < 1) throw ValidationError("ambient dimension must be positive");
    int m = static_cast<int>(vectors.size());
    if (m < 1) throw ValidationError("need at least one vector");
    if (p.size() != m) throw ValidationError("exponent vector length must match map count");
    for (const auto& v : vectors) {
      if (v.size() != n) throw DimensionMismatch("vector dimension disagrees with ambient");
      if (std::abs(v.norm() - 1.0) > 1e-9) throw ValidationError("vectors must be unit length");
    }
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        if ((vectors[i] - vectors[j]).norm() < 1e-9)
          throw ValidationError("vectors must be pairwise distinct");
    for (int j = 0; j < m; ++j)
      if (p[j] < 0.0 || p[j] > 1.0) throw ValidationError("exponents must lie in [0, 1]");
  }
};

struct BLFeasibility {
  bool feasible = false;
  double phase1_objective = 0.0;
  // Convex combination over nondegenerate basis subsets certifying p.
  std::vector<std::pair<std::vector<int>, double>> certificate;
};

// p is admissible iff it is a convex combination of the indicator vectors of
// basis subsets (n-subsets whose vectors are linearly independent). Solved as
// a phase-1 linear program over those indicator columns.
inline BLFeasibility bl_feasibility(const BLInstance& inst) {
  inst.validate();
  int m = static_cast<int>(inst.vectors.size());
  if (m > 12) throw TooManyMaps("subset enumeration capped at 12 vectors");
  int n = inst.n;

  std::vector<std::vector<int>> subsets;
  std::vector<int> pick(n);
  // enumerate n-subsets of {0..m-1} in lexicographic order
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == n) {
      Eigen::MatrixXd basis(n, n);
      for (int j = 0; j < n; ++j) basis.col(j) = inst.vectors[pick[j]];
      if (std::abs(basis.determinant()) > 1e-10)
        subsets.push_back(std::vector<int>(pick.begin(), pick.end()));
      return;
    }
    for (int i = start; i <= m - (n - depth); ++i) {
      pick[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  if (m >= n) rec(0, 0);

  BLFeasibility out;
  if (subsets.empty()) return out;

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m + 1, subsets.size());
  for (std::size_t c = 0; c < subsets.size(); ++c) {
    for (int idx : subsets[c]) a(idx, c) = 1.0;
    a(m, c) = 1.0;
  }
  Eigen::VectorXd b(m + 1);
  b.head(m) = inst.p;
  b[m] = 1.0;

  Phase1Result lp = simplex_phase1(a, b);
  out.phase1_objective = lp.objective;
  if (!lp.feasible) return out;

  // Validate the certificate before reporting feasibility.
  Eigen::VectorXd recon = a.topRows(m) * lp.solution;
  double lam_sum = lp.solution.sum();
  if ((recon - inst.p).lpNorm<Eigen::Infinity>() > 1e-9 || std::abs(lam_sum - 1.0) > 1e-9 ||
      lp.solution.minCoeff() < -1e-12)
    throw Error("phase-1 result failed certificate validation");
  out.feasible = true;
  for (std::size_t c = 0; c < subsets.size(); ++c)
    if (lp.solution[c] > 1e-12) out.certificate.push_back({subsets[c], lp.solution[c]});
  return out;
}

// ---------------------------------------------------------------------------
// Multilinear L2 ratio for n curves in the plane (n = 2).

struct MultilinearRatio {
  double product_l2 = 0.0;  // L2 norm of the product of extensions
  double norm_product = 0.0;
  double ratio = 0.0;
};

inline MultilinearRatio multilinear_l2_ratio(const std::vector<ParametrizedManifold>& ms,
                                             const std::vector<SurfaceDensity>& fs,
                                             const QuadratureRule& rule) {
  if (ms.size() != 2 || fs.size() != 2)
    throw WrongScenario("multilinear ratio runs on exactly two curves in the plane");
  for (const auto& m : ms)
    if (m.ambient_dim() != 2 || m.param_dim() != 1)
      throw WrongScenario("multilinear ratio runs on curves in the plane");
  rule.validate();

  ManifoldNodes n1 = build_nodes(ms[0], fs[0], rule.order);
  ManifoldNodes n2 = build_nodes(ms[1], fs[1], rule.order);

  std::vector<double> grid;
  double h = 0.0;
  detail::midpoint_axis(rule.plane_trunc_radius, rule.plane_points_per_axis, grid, h);
  Eigen::ArrayXXd e1sq = detail::extension_grid_2d(n1, grid, grid).array().abs2();
  Eigen::ArrayXXd e2sq = detail::extension_grid_2d(n2, grid, grid).array().abs2();
  const std::size_t rows = e1sq.rows();
  double val = h * h * parallel_sum(e1sq.size(), [&](std::size_t flat) {
                 std::size_t i = flat % rows, j = flat / rows;
                 return e1sq(i, j) * e2sq(i, j);
               });

  MultilinearRatio out;
  out.product_l2 = std::sqrt(val);
  out.norm_product = std::sqrt(surface_l2_squared(n1) * surface_l2_squared(n2));
  out.ratio = out.product_l2 / out.norm_product;
  return out;
}

// ---------------------------------------------------------------------------
// Weighted identity with an atomic plane weight.

struct KPlaneWeight {
  std::vector<PlaneAtom> atoms;

  void validate(int ambient_dim, int plane_dim) const {
    if (atoms.empty()) throw ValidationError("plane weight needs at least one atom");
    for (const auto& a : atoms) {
      if (a.plane.ambient_dim() != ambient_dim)
        throw DimensionMismatch("weight atom has wrong ambient dimension");
      if (a.plane.dim() != plane_dim)
        throw DimensionMismatch("weight atom has wrong plane dimension");
      if (!(a.weight >= 0.0)) throw ValidationError("atom weights must be nonnegative");
    }
  }
};

struct WeightedIdentityReport {
  double lhs = 0.0;  // sum of weighted truncated plane integrals
  double rhs = 0.0;  // surface integral against the reciprocal-wedge pairing
  double rel_error = 0.0;
  std::vector<double> atom_lhs;
  std::vector<double> atom_margin_T;
  std::vector<double> atom_margin_GT;
  double max_tail_bound = 0.0;
  EvalDiagnostics diag;
};

inline WeightedIdentityReport weighted_identity_check(const ParametrizedManifold& m,
                                                      const SurfaceDensity& f,
                                                      const KPlaneWeight& weight,
                                                      const QuadratureRule& rule,
                                                      int grid_res = kDefaultGridRes) {
  weight.validate(m.ambient_dim(), m.param_dim());
  rule.validate();
  WeightedIdentityReport report;

  for (const auto& atom : weight.atoms) {
    auto t_cert = check_transversality_T(m, atom.plane.direction(), grid_res);
    auto gt_cert = check_transversality_GT(m, atom.plane.direction(), grid_res);
    if (!t_cert.pass || !gt_cert.pass)
      throw TransversalityViolation("a weight atom fails the transversality hypotheses");
    report.atom_margin_T.push_back(t_cert.margin);
    report.atom_margin_GT.push_back(gt_cert.margin);
  }

  KahanSum lhs;
  for (const auto& atom : weight.atoms) {
    PlaneIntegral pi2 = plane_integral_squared(m, f, atom.plane, rule);
    report.atom_lhs.push_back(pi2.value);
    lhs.add(atom.weight * pi2.value);
    report.max_tail_bound = std::max(report.max_tail_bound, pi2.tail_bound);
    report.diag.oscillation_budget_exceeded |= pi2.diag.oscillation_budget_exceeded;
    report.diag.plane_resolution_marginal |= pi2.diag.plane_resolution_marginal;
  }
  report.lhs = lhs.value();

  // Surface side: |g|^2 against the plane transform of the weight, which for
  // an atomic weight is the wedge pairing with the normal space, constant in
  // the atom offsets.
  ManifoldNodes nodes = build_nodes(m, f, rule.order);
  KahanSum rhs;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    Subspace normal = Subspace(m.ambient_dim(), nodes.deriv[i]).orthogonal_complement();
    double pairing = 0.0;
    for (const auto& atom : weight.atoms)
      pairing += atom.weight * plane_pair_weight(normal, atom.plane.direction());
    rhs.add(std::norm(nodes.fval[i]) * nodes.glw[i] / nodes.jac[i] * pairing);
  }
  report.rhs = rhs.value();
  report.rel_error = std::abs(report.lhs - report.rhs) / report.rhs;
  return report;
}

// ---------------------------------------------------------------------------
// Offset dependence when the chord condition fails.

struct GtViolationScan {
  std::vector<double> y_range;
  std::vector<double> values;
  double variation = 0.0;  // (max - min) / mean
  double variation_floor = 0.1;
  bool y_dependent = false;
  Eigen::VectorXd witness_direction;
  double margin_GT = 0.0;
  double min_margin_T = 0.0;
};

// On the two-cap family the identity must fail to be offset-independent; this
// scans the truncated plane integral along the violating chord direction and
// reports the relative variation.
inline GtViolationScan gt_violation_scan(const ParametrizedManifold& m, const SurfaceDensity& f,
                                         const Subspace& plane, const std::vector<double>& y_range,
                                         const QuadratureRule& rule, double variation_floor = 0.1,
                                         int grid_res = kDefaultGridRes) {
  if (m.family() != "two_caps")
    throw WrongScenario("offset-dependence scan runs on the two-cap family");
  if (y_range.size() < 2) throw ValidationError("scan needs at least two offsets");
  rule.validate();

  auto gt_cert = check_transversality_GT(m, plane, grid_res);
  if (gt_cert.pass)
    throw WrongScenario("chord condition holds; nothing to scan");
  GtViolationScan scan;
  scan.margin_GT = gt_cert.margin;
  scan.variation_floor = variation_floor;
  scan.y_range = y_range;

  scan.min_margin_T = 2.0;
  for (int pi = 0; pi < m.patch_count(); ++pi) {
    auto t_cert = check_transversality_T(m.single_patch(pi), plane, grid_res);
    if (!t_cert.pass)
      throw TransversalityViolation("tangent condition fails on a cap; scan would be confounded");
    scan.min_margin_T = std::min(scan.min_margin_T, t_cert.margin);
  }

  // Offsets run along the witness chord, reduced to the plane's complement.
  Subspace perp = plane.orthogonal_complement();
  Eigen::VectorXd w = project_onto(gt_cert.witness_chord, perp);
  if (w.norm() == 0.0) throw Error("degenerate witness chord");
  scan.witness_direction = w / w.norm();

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  KahanSum mean;
  for (double t : y_range) {
    PlaneIntegral pi2 =
        plane_integral_squared(m, f, AffinePlane(plane, t * scan.witness_direction), rule);
    scan.values.push_back(pi2.value);
    lo = std::min(lo, pi2.value);
    hi = std::max(hi, pi2.value);
    mean.add(pi2.value);
  }
  double avg = mean.value() / static_cast<double>(y_range.size());
  scan.variation = avg > 0.0 ? (hi - lo) / avg : 0.0;
  scan.y_dependent = scan.variation > variation_floor;
  return scan;
}

}  // namespace kplane

#endif
