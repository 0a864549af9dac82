#ifndef KPLANE_MANIFOLD_HPP
#define KPLANE_MANIFOLD_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "kplane/errors.hpp"
#include "kplane/quadrature.hpp"
#include "kplane/subspace.hpp"

namespace kplane {

inline constexpr double kTransversalityTol = 1e-6;
inline constexpr double kChordMergeTol = 1e-8;
inline constexpr int kDefaultGridRes = 201;

// One smooth piece of a parametrized submanifold: a box domain in R^k and a
// map into R^n, with an optional analytic derivative. Most families have a
// single patch; the disjoint two-cap configuration has two.
struct Patch {
  Box domain;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> map;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> derivative;  // may be empty
};

class ParametrizedManifold {
 public:
  ParametrizedManifold(int ambient_dim, int param_dim, std::string family,
                       std::vector<Patch> patches)
      : n_(ambient_dim), k_(param_dim), family_(std::move(family)),
        patches_(std::move(patches)) {
    if (k_ < 1 || k_ >= n_)
      throw DimensionMismatch("parameter dimension must satisfy 0 < k < n");
    if (patches_.empty()) throw ValidationError("manifold needs at least one patch");
    for (const auto& p : patches_) {
      p.domain.validate();
      if (p.domain.dim() != k_)
        throw DimensionMismatch("patch domain dimension disagrees with manifold");
      if (!p.map) throw ValidationError("patch has no map");
    }
    run_construction_checks();
  }

  int ambient_dim() const { return n_; }
  int param_dim() const { return k_; }
  const std::string& family() const { return family_; }
  int patch_count() const { return static_cast<int>(patches_.size()); }
  const Patch& patch(int i) const { return patches_.at(i); }
  double image_diameter() const { return image_diameter_; }

  Eigen::VectorXd point(int patch_idx, const Eigen::VectorXd& xi) const {
    return patches_.at(patch_idx).map(xi);
  }

  // Restriction to a single patch, used when a hypothesis has to be verified
  // cap by cap.
  ParametrizedManifold single_patch(int patch_idx) const {
    return ParametrizedManifold(n_, k_, family_ + "[patch]", {patches_.at(patch_idx)});
  }

 private:
  void run_construction_checks();

  int n_;
  int k_;
  std::string family_;
  std::vector<Patch> patches_;
  double image_diameter_ = 0.0;
};

// Central differences with a step tied to the domain width.
inline Eigen::MatrixXd map_derivative_fd(const ParametrizedManifold& m, int patch_idx,
                                         const Eigen::VectorXd& xi) {
  const Patch& p = m.patch(patch_idx);
  int k = m.param_dim();
  Eigen::MatrixXd d(m.ambient_dim(), k);
  for (int a = 0; a < k; ++a) {
    double h = 1e-5 * p.domain.width(a);
    Eigen::VectorXd lo = xi, hi = xi;
    hi[a] += h;
    lo[a] -= h;
    d.col(a) = (p.map(hi) - p.map(lo)) / (2.0 * h);
  }
  return d;
}

// Derivative of the patch map at xi: analytic when provided, FD otherwise.
inline Eigen::MatrixXd map_derivative(const ParametrizedManifold& m, int patch_idx,
                                      const Eigen::VectorXd& xi) {
  const Patch& p = m.patch(patch_idx);
  if (p.derivative) return p.derivative(xi);
  return map_derivative_fd(m, patch_idx, xi);
}

inline Subspace tangent_frame(const ParametrizedManifold& m, const Eigen::VectorXd& xi,
                              int patch_idx = 0) {
  Eigen::MatrixXd d = map_derivative(m, patch_idx, xi);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(d);
  const auto& sv = svd.singularValues();
  if (!(sv(0) > 0.0) || sv(sv.size() - 1) <= kSpanConditionTol * sv(0))
    throw RankDeficient("parametrization loses rank at a sample point");
  return Subspace(m.ambient_dim(), d);
}

// sqrt(det(D^T D)): the area element of the parametrization.
inline double surface_jacobian(const ParametrizedManifold& m, const Eigen::VectorXd& xi,
                               int patch_idx = 0) {
  Eigen::MatrixXd d = map_derivative(m, patch_idx, xi);
  return std::sqrt((d.transpose() * d).determinant());
}

inline Subspace normal_frame(const ParametrizedManifold& m, const Eigen::VectorXd& xi,
                             int patch_idx = 0) {
  return tangent_frame(m, xi, patch_idx).orthogonal_complement();
}

inline void ParametrizedManifold::run_construction_checks() {
  // Rank and injectivity are certified on a coarse grid at build time. The
  // two-cap family is allowed to collide across patches (it is a disjoint
  // union of copies); everything else must be injective across the board.
  int res = k_ == 1 ? 41 : 11;
  std::vector<Eigen::VectorXd> samples;
  std::vector<int> sample_patch;
  for (int pi = 0; pi < patch_count(); ++pi) {
    const Patch& p = patches_[pi];
    for_each_grid_point(p.domain, res, [&](const Eigen::VectorXd& xi) {
      Eigen::VectorXd pt = p.map(xi);
      if (pt.size() != n_) throw DimensionMismatch("patch map output has wrong dimension");
      samples.push_back(pt);
      sample_patch.push_back(pi);
    });
  }
  Eigen::VectorXd lo = samples.front(), hi = samples.front();
  for (const auto& s : samples) {
    lo = lo.cwiseMin(s);
    hi = hi.cwiseMax(s);
  }
  image_diameter_ = (hi - lo).norm();
  double scale = std::max(1.0, image_diameter_);
  bool allow_cross_patch_collisions = family_.rfind("two_caps", 0) == 0;
  for (std::size_t i = 0; i < samples.size(); ++i)
    for (std::size_t j = i + 1; j < samples.size(); ++j) {
      if (allow_cross_patch_collisions && sample_patch[i] != sample_patch[j]) continue;
      if ((samples[i] - samples[j]).norm() < 1e-9 * scale)
        throw ValidationError("parametrization is not injective on the sample grid");
    }
  // Rank is judged against the largest derivative seen anywhere: a per-point
  // relative test cannot notice a k = 1 map whose speed collapses to zero.
  int rank_res = k_ == 1 ? 17 : 7;
  std::vector<double> min_sv;
  double max_sv = 0.0;
  for (int pi = 0; pi < patch_count(); ++pi) {
    const Patch& p = patches_[pi];
    for_each_grid_point(p.domain, rank_res, [&](const Eigen::VectorXd& xi) {
      Eigen::MatrixXd d = map_derivative(*this, pi, xi);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(d);
      const auto& sv = svd.singularValues();
      min_sv.push_back(sv(sv.size() - 1));
      max_sv = std::max(max_sv, sv(0));
    });
  }
  for (double s : min_sv)
    if (s <= 1e-8 * max_sv)
      throw RankDeficient("parametrization loses rank at a sample point");
}

// ---------------------------------------------------------------------------
// Densities on the parameter domain.

// f on the patch domain; the induced surface density is f / area element.
class SurfaceDensity {
 public:
  SurfaceDensity(std::string family, double amplitude = 1.0, double gamma = 8.0)
      : family_(std::move(family)), amplitude_(amplitude), gamma_(gamma) {
    if (family_ != "smooth_bump" && family_ != "indicator" && family_ != "gaussian_truncated")
      throw ValidationError("unknown density family '" + family_ + "'");
    if (!(amplitude_ > 0.0)) throw ValidationError("density amplitude must be positive");
    if (!(gamma_ > 0.0)) throw ValidationError("density gamma must be positive");
  }

  const std::string& family() const { return family_; }
  double amplitude() const { return amplitude_; }
  double gamma() const { return gamma_; }

  std::complex<double> eval(const Eigen::VectorXd& xi, const Box& domain) const {
    if (family_ == "indicator") return amplitude_;
    if (family_ == "gaussian_truncated") {
      Eigen::VectorXd c = domain.center();
      return amplitude_ * std::exp(-gamma_ * (xi - c).squaredNorm());
    }
    // smooth bump: product of one-dimensional bumps scaled to each axis,
    // normalized to peak amplitude at the center.
    double val = amplitude_;
    for (int a = 0; a < domain.dim(); ++a) {
      double t = 2.0 * (xi[a] - domain.axes[a][0]) / domain.width(a) - 1.0;
      if (std::abs(t) >= 1.0) return 0.0;
      val *= std::exp(1.0 - 1.0 / (1.0 - t * t));
    }
    return val;
  }

 private:
  std::string family_;
  double amplitude_;
  double gamma_;
};

// ---------------------------------------------------------------------------
// Transversality certificates.

struct TransversalityCertificate {
  bool pass = false;
  double margin = 0.0;
  double tol = kTransversalityTol;
  // Worst grid point (condition T) or worst pair (condition GT).
  int patch_a = 0;
  int patch_b = 0;
  Eigen::VectorXd xi_a;
  Eigen::VectorXd xi_b;
  Eigen::VectorXd witness_chord;  // GT only: the offending ambient chord
};

// Condition on tangencies: at every sample point the tangent space must be
// transverse to the orthogonal complement of the plane direction. The margin
// is the worst wedge between the unit tangent frame and that complement.
inline TransversalityCertificate check_transversality_T(const ParametrizedManifold& m,
                                                        const Subspace& plane,
                                                        int grid_res = kDefaultGridRes,
                                                        double tol = kTransversalityTol) {
  if (plane.ambient_dim() != m.ambient_dim())
    throw DimensionMismatch("plane and manifold ambient dimensions differ");
  if (plane.dim() != m.param_dim())
    throw DimensionMismatch("plane dimension must match the manifold parameter dimension");
  Subspace perp = plane.orthogonal_complement();
  TransversalityCertificate cert;
  cert.tol = tol;
  cert.margin = 2.0;
  for (int pi = 0; pi < m.patch_count(); ++pi) {
    for_each_grid_point(m.patch(pi).domain, grid_res, [&](const Eigen::VectorXd& xi) {
      double wedge = wedge_abs(tangent_frame(m, xi, pi), perp);
      if (wedge < cert.margin) {
        cert.margin = wedge;
        cert.patch_a = pi;
        cert.xi_a = xi;
      }
    });
  }
  cert.pass = cert.margin > tol;
  return cert;
}

// Condition on chords: no chord of the manifold may be orthogonal to the
// plane direction. The margin is |P_plane(chord)| / |chord| minimized over
// grid pairs, skipping pairs closer than the merge tolerance.
inline TransversalityCertificate check_transversality_GT(const ParametrizedManifold& m,
                                                         const Subspace& plane,
                                                         int grid_res = kDefaultGridRes,
                                                         double tol = kTransversalityTol,
                                                         double merge_tol = kChordMergeTol) {
  if (plane.ambient_dim() != m.ambient_dim())
    throw DimensionMismatch("plane and manifold ambient dimensions differ");
  if (plane.dim() != m.param_dim())
    throw DimensionMismatch("plane dimension must match the manifold parameter dimension");
  // Pair scans are quadratic in the grid size; cap the per-axis resolution
  // for two-dimensional parameter domains.
  int res = m.param_dim() >= 2 ? std::min(grid_res, 33) : grid_res;

  struct Sample {
    Eigen::VectorXd xi;
    Eigen::VectorXd pt;
    int patch;
  };
  std::vector<Sample> samples;
  for (int pi = 0; pi < m.patch_count(); ++pi)
    for_each_grid_point(m.patch(pi).domain, res, [&](const Eigen::VectorXd& xi) {
      samples.push_back({xi, m.point(pi, xi), pi});
    });

  TransversalityCertificate cert;
  cert.tol = tol;
  cert.margin = 2.0;
  for (std::size_t i = 0; i < samples.size(); ++i)
    for (std::size_t j = i + 1; j < samples.size(); ++j) {
      Eigen::VectorXd chord = samples[i].pt - samples[j].pt;
      double len = chord.norm();
      if (len <= merge_tol) continue;
      double ratio = project_onto(chord, plane).norm() / len;
      if (ratio < cert.margin) {
        cert.margin = ratio;
        cert.patch_a = samples[i].patch;
        cert.patch_b = samples[j].patch;
        cert.xi_a = samples[i].xi;
        cert.xi_b = samples[j].xi;
        cert.witness_chord = chord;
      }
    }
  cert.pass = cert.margin > tol;
  return cert;
}

// ---------------------------------------------------------------------------
// Built-in families.

namespace families {

inline Eigen::Matrix2d rotation2(double angle) {
  Eigen::Matrix2d r;
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

inline ParametrizedManifold segment(Eigen::VectorXd origin, Eigen::VectorXd direction,
                                    std::array<double, 2> domain = {-0.5, 0.5}) {
  if (origin.size() != direction.size())
    throw DimensionMismatch("segment origin and direction disagree");
  int n = static_cast<int>(origin.size());
  if (direction.norm() == 0.0) throw ValidationError("segment direction must be nonzero");
  Patch p;
  p.domain = Box{{domain}};
  p.map = [origin, direction](const Eigen::VectorXd& xi) -> Eigen::VectorXd {
    return origin + xi[0] * direction;
  };
  p.derivative = [direction](const Eigen::VectorXd&) -> Eigen::MatrixXd { return direction; };
  return ParametrizedManifold(n, 1, "segment", {std::move(p)});
}

inline ParametrizedManifold parabola(double coeff = 1.0, std::array<double, 2> domain = {-1.0, 1.0},
                                     double rotate = 0.0,
                                     Eigen::Vector2d translate = Eigen::Vector2d::Zero()) {
  Eigen::Matrix2d rot = rotation2(rotate);
  Patch p;
  p.domain = Box{{domain}};
  p.map = [coeff, rot, translate](const Eigen::VectorXd& xi) -> Eigen::VectorXd {
    Eigen::Vector2d raw(xi[0], coeff * xi[0] * xi[0]);
    return rot * raw + translate;
  };
  p.derivative = [coeff, rot](const Eigen::VectorXd& xi) -> Eigen::MatrixXd {
    Eigen::Vector2d d(1.0, 2.0 * coeff * xi[0]);
    return rot * d;
  };
  return ParametrizedManifold(2, 1, "parabola", {std::move(p)});
}

inline ParametrizedManifold circle_arc(double radius = 1.0,
                                       Eigen::Vector2d center = Eigen::Vector2d::Zero(),
                                       std::array<double, 2> theta_range = {0.0, M_PI}) {
  if (!(radius > 0.0)) throw ValidationError("circle radius must be positive");
  if (theta_range[1] - theta_range[0] >= 2.0 * M_PI)
    throw ValidationError("arc range must be shorter than a full turn");
  Patch p;
  p.domain = Box{{theta_range}};
  p.map = [radius, center](const Eigen::VectorXd& xi) -> Eigen::VectorXd {
    return Eigen::Vector2d(center[0] + radius * std::cos(xi[0]),
                           center[1] + radius * std::sin(xi[0]));
  };
  p.derivative = [radius](const Eigen::VectorXd& xi) -> Eigen::MatrixXd {
    return Eigen::Vector2d(-radius * std::sin(xi[0]), radius * std::cos(xi[0]));
  };
  return ParametrizedManifold(2, 1, "circle_arc", {std::move(p)});
}

// pitch c: height gained per radian. ribbon_width 0 gives the curve; a
// positive width extrudes radially into a helicoid strip (parameter dim 2).
inline ParametrizedManifold helix(double pitch = 1.0 / (2.0 * M_PI), double radius = 1.0,
                                  std::array<double, 2> domain = {0.0, 4.0 * M_PI},
                                  double ribbon_width = 0.0) {
  if (!(radius > 0.0)) throw ValidationError("helix radius must be positive");
  if (ribbon_width < 0.0) throw ValidationError("helix ribbon width must be nonnegative");
  if (ribbon_width == 0.0) {
    Patch p;
    p.domain = Box{{domain}};
    p.map = [pitch, radius](const Eigen::VectorXd& xi) -> Eigen::VectorXd {
      return Eigen::Vector3d(radius * std::cos(xi[0]), radius * std::sin(xi[0]), pitch * xi[0]);
    };
    p.derivative = [pitch, radius](const Eigen::VectorXd& xi) -> Eigen::MatrixXd {
      return Eigen::Vector3d(-radius * std::sin(xi[0]), radius * std::cos(xi[0]), pitch);
    };
    return ParametrizedManifold(3, 1, "helix", {std::move(p)});
  }
  Patch p;
  p.domain = Box{{domain, {0.0, ribbon_width}}};
  p.map = [pitch, radius](const Eigen::VectorXd& xi) -> Eigen::VectorXd {
    double r = radius + xi[1];
    return Eigen::Vector3d(r * std::cos(xi[0]), r * std::sin(xi[0]), pitch * xi[0]);
  };
  p.derivative = [pitch, radius](const Eigen::VectorXd& xi) -> Eigen::MatrixXd {
    double r = radius + xi[1];
    Eigen::MatrixXd d(3, 2);
    d.col(0) = Eigen::Vector3d(-r * std::sin(xi[0]), r * std::cos(xi[0]), pitch);
    d.col(1) = Eigen::Vector3d(std::cos(xi[0]), std::sin(xi[0]), 0.0);
    return d;
  };
  return ParametrizedManifold(3, 2, "helix", {std::move(p)});
}

// Graph of |xi|^2 over a box: the curve (xi, xi^2) in the plane or the
// rotation-symmetric bowl in R^3.
inline ParametrizedManifold paraboloid(int ambient_dim = 3, Box domain = Box{}) {
  if (ambient_dim != 2 && ambient_dim != 3)
    throw ValidationError("paraboloid supports ambient dimension 2 or 3");
  int k = ambient_dim - 1;
  if (domain.axes.empty()) {
    domain.axes.assign(static_cast<std::size_t>(k), {-1.0, 1.0});
  }
  if (domain.dim() != k) throw DimensionMismatch("paraboloid domain has wrong dimension");
  Patch p;
  p.domain = domain;
  p.map = [k](const Eigen::VectorXd& xi) -> Eigen::VectorXd {
    Eigen::VectorXd out(k + 1);
    out.head(k) = xi;
    out[k] = xi.squaredNorm();
    return out;
  };
  p.derivative = [k](const Eigen::VectorXd& xi) -> Eigen::MatrixXd {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(k + 1, k);
    d.topRows(k).setIdentity();
    d.bottomRows(1) = 2.0 * xi.transpose();
    return d;
  };
  return ParametrizedManifold(k + 1, k, "paraboloid", {std::move(p)});
}

// Plane curve (xi, h(xi)) with polynomial height h given by coefficients in
// ascending degree order.
inline ParametrizedManifold graph_curve(std::vector<double> coeffs,
                                        std::array<double, 2> domain = {-1.0, 1.0},
                                        double rotate = 0.0,
                                        Eigen::Vector2d translate = Eigen::Vector2d::Zero()) {
  if (coeffs.empty()) throw ValidationError("graph curve needs polynomial coefficients");
  Eigen::Matrix2d rot = rotation2(rotate);
  auto horner = [coeffs](double x) {
    double v = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) v = v * x + coeffs[i];
    return v;
  };
  auto horner_d = [coeffs](double x) {
    double v = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 1;) v = v * x + i * coeffs[i];
    return v;
  };
  Patch p;
  p.domain = Box{{domain}};
  p.map = [horner, rot, translate](const Eigen::VectorXd& xi) -> Eigen::VectorXd {
    Eigen::Vector2d raw(xi[0], horner(xi[0]));
    return rot * raw + translate;
  };
  p.derivative = [horner_d, rot](const Eigen::VectorXd& xi) -> Eigen::MatrixXd {
    Eigen::Vector2d d(1.0, horner_d(xi[0]));
    return rot * d;
  };
  return ParametrizedManifold(2, 1, "graph_curve", {std::move(p)});
}

// Cartesian product: block-diagonal embedding into R^{n1+n2}. Patch lists
// multiply, which keeps disjoint unions intact.
inline ParametrizedManifold product(const ParametrizedManifold& a, const ParametrizedManifold& b);

// Two parallel copies of a flat cap separated by a fixed ambient shift; the
// canonical configuration on which the chord condition fails while the
// tangent condition holds.
inline ParametrizedManifold two_caps(double halfwidth = 0.5,
                                     Eigen::Vector2d separation = Eigen::Vector2d(0.0, 1.0),
                                     double rotate = 0.0,
                                     Eigen::Vector2d translate = Eigen::Vector2d::Zero()) {
  if (!(halfwidth > 0.0)) throw ValidationError("cap halfwidth must be positive");
  if (separation.norm() == 0.0) throw ValidationError("cap separation must be nonzero");
  Eigen::Matrix2d rot = rotation2(rotate);
  auto make_cap = [&](Eigen::Vector2d shift) {
    Patch p;
    p.domain = Box{{{-halfwidth, halfwidth}}};
    p.map = [rot, translate, shift](const Eigen::VectorXd& xi) -> Eigen::VectorXd {
      Eigen::Vector2d raw = Eigen::Vector2d(xi[0], 0.0) + shift;
      return rot * raw + translate;
    };
    p.derivative = [rot](const Eigen::VectorXd&) -> Eigen::MatrixXd {
      return rot * Eigen::Vector2d(1.0, 0.0);
    };
    return p;
  };
  std::vector<Patch> patches;
  patches.push_back(make_cap(Eigen::Vector2d::Zero()));
  patches.push_back(make_cap(separation));
  return ParametrizedManifold(2, 1, "two_caps", std::move(patches));
}

inline ParametrizedManifold product(const ParametrizedManifold& a,
                                    const ParametrizedManifold& b) {
  int n = a.ambient_dim() + b.ambient_dim();
  int k = a.param_dim() + b.param_dim();
  if (k >= n) throw DimensionMismatch("product parameter dimension must stay below ambient");
  std::vector<Patch> patches;
  for (int ia = 0; ia < a.patch_count(); ++ia)
    for (int ib = 0; ib < b.patch_count(); ++ib) {
      const Patch& pa = a.patch(ia);
      const Patch& pb = b.patch(ib);
      Patch p;
      p.domain.axes = pa.domain.axes;
      p.domain.axes.insert(p.domain.axes.end(), pb.domain.axes.begin(), pb.domain.axes.end());
      int ka = pa.domain.dim(), na = a.ambient_dim(), nb = b.ambient_dim();
      auto map_a = pa.map, map_b = pb.map;
      p.map = [map_a, map_b, ka, na, nb](const Eigen::VectorXd& xi) -> Eigen::VectorXd {
        Eigen::VectorXd out(na + nb);
        out.head(na) = map_a(xi.head(ka));
        out.tail(nb) = map_b(xi.tail(xi.size() - ka));
        return out;
      };
      if (pa.derivative && pb.derivative) {
        auto da = pa.derivative, db = pb.derivative;
        int kb = pb.domain.dim();
        p.derivative = [da, db, ka, kb, na, nb](const Eigen::VectorXd& xi) -> Eigen::MatrixXd {
          Eigen::MatrixXd d = Eigen::MatrixXd::Zero(na + nb, ka + kb);
          d.topLeftCorner(na, ka) = da(xi.head(ka));
          d.bottomRightCorner(nb, kb) = db(xi.tail(kb));
          return d;
        };
      }
      patches.push_back(std::move(p));
    }
  std::string tag = "product";
  if (a.family().rfind("two_caps", 0) == 0 || b.family().rfind("two_caps", 0) == 0)
    tag = "two_caps_product";  // keeps the cross-patch collision waiver
  return ParametrizedManifold(n, k, tag, std::move(patches));
}

}  // namespace families

}  // namespace kplane

#endif
