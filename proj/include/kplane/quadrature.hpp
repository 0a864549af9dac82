#ifndef KPLANE_QUADRATURE_HPP
#define KPLANE_QUADRATURE_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kplane/errors.hpp"

namespace kplane {

// Knobs shared by every integration routine. "order" is the Gauss-Legendre
// point count per parameter axis; the plane_* fields control the truncated
// integration over affine planes in ambient space.
struct QuadratureRule {
  int order = 64;
  double plane_trunc_radius = 30.0;
  int plane_points_per_axis = 512;
  std::string window = "none";  // "none" or "raised_cosine" (diagnostics only)

  void validate() const {
    if (order < 8) throw ValidationError("quadrature order must be at least 8");
    if (!(plane_trunc_radius > 0.0))
      throw ValidationError("plane truncation radius must be positive");
    if (plane_points_per_axis < 16)
      throw ValidationError("plane_points_per_axis must be at least 16");
    if (window != "none" && window != "raised_cosine")
      throw ValidationError("unknown window tag '" + window + "'");
  }

  bool operator==(const QuadratureRule&) const = default;
};

struct GaussLegendre {
  std::vector<double> x;  // nodes on [-1, 1], ascending
  std::vector<double> w;
};

namespace detail {

inline GaussLegendre compute_gauss_legendre(int n) {
  GaussLegendre rule;
  rule.x.resize(n);
  rule.w.resize(n);
  // Newton on P_n with the usual Chebyshev-flavored initial guess. Roots come
  // in +/- pairs, so only half are solved for.
  int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.x[i] = -x;
    rule.w[i] = w;
    rule.x[n - 1 - i] = x;
    rule.w[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace detail

// Cached nodes and weights on [-1, 1].
inline const GaussLegendre& gauss_legendre(int n) {
  if (n < 1) throw ValidationError("Gauss-Legendre order must be positive");
  static std::map<int, GaussLegendre> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, detail::compute_gauss_legendre(n)).first;
  return it->second;
}

// Axis-aligned box domain in parameter space.
struct Box {
  std::vector<std::array<double, 2>> axes;  // {lo, hi} per axis

  int dim() const { return static_cast<int>(axes.size()); }
  double width(int i) const { return axes[i][1] - axes[i][0]; }
  double max_width() const {
    double w = 0.0;
    for (int i = 0; i < dim(); ++i) w = std::max(w, width(i));
    return w;
  }
  double volume() const {
    double v = 1.0;
    for (int i = 0; i < dim(); ++i) v *= width(i);
    return v;
  }
  Eigen::VectorXd center() const {
    Eigen::VectorXd c(dim());
    for (int i = 0; i < dim(); ++i) c[i] = 0.5 * (axes[i][0] + axes[i][1]);
    return c;
  }
  Eigen::VectorXd clamp(Eigen::VectorXd p) const {
    for (int i = 0; i < dim(); ++i) p[i] = std::min(axes[i][1], std::max(axes[i][0], p[i]));
    return p;
  }
  bool contains(const Eigen::VectorXd& p, double slack = 0.0) const {
    for (int i = 0; i < dim(); ++i)
      if (p[i] < axes[i][0] - slack || p[i] > axes[i][1] + slack) return false;
    return true;
  }
  void validate() const {
    if (axes.empty()) throw ValidationError("domain box needs at least one axis");
    for (const auto& a : axes)
      if (!(a[1] > a[0])) throw ValidationError("domain box axis has nonpositive width");
  }

  bool operator==(const Box&) const = default;
};

// Tensor Gauss-Legendre sweep over a box: fn(xi, weight) at each node.
template <class Fn>
void for_each_tensor_node(const Box& box, int order, Fn&& fn) {
  const GaussLegendre& gl = gauss_legendre(order);
  int k = box.dim();
  std::vector<int> idx(k, 0);
  Eigen::VectorXd xi(k);
  for (;;) {
    double w = 1.0;
    for (int a = 0; a < k; ++a) {
      double half = 0.5 * box.width(a);
      xi[a] = box.axes[a][0] + half * (gl.x[idx[a]] + 1.0);
      w *= half * gl.w[idx[a]];
    }
    fn(static_cast<const Eigen::VectorXd&>(xi), w);
    int a = 0;
    while (a < k && ++idx[a] == order) idx[a++] = 0;
    if (a == k) break;
  }
}

// Uniform grid including box corners, res points per axis (res >= 2).
template <class Fn>
void for_each_grid_point(const Box& box, int res, Fn&& fn) {
  int k = box.dim();
  std::vector<int> idx(k, 0);
  Eigen::VectorXd xi(k);
  for (;;) {
    for (int a = 0; a < k; ++a)
      xi[a] = box.axes[a][0] + box.width(a) * idx[a] / (res - 1);
    fn(static_cast<const Eigen::VectorXd&>(xi));
    int a = 0;
    while (a < k && ++idx[a] == res) idx[a++] = 0;
    if (a == k) break;
  }
}

}  // namespace kplane

#endif
