#ifndef KPLANE_CHART_HPP
#define KPLANE_CHART_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "kplane/errors.hpp"
#include "kplane/manifold.hpp"
#include "kplane/subspace.hpp"

namespace kplane {

inline constexpr double kChartResidualTol = 1e-12;
inline constexpr int kChartMaxNewtonIter = 50;

struct ChartSample {
  Eigen::VectorXd u;      // coordinates in the plane basis
  Eigen::VectorXd xi;     // parameter solving the projection equation
  Eigen::VectorXd point;  // ambient point on the manifold
  Eigen::VectorXd phi;    // component orthogonal to the plane, as an ambient vector
  double jacobian = 0.0;  // area element of u -> u + phi(u)
};

// Reparametrization of a manifold as a graph over a plane: for u in the
// projected domain, solve P_plane(map(xi)) = u and record the height phi(u).
// Requires both transversality conditions; the chord condition guarantees the
// projection is one-to-one, the tangent condition keeps Newton's method
// well-posed.
class GraphChart {
 public:
  GraphChart(ParametrizedManifold manifold, Subspace plane, int grid_res = 64,
             int hypothesis_grid_res = kDefaultGridRes)
      : m_(std::move(manifold)), plane_(std::move(plane)),
        perp_(plane_.orthogonal_complement()) {
    if (m_.patch_count() != 1)
      throw ValidationError("graph reparametrization requires a single-patch manifold");
    auto t_cert = check_transversality_T(m_, plane_, hypothesis_grid_res);
    if (!t_cert.pass)
      throw TransversalityViolation("tangent condition fails; no graph structure over this plane");
    auto gt_cert = check_transversality_GT(m_, plane_, hypothesis_grid_res);
    if (!gt_cert.pass)
      throw TransversalityViolation("chord condition fails; projection onto the plane is not injective");

    build_scan();
    build_grid(grid_res);
  }

  const ParametrizedManifold& manifold() const { return m_; }
  const Subspace& plane() const { return plane_; }
  const Subspace& plane_complement() const { return perp_; }
  const Box& proj_domain() const { return proj_domain_; }
  const std::vector<ChartSample>& samples() const { return grid_; }

  // Solve at an arbitrary u inside the projected domain, warm-started from
  // the nearest precomputed sample.
  ChartSample eval(const Eigen::VectorXd& u) const {
    if (u.size() != m_.param_dim())
      throw DimensionMismatch("chart coordinate has wrong dimension");
    if (!proj_domain_.contains(u, 1e-9 * proj_domain_.max_width()))
      throw RootFindFailure("chart coordinate outside the projected domain");
    Eigen::VectorXd seed = nearest_scan_seed(u);
    return solve_at(u, seed);
  }

 private:
  Eigen::VectorXd project_coords(const Eigen::VectorXd& point) const {
    return plane_.basis().transpose() * point;
  }

  // Fine parameter scan used for the projected domain, Newton seeds and the
  // bisection bracket in one parameter.
  void build_scan() {
    const Box& dom = m_.patch(0).domain;
    int k = m_.param_dim();
    int res = k == 1 ? 1025 : 65;
    for_each_grid_point(dom, res, [&](const Eigen::VectorXd& xi) {
      scan_xi_.push_back(xi);
      scan_u_.push_back(project_coords(m_.point(0, xi)));
    });
    Eigen::VectorXd lo = scan_u_.front(), hi = scan_u_.front();
    for (const auto& u : scan_u_) {
      lo = lo.cwiseMin(u);
      hi = hi.cwiseMax(u);
    }
    proj_domain_.axes.clear();
    for (int a = 0; a < k; ++a) proj_domain_.axes.push_back({lo[a], hi[a]});
    proj_domain_.validate();
  }

  void build_grid(int grid_res) {
    if (grid_res < 2) throw ValidationError("chart grid resolution must be at least 2");
    int k = m_.param_dim();
    std::vector<int> idx(k, 0);
    Eigen::VectorXd u(k);
    Eigen::VectorXd seed;
    for (;;) {
      // Midpoint-style grid: interior points only, so the boundary of the
      // projected image never has to be solved exactly.
      for (int a = 0; a < k; ++a)
        u[a] = proj_domain_.axes[a][0] + proj_domain_.width(a) * (idx[a] + 0.5) / grid_res;
      if (grid_.empty())
        seed = nearest_scan_seed(u);
      ChartSample s = solve_at(u, seed);
      seed = s.xi;  // march: warm-start the next grid point
      grid_.push_back(std::move(s));
      int a = 0;
      while (a < k && ++idx[a] == grid_res) idx[a++] = 0;
      if (a == k) break;
    }
  }

  Eigen::VectorXd nearest_scan_seed(const Eigen::VectorXd& u) const {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < scan_u_.size(); ++i) {
      double d = (scan_u_[i] - u).squaredNorm();
      if (d < best) {
        best = d;
        best_i = i;
      }
    }
    return scan_xi_[best_i];
  }

  ChartSample solve_at(const Eigen::VectorXd& u, const Eigen::VectorXd& seed) const {
    const Box& dom = m_.patch(0).domain;
    Eigen::VectorXd xi = dom.clamp(seed);
    Eigen::VectorXd r = project_coords(m_.point(0, xi)) - u;
    bool converged = r.norm() < kChartResidualTol;
    for (int iter = 0; iter < kChartMaxNewtonIter && !converged; ++iter) {
      Eigen::MatrixXd ju = plane_.basis().transpose() * map_derivative(m_, 0, xi);
      Eigen::VectorXd step = ju.fullPivLu().solve(r);
      double rnorm = r.norm();
      double damp = 1.0;
      for (int halvings = 0; halvings < 8; ++halvings) {
        Eigen::VectorXd cand = dom.clamp(xi - damp * step);
        Eigen::VectorXd rc = project_coords(m_.point(0, cand)) - u;
        if (rc.norm() < rnorm || halvings == 7) {
          xi = cand;
          r = rc;
          break;
        }
        damp *= 0.5;
      }
      converged = r.norm() < kChartResidualTol;
    }
    if (!converged && m_.param_dim() == 1) {
      xi = bisect(u[0]);
      r = project_coords(m_.point(0, xi)) - u;
      converged = r.norm() < kChartResidualTol;
    }
    if (!converged)
      throw RootFindFailure("projection equation did not converge at a chart point");

    ChartSample s;
    s.u = u;
    s.xi = xi;
    s.point = m_.point(0, xi);
    s.phi = s.point - plane_.basis() * project_coords(s.point);
    s.jacobian = 1.0 / wedge_abs(tangent_frame(m_, xi, 0), perp_);
    return s;
  }

  // One-parameter fallback: the projected scan is strictly monotone under the
  // chord condition, so a sign change brackets the root.
  Eigen::VectorXd bisect(double target) const {
    double lo = scan_xi_.front()[0], hi = scan_xi_.back()[0];
    double flo = scan_u_.front()[0] - target, fhi = scan_u_.back()[0] - target;
    if (flo * fhi > 0.0) {
      // scan endpoints do not bracket: find the sign change
      bool found = false;
      for (std::size_t i = 0; i + 1 < scan_u_.size(); ++i) {
        double a = scan_u_[i][0] - target, b = scan_u_[i + 1][0] - target;
        if (a == 0.0 || a * b < 0.0) {
          lo = scan_xi_[i][0];
          hi = scan_xi_[i + 1][0];
          flo = a;
          found = true;
          break;
        }
      }
      if (!found) throw RootFindFailure("no bracket for the projection equation");
    }
    for (int iter = 0; iter < 200; ++iter) {
      double mid = 0.5 * (lo + hi);
      Eigen::VectorXd xim(1);
      xim[0] = mid;
      double fm = project_coords(m_.point(0, xim))[0] - target;
      if (fm == 0.0 || hi - lo < 1e-16 * std::max(1.0, std::abs(hi))) {
        return xim;
      }
      if ((fm < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    Eigen::VectorXd out(1);
    out[0] = 0.5 * (lo + hi);
    return out;
  }

  ParametrizedManifold m_;
  Subspace plane_;
  Subspace perp_;
  Box proj_domain_;
  std::vector<Eigen::VectorXd> scan_xi_;
  std::vector<Eigen::VectorXd> scan_u_;
  std::vector<ChartSample> grid_;
};

inline GraphChart graph_reparametrize(const ParametrizedManifold& m, const Subspace& plane,
                                      int grid_res = 64) {
  return GraphChart(m, plane, grid_res);
}

}  // namespace kplane

#endif
