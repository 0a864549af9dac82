#ifndef KPLANE_RUNNER_HPP
#define KPLANE_RUNNER_HPP

#include <chrono>
#include <random>

#include "kplane/chart.hpp"
#include "kplane/report.hpp"
#include "kplane/scenario.hpp"

namespace kplane {

inline double default_tolerance(const std::string& check) {
  if (check == "check_transversality_T" || check == "check_transversality_GT")
    return kTransversalityTol;
  if (check == "verify_identity" || check == "verify_identity.y_invariance" ||
      check == "verify_identity.adjoint")
    return 1e-3;
  if (check == "schrodinger_energy_scan" || check == "schrodinger_energy_scan.initial")
    return 1e-3;
  if (check == "convolution_identity_check") return 2e-2;
  if (check == "bl_feasibility") return 0.0;
  if (check == "product_wedge_factor") return 1e-9;
  if (check == "multilinear_l2_ratio") return 1e-3;
  if (check == "weighted_identity_check") return 1e-3;
  if (check == "gt_violation_scan") return 0.0;
  if (check == "wedge_gaussian_oracle") return 1e-4;
  if (check == "graph_reparametrize") return 1e-8;
  if (check == "graph_reparametrize.fd") return 1e-6;
  throw ValidationError("no default tolerance for check '" + check + "'");
}

namespace detail {

inline double scenario_tolerance(const Scenario& s, const std::string& name) {
  auto it = s.tolerances.find(name);
  return it != s.tolerances.end() ? it->second : default_tolerance(name);
}

// Worst reconciliation error between the determinant wedge and the Gaussian
// integral route over seeded random complementary pairs.
inline double wedge_probe_error(const WedgeProbe& probe) {
  std::mt19937_64 rng(probe.seed);
  std::normal_distribution<double> gauss;
  double worst = 0.0;
  for (int n : probe.dims) {
    int done = 0;
    while (done < probe.pairs) {
      Eigen::MatrixXd g(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = gauss(rng);
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
      Eigen::MatrixXd q = qr.householderQ();
      int kv = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n - 1));
      // random rotation of a coordinate split keeps the pair complementary
      Eigen::MatrixXd g2(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g2(i, j) = gauss(rng);
      Eigen::MatrixXd q2 = Eigen::HouseholderQR<Eigen::MatrixXd>(g2).householderQ();
      Subspace v(n, q.leftCols(kv));
      Subspace w(n, q2.rightCols(n - kv));
      double wedge = wedge_abs(v, w);
      if (wedge <= probe.min_wedge) continue;
      ++done;
      double oracle = wedge_gaussian_oracle(v, w, probe.oracle_order);
      worst = std::max(worst, std::abs(wedge * oracle - 1.0));
    }
  }
  return worst;
}

struct ChartProbe {
  double worst_wedge_error = 0.0;  // jacobian vs reciprocal wedge
  double worst_fd_error = 0.0;     // jacobian vs finite differences of the chart
  int points = 0;
};

inline ChartProbe chart_probe(const ParametrizedManifold& m, const AffinePlane& plane,
                              int chart_points) {
  GraphChart chart = graph_reparametrize(m, plane.direction(), chart_points);
  ChartProbe probe;
  for (const auto& s : chart.samples()) {
    double wedge = wedge_abs(tangent_frame(m, s.xi), chart.plane_complement());
    probe.worst_wedge_error =
        std::max(probe.worst_wedge_error, std::abs(s.jacobian * wedge - 1.0));
    if (m.param_dim() == 1) {
      // step large enough that the Newton residual does not dominate the quotient
      double h = 1e-4 * chart.proj_domain().width(0);
      Eigen::VectorXd lo = s.u, hi = s.u;
      lo[0] -= h;
      hi[0] += h;
      if (!chart.proj_domain().contains(lo) || !chart.proj_domain().contains(hi)) continue;
      double fd = (chart.eval(hi).point - chart.eval(lo).point).norm() / (2.0 * h);
      probe.worst_fd_error = std::max(probe.worst_fd_error, std::abs(s.jacobian - fd));
    }
    ++probe.points;
  }
  return probe;
}

}  // namespace detail

// Executes the scenario's checks in order; failures and per-check errors are
// recorded, never fatal to the run.
inline VerificationReport run_scenario(const Scenario& s) {
  VerificationReport report;
  report.scenario = s.name;
  report.rule = s.rule;
  report.grid_res = s.grid_res;

  auto push = [&](CheckRecord rec, std::chrono::steady_clock::time_point start) {
    rec.runtime_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    report.checks.push_back(std::move(rec));
  };

  for (const std::string& name : s.checks) {
    auto start = std::chrono::steady_clock::now();
    std::vector<CheckRecord> recs;
    try {
      if (name == "check_transversality_T") {
        auto cert = check_transversality_T(s.manifold(), s.plane.direction(), s.grid_res,
                                           detail::scenario_tolerance(s, name));
        CheckRecord rec{name};
        rec.margin = cert.margin;
        rec.tolerance = cert.tol;
        rec.pass = cert.pass;
        if (!cert.pass) rec.message = "tangent space meets the plane complement";
        recs.push_back(rec);
      } else if (name == "check_transversality_GT") {
        auto cert = check_transversality_GT(s.manifold(), s.plane.direction(), s.grid_res,
                                            detail::scenario_tolerance(s, name));
        CheckRecord rec{name};
        rec.margin = cert.margin;
        rec.tolerance = cert.tol;
        rec.pass = cert.pass;
        if (!cert.pass) rec.message = "a chord direction falls into the plane complement";
        recs.push_back(rec);
      } else if (name == "verify_identity") {
        std::vector<Eigen::VectorXd> offsets;
        for (const auto& y : s.y_samples) offsets.push_back(s.plane.offset() + y);
        IdentityReport idr =
            verify_identity(s.manifold(), s.density(), s.plane.direction(), offsets, s.rule,
                            s.grid_res);
        CheckRecord main{name};
        main.lhs = idr.lhs_values.front();
        main.rhs = idr.rhs;
        main.rel_error = idr.identity_error;
        main.margin = std::min(idr.margin_T, idr.margin_GT);
        main.tail_bound = idr.max_tail_bound;
        main.tolerance = detail::scenario_tolerance(s, name);
        main.pass = idr.identity_error <= main.tolerance;
        if (idr.diag.oscillation_budget_exceeded) main.message = "oscillation budget exceeded";
        recs.push_back(main);

        CheckRecord spread{name + ".y_invariance"};
        auto [lo, hi] = std::minmax_element(idr.lhs_values.begin(), idr.lhs_values.end());
        spread.lhs = *hi;
        spread.rhs = *lo;
        spread.rel_error = idr.y_spread;
        spread.tolerance = detail::scenario_tolerance(s, spread.check);
        spread.pass = idr.y_spread <= spread.tolerance;
        recs.push_back(spread);

        CheckRecord adj{name + ".adjoint"};
        adj.lhs = idr.adjoint;
        adj.rhs = idr.rhs;
        adj.rel_error = idr.adjoint_error;
        adj.tolerance = detail::scenario_tolerance(s, adj.check);
        adj.pass = idr.adjoint_error <= adj.tolerance;
        recs.push_back(adj);
      } else if (name == "schrodinger_energy_scan") {
        EnergyScan scan = schrodinger_energy_scan(s.manifold(), s.density(), s.t_samples, s.rule);
        CheckRecord rec{name};
        rec.lhs = scan.energies.front();
        rec.rhs = scan.energies.back();
        rec.rel_error = scan.max_rel_deviation;
        rec.tail_bound = scan.max_tail_bound;
        rec.tolerance = detail::scenario_tolerance(s, name);
        rec.pass = scan.max_rel_deviation <= rec.tolerance;
        if (scan.diag.oscillation_budget_exceeded) rec.message = "oscillation budget exceeded";
        recs.push_back(rec);

        CheckRecord init{name + ".initial"};
        init.lhs = scan.energies.front();
        init.rhs = scan.datum_l2_squared;
        init.rel_error = scan.initial_error;
        init.tolerance = detail::scenario_tolerance(s, init.check);
        init.pass = scan.initial_error <= init.tolerance;
        recs.push_back(init);
      } else if (name == "convolution_identity_check") {
        ConvolutionCheck check =
            convolution_identity_check(s.manifolds[0], s.densities[0], s.manifolds[1],
                                       s.densities[1], s.x_samples, s.rule);
        CheckRecord rec{name};
        rec.lhs = check.lhs_values.front();
        rec.rhs = check.rhs;
        rec.rel_error = check.max_rel_error;
        rec.margin = check.min_normal_wedge;
        rec.tolerance = detail::scenario_tolerance(s, name);
        rec.pass = check.max_rel_error <= rec.tolerance;
        recs.push_back(rec);
      } else if (name == "bl_feasibility") {
        BLFeasibility out = bl_feasibility(*s.bl);
        CheckRecord rec{name};
        rec.lhs = out.feasible ? 1.0 : 0.0;
        rec.rhs = s.bl_expect_feasible ? 1.0 : 0.0;
        rec.rel_error = out.phase1_objective;
        rec.tolerance = detail::scenario_tolerance(s, name);
        rec.pass = out.feasible == s.bl_expect_feasible;
        rec.message = out.feasible ? "feasible, certificate verified" : "infeasible";
        recs.push_back(rec);
      } else if (name == "product_wedge_factor") {
        ProductWedge pw = product_wedge_factor(s.product_normals);
        CheckRecord rec{name};
        rec.lhs = pw.direct;
        rec.rhs = pw.closed_form;
        rec.rel_error = std::abs(pw.direct - pw.closed_form) / std::max(1e-300, pw.closed_form);
        rec.tolerance = detail::scenario_tolerance(s, name);
        rec.pass = rec.rel_error <= rec.tolerance;
        recs.push_back(rec);
      } else if (name == "multilinear_l2_ratio") {
        MultilinearRatio mr = multilinear_l2_ratio(s.manifolds, s.densities, s.rule);
        CheckRecord rec{name};
        rec.lhs = mr.product_l2;
        rec.rhs = mr.norm_product;
        rec.rel_error = std::abs(mr.ratio - s.expected_ratio) / s.expected_ratio;
        rec.tolerance = detail::scenario_tolerance(s, name);
        rec.pass = rec.rel_error <= rec.tolerance;
        recs.push_back(rec);
      } else if (name == "weighted_identity_check") {
        WeightedIdentityReport rep =
            weighted_identity_check(s.manifold(), s.density(), *s.plane_weight, s.rule,
                                    s.grid_res);
        CheckRecord rec{name};
        rec.lhs = rep.lhs;
        rec.rhs = rep.rhs;
        rec.rel_error = rep.rel_error;
        rec.margin = *std::min_element(rep.atom_margin_GT.begin(), rep.atom_margin_GT.end());
        rec.tail_bound = rep.max_tail_bound;
        rec.tolerance = detail::scenario_tolerance(s, name);
        rec.pass = rep.rel_error <= rec.tolerance;
        if (rep.diag.oscillation_budget_exceeded) rec.message = "oscillation budget exceeded";
        recs.push_back(rec);
      } else if (name == "gt_violation_scan") {
        GtViolationScan scan = gt_violation_scan(s.manifold(), s.density(), s.plane.direction(),
                                                 s.y_range, s.rule, s.variation_floor,
                                                 s.grid_res);
        CheckRecord rec{name};
        auto [lo, hi] = std::minmax_element(scan.values.begin(), scan.values.end());
        rec.lhs = *hi;
        rec.rhs = *lo;
        rec.rel_error = scan.variation;
        rec.margin = scan.margin_GT;
        rec.tolerance = scan.variation_floor;
        rec.pass = scan.y_dependent;
        rec.message = scan.y_dependent ? "plane integrals depend on the offset"
                                       : "variation below the floor";
        recs.push_back(rec);
      } else if (name == "wedge_gaussian_oracle") {
        double worst = detail::wedge_probe_error(s.wedge_probe);
        CheckRecord rec{name};
        rec.lhs = 1.0 + worst;
        rec.rhs = 1.0;
        rec.rel_error = worst;
        rec.tolerance = detail::scenario_tolerance(s, name);
        rec.pass = worst <= rec.tolerance;
        recs.push_back(rec);
      } else if (name == "graph_reparametrize") {
        detail::ChartProbe probe = detail::chart_probe(s.manifold(), s.plane, s.chart_points);
        CheckRecord rec{name};
        rec.lhs = 1.0 + probe.worst_wedge_error;
        rec.rhs = 1.0;
        rec.rel_error = probe.worst_wedge_error;
        rec.tolerance = detail::scenario_tolerance(s, name);
        rec.pass = probe.worst_wedge_error <= rec.tolerance;
        rec.message = std::to_string(probe.points) + " chart points";
        recs.push_back(rec);

        if (s.manifold().param_dim() == 1) {
          CheckRecord fd{name + ".fd"};
          fd.rel_error = probe.worst_fd_error;
          fd.tolerance = detail::scenario_tolerance(s, fd.check);
          fd.pass = probe.worst_fd_error <= fd.tolerance;
          recs.push_back(fd);
        }
      } else {
        throw ValidationError("unknown check '" + name + "'");
      }
    } catch (const Error& e) {
      CheckRecord rec{name};
      rec.pass = false;
      rec.message = e.what();
      recs.clear();
      recs.push_back(rec);
    }
    for (auto& rec : recs) push(std::move(rec), start);
  }
  return report;
}

}  // namespace kplane

#endif
