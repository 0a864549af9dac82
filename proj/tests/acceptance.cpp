// End-to-end acceptance checks. Each case prints a single [A#] verdict line so
// the suite's stdout doubles as a checklist; the assertions carry the details.

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>

#include "kplane/runner.hpp"

using namespace kplane;

namespace {

bool announce(const char* id, const std::string& what, bool ok) {
  std::printf("[%s] %s: %s\n", id, what.c_str(), ok ? "PASS" : "FAIL");
  std::fflush(stdout);
  return ok;
}

Subspace x_axis_line() {
  return Subspace(2, Eigen::MatrixXd::Identity(2, 2).leftCols(1));
}

QuadratureRule tuned_rule(int order) {
  QuadratureRule rule;
  rule.order = order;
  return rule;
}

std::vector<Eigen::VectorXd> vertical_offsets(std::initializer_list<double> heights) {
  std::vector<Eigen::VectorXd> out;
  for (double h : heights) out.push_back(Eigen::Vector2d(0.0, h));
  return out;
}

}  // namespace

TEST_CASE("A1 single-curve identity: all routes agree and offsets drop out") {
  auto m = families::parabola();
  SurfaceDensity f("smooth_bump");
  IdentityReport r = verify_identity(m, f, x_axis_line(),
                                     vertical_offsets({0.0, 0.5, -0.5, 1.0, -1.0}),
                                     tuned_rule(320));
  bool routes = r.identity_error <= 1e-3 && r.adjoint_error <= 1e-3;
  bool offsets = r.y_spread <= 1e-3;
  bool clean = !r.diag.oscillation_budget_exceeded;
  announce("A1", "plane integrals match both tangent-side routes to 1e-3, "
                 "offset-independent to 1e-3", routes && offsets && clean);
  CHECK(r.identity_error <= 1e-3);
  CHECK(r.adjoint_error <= 1e-3);
  CHECK(r.y_spread <= 1e-3);
  CHECK_FALSE(r.diag.oscillation_budget_exceeded);
}

TEST_CASE("A2 wedge factor reconciles with its Gaussian-integral oracle") {
  WedgeProbe probe;
  probe.pairs = 100;  // per ambient dimension, dims {2, 3}: 200 pairs total
  probe.seed = 20260819;
  double worst = detail::wedge_probe_error(probe);
  bool ok = worst <= 1e-4;
  announce("A2", "200 random complementary pairs, worst |wedge*integral - 1| <= 1e-4",
           ok);
  CHECK(worst <= 1e-4);
}

TEST_CASE("A3 energy of the quadratic-graph evolution is conserved") {
  auto m = families::paraboloid(2);
  SurfaceDensity f("smooth_bump");
  EnergyScan scan = schrodinger_energy_scan(m, f, {0.0, 0.25, 0.5, 1.0}, tuned_rule(320));
  bool ok = scan.initial_error <= 1e-3 && scan.max_rel_deviation <= 1e-3;
  announce("A3", "time slices hold the datum mass to 1e-3 across the scan", ok);
  CHECK(scan.initial_error <= 1e-3);
  CHECK(scan.max_rel_deviation <= 1e-3);
}

TEST_CASE("A4 autocorrelation of transverse curve pair is constant") {
  auto m1 = families::parabola(1.0, {-0.3, 0.3});
  auto m2 = families::parabola(1.0, {-0.3, 0.3}, M_PI / 2.0);
  SurfaceDensity f("smooth_bump");
  std::vector<Eigen::VectorXd> xs = {Eigen::Vector2d(0.25, 0.25), Eigen::Vector2d(1.0, 0.5),
                                     Eigen::Vector2d(-0.5, 1.0)};
  ConvolutionCheck c = convolution_identity_check(m1, f, m2, f, xs, tuned_rule(128));
  auto [lo, hi] = std::minmax_element(c.lhs_values.begin(), c.lhs_values.end());
  double mutual_spread = (*hi - *lo) / c.rhs;
  bool ok = c.max_rel_error <= 2e-2 && mutual_spread <= 2e-2;
  announce("A4", "three sample points agree with the weighted double integral to 2%", ok);
  CHECK(c.max_rel_error <= 2e-2);
  CHECK(mutual_spread <= 2e-2);
  // normals swing +-atan(0.6) per arc, so the worst pair wedge is sin(28 deg)
  CHECK(c.min_normal_wedge > 0.4);
}

TEST_CASE("A5 exponent feasibility cases and the two-curve L2 ratio") {
  Eigen::VectorXd e1 = Eigen::Vector2d(1.0, 0.0), e2 = Eigen::Vector2d(0.0, 1.0);
  Eigen::VectorXd diag = Eigen::Vector2d(1.0, 1.0).normalized();

  BLInstance generic{2, {e1, e2, diag}, Eigen::Vector3d(2.0 / 3, 2.0 / 3, 2.0 / 3)};
  BLFeasibility fa = bl_feasibility(generic);
  double lam_sum = 0.0, recon_err = 0.0;
  {
    Eigen::Vector3d recon = Eigen::Vector3d::Zero();
    for (const auto& [subset, lam] : fa.certificate) {
      lam_sum += lam;
      for (int idx : subset) recon[idx] += lam;
    }
    recon_err = (recon - generic.p).lpNorm<Eigen::Infinity>();
  }
  bool feasible_ok = fa.feasible && std::abs(lam_sum - 1.0) <= 1e-9 && recon_err <= 1e-9;

  BLInstance boundary{2, {e1, e2, diag}, Eigen::Vector3d(0.5, 0.5, 1.0)};
  bool boundary_ok = bl_feasibility(boundary).feasible;

  BLInstance low_mass{2, {e1, e2, diag}, Eigen::Vector3d(0.5, 0.5, 0.5)};
  BLInstance dependent{2, {e1, -e1, e2}, Eigen::Vector3d(0.6, 0.6, 0.8)};
  bool infeasible_ok = !bl_feasibility(low_mass).feasible &&
                       !bl_feasibility(dependent).feasible;

  auto s1 = families::segment(Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(1.0, 0.0));
  auto s2 = families::segment(Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(0.0, 1.0));
  SurfaceDensity f("smooth_bump");
  // order must cover the phase oscillation over the doubled box as well
  QuadratureRule base = tuned_rule(384);
  MultilinearRatio r1 = multilinear_l2_ratio({s1, s2}, {f, f}, base);
  QuadratureRule wide = base;
  wide.plane_trunc_radius *= 2.0;
  wide.plane_points_per_axis *= 2;  // doubled box at the original spacing
  MultilinearRatio r2 = multilinear_l2_ratio({s1, s2}, {f, f}, wide);
  bool ratio_ok = std::abs(r1.ratio - 1.0) <= 1e-3;
  bool stable_ok = std::abs(r2.ratio - r1.ratio) / r1.ratio < 1e-2;

  announce("A5", "feasibility verdicts with validated certificates; orthogonal-pair "
                 "L2 ratio is 1 to 1e-3 and stable under a doubled box",
           feasible_ok && boundary_ok && infeasible_ok && ratio_ok && stable_ok);
  CHECK(feasible_ok);
  CHECK(boundary_ok);
  CHECK(infeasible_ok);
  CHECK(std::abs(r1.ratio - 1.0) <= 1e-3);
  CHECK(std::abs(r2.ratio - r1.ratio) / r1.ratio < 1e-2);
}

TEST_CASE("A6 separated caps: chord condition fails and offsets matter") {
  auto m = families::two_caps(0.5, Eigen::Vector2d(0.0, 1.0));
  Subspace plane = x_axis_line();
  auto gt = check_transversality_GT(m, plane);
  bool witness_vertical =
      !gt.pass && std::abs(std::abs(gt.witness_chord.normalized()[1]) - 1.0) <= 1e-6;

  SurfaceDensity f("indicator");
  QuadratureRule rule = tuned_rule(192);
  rule.plane_trunc_radius = 20.0;
  std::vector<double> heights = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  GtViolationScan scan = gt_violation_scan(m, f, plane, heights, rule, 0.5);

  // The caps sit one unit apart, so the cross term beats at unit frequency:
  // the integral is proportional to 2 + 2 cos(2 pi y).
  double worst_shape = 0.0;
  for (std::size_t i = 0; i < heights.size(); ++i) {
    double predicted = (2.0 + 2.0 * std::cos(2.0 * M_PI * heights[i])) / 4.0;
    worst_shape = std::max(worst_shape, std::abs(scan.values[i] / scan.values[0] - predicted));
  }
  bool ok = witness_vertical && scan.y_dependent && scan.variation > 0.5 &&
            worst_shape <= 5e-2;
  announce("A6", "vertical witness chord, variation above 0.5, interference "
                 "profile within 5% of the two-point prediction", ok);
  CHECK(witness_vertical);
  CHECK(scan.y_dependent);
  CHECK(scan.variation > 0.5);
  CHECK(worst_shape <= 5e-2);
}

TEST_CASE("A7 two-atom weighted combination keeps the identity") {
  auto m = families::parabola();
  SurfaceDensity f("smooth_bump");
  Eigen::Matrix2d rot;
  double th = M_PI / 12.0;
  rot << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  KPlaneWeight weight;
  weight.atoms.push_back({AffinePlane(x_axis_line()), 1.0});
  weight.atoms.push_back(
      {AffinePlane(Subspace(2, rot * Eigen::MatrixXd::Identity(2, 2).leftCols(1)),
                   Eigen::Vector2d(0.0, 0.3)),
       2.0});
  WeightedIdentityReport r = weighted_identity_check(m, f, weight, tuned_rule(320));
  bool ok = r.rel_error <= 1e-3;
  announce("A7", "weighted sum of plane integrals matches the paired surface "
                 "integral to 1e-3", ok);
  CHECK(r.rel_error <= 1e-3);
}

TEST_CASE("A8 graph charts carry the reciprocal-wedge area element") {
  AffinePlane plane{x_axis_line()};
  detail::ChartProbe parab = detail::chart_probe(families::parabola(), plane, 100);
  detail::ChartProbe arc = detail::chart_probe(
      families::circle_arc(1.0, Eigen::Vector2d::Zero(), {M_PI / 4.0, 3.0 * M_PI / 4.0}),
      plane, 100);
  bool ok = parab.points == 100 && arc.points == 100 &&
            parab.worst_wedge_error <= 1e-8 && arc.worst_wedge_error <= 1e-8 &&
            parab.worst_fd_error <= 1e-6 && arc.worst_fd_error <= 1e-6;
  announce("A8", "100 chart points per curve: jacobian = 1/wedge to 1e-8, "
                 "finite differences to 1e-6", ok);
  CHECK(parab.points == 100);
  CHECK(arc.points == 100);
  CHECK(parab.worst_wedge_error <= 1e-8);
  CHECK(arc.worst_wedge_error <= 1e-8);
  CHECK(parab.worst_fd_error <= 1e-6);
  CHECK(arc.worst_fd_error <= 1e-6);
}

TEST_CASE("A9 bundled scenarios are stable under quadrature refinement") {
  const char* files[] = {
      "a1_parabola_identity.json", "a2_wedge_reconciliation.json",
      "a3_paraboloid_energy.json", "a4_convolution.json",
      "a5_bl_multilinear.json",    "a6_two_caps.json",
      "a7_weighted_identity.json",
  };
  bool all_ok = true;
  for (const char* file : files) {
    INFO(file);
    Scenario s = load_scenario(std::string(KPLANE_SCENARIO_DIR) + "/" + file);
    VerificationReport base = run_scenario(s);

    Scenario refined = s;
    refined.rule.order *= 2;
    refined.rule.plane_points_per_axis *= 2;
    VerificationReport fine = run_scenario(refined);

    REQUIRE(base.checks.size() == fine.checks.size());
    for (std::size_t i = 0; i < base.checks.size(); ++i) {
      const CheckRecord& b = base.checks[i];
      const CheckRecord& r = fine.checks[i];
      INFO(b.check << " base " << b.rel_error << " refined " << r.rel_error);
      REQUIRE(b.check == r.check);
      bool stable = b.pass && r.pass && std::abs(r.rel_error - b.rel_error) <= b.tolerance;
      all_ok &= stable;
      CHECK(b.pass);
      CHECK(r.pass);
      CHECK(std::abs(r.rel_error - b.rel_error) <= b.tolerance);
    }
  }
  announce("A9", "doubling order and plane resolution moves no check past its "
                 "tolerance", all_ok);
  CHECK(all_ok);
}
