#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "kplane/applications.hpp"

using namespace kplane;
using Eigen::VectorXd;

namespace {

VectorXd vec2(double a, double b) {
  VectorXd v(2);
  v << a, b;
  return v;
}

Subspace line_at(double angle) {
  Eigen::MatrixXd b(2, 1);
  b << std::cos(angle), std::sin(angle);
  return Subspace(2, b);
}

QuadratureRule tuned_rule() {
  QuadratureRule rule;
  rule.order = 128;
  rule.plane_trunc_radius = 12.0;
  rule.plane_points_per_axis = 256;
  return rule;
}

}  // namespace

TEST_CASE("energy scan on the quadratic graph conserves the datum norm") {
  auto m = families::paraboloid(2);
  SurfaceDensity f("smooth_bump");
  EnergyScan scan = schrodinger_energy_scan(m, f, {0.0, 0.4, 1.1}, tuned_rule());

  CHECK(scan.energies.size() == 3);
  CHECK(scan.initial_error < 1e-6);
  CHECK(scan.max_rel_deviation < 1e-6);
  CHECK(scan.datum_l2_squared > 0.0);
  CHECK_FALSE(scan.diag.oscillation_budget_exceeded);
}

TEST_CASE("energy scan rejects other families and empty scans") {
  SurfaceDensity f("smooth_bump");
  CHECK_THROWS_AS(schrodinger_energy_scan(families::parabola(), f, {0.0}, tuned_rule()),
                  WrongScenario);
  CHECK_THROWS_AS(schrodinger_energy_scan(families::paraboloid(2), f, {}, tuned_rule()),
                  ValidationError);
}

TEST_CASE("planar extension grid agrees with pointwise evaluation") {
  auto m = families::parabola();
  SurfaceDensity f("smooth_bump");
  ManifoldNodes nodes = build_nodes(m, f, 64);

  std::vector<double> xs = {-1.5, 0.0, 2.25};
  std::vector<double> ys = {-0.5, 1.0};
  Eigen::MatrixXcd grid = detail::extension_grid_2d(nodes, xs, ys);
  REQUIRE(grid.rows() == 3);
  REQUIRE(grid.cols() == 2);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j) {
      std::complex<double> direct =
          extension_eval(nodes, m.image_diameter(), 64, vec2(xs[i], ys[j]));
      CHECK(std::abs(grid(i, j) - direct) < 1e-12);
    }
}

TEST_CASE("convolution identity for orthogonal segments is exactly flat") {
  auto horiz = families::segment(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0));
  auto vert = families::segment(Eigen::Vector2d(0, 0), Eigen::Vector2d(0, 1));
  SurfaceDensity f("indicator");
  QuadratureRule rule;  // radius 30, 512 points

  std::vector<VectorXd> xs = {vec2(0.3, 0.2), vec2(1.0, 1.0), vec2(2.0, -1.0)};
  ConvolutionCheck check = convolution_identity_check(horiz, f, vert, f, xs, rule);

  CHECK(check.rhs == Catch::Approx(1.0).epsilon(1e-10));
  CHECK(check.min_normal_wedge == Catch::Approx(1.0).epsilon(1e-12));
  for (double lhs : check.lhs_values) CHECK(lhs == Catch::Approx(1.0).margin(0.02));
  CHECK(check.max_rel_error < 0.02);
}

TEST_CASE("convolution identity rejects degenerate normal pairs") {
  auto seg1 = families::segment(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0));
  auto seg2 = families::segment(Eigen::Vector2d(0, 1), Eigen::Vector2d(1, 0));
  SurfaceDensity f("indicator");
  std::vector<VectorXd> xs = {vec2(0, 0)};
  CHECK_THROWS_AS(convolution_identity_check(seg1, f, seg2, f, xs, QuadratureRule{}),
                  NormalWedgeDegenerate);
  CHECK_THROWS_AS(convolution_identity_check(families::paraboloid(3), f, seg1, f, xs,
                                             QuadratureRule{}),
                  WrongScenario);
}

TEST_CASE("product wedge factor for coordinate normals") {
  std::vector<VectorXd> normals = {vec2(1, 0), vec2(0, 1)};
  ProductWedge pw = product_wedge_factor(normals);
  CHECK(pw.direct == Catch::Approx(0.5).epsilon(1e-12));
  CHECK(pw.closed_form == Catch::Approx(0.5).epsilon(1e-14));

  std::vector<VectorXd> perm(3, VectorXd::Zero(3));
  perm[0][1] = 1;
  perm[1][2] = 1;
  perm[2][0] = 1;
  ProductWedge pw3 = product_wedge_factor(perm);
  CHECK(pw3.closed_form == Catch::Approx(std::pow(3.0, -1.5)).epsilon(1e-14));
  CHECK(pw3.direct == Catch::Approx(pw3.closed_form).epsilon(1e-11));
}

TEST_CASE("product wedge routes agree on random unit normals") {
  std::mt19937_64 rng(20260819);
  std::normal_distribution<double> gauss;
  for (int n : {2, 3}) {
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<VectorXd> normals;
      for (int i = 0; i < n; ++i) {
        VectorXd v(n);
        for (int a = 0; a < n; ++a) v[a] = gauss(rng);
        normals.push_back(v.normalized());
      }
      ProductWedge pw = product_wedge_factor(normals);
      CHECK(std::abs(pw.direct - pw.closed_form) < 1e-10);
    }
  }
}

TEST_CASE("product wedge validation") {
  std::vector<VectorXd> bad = {vec2(2, 0), vec2(0, 1)};
  CHECK_THROWS_AS(product_wedge_factor(bad), ValidationError);
  CHECK_THROWS_AS(product_wedge_factor({vec2(1, 0)}), ValidationError);
}

TEST_CASE("exponent feasibility: orthonormal pair") {
  BLInstance inst;
  inst.n = 2;
  inst.vectors = {vec2(1, 0), vec2(0, 1)};
  inst.p = Eigen::Vector2d(1.0, 1.0);
  BLFeasibility out = bl_feasibility(inst);
  CHECK(out.feasible);
  REQUIRE(out.certificate.size() == 1);
  CHECK(out.certificate[0].first == std::vector<int>{0, 1});
  CHECK(out.certificate[0].second == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("exponent feasibility: three symmetric directions") {
  BLInstance inst;
  inst.n = 2;
  inst.vectors = {vec2(1, 0), vec2(0, 1), vec2(1, 1).normalized()};
  inst.p = Eigen::Vector3d(2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0);
  BLFeasibility out = bl_feasibility(inst);
  CHECK(out.feasible);
  // the certificate is unique here: every pair carries weight 1/3
  REQUIRE(out.certificate.size() == 3);
  for (const auto& [subset, lambda] : out.certificate)
    CHECK(lambda == Catch::Approx(1.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("exponent feasibility: infeasible points") {
  BLInstance inst;
  inst.n = 2;
  inst.vectors = {vec2(1, 0), vec2(0, 1), vec2(1, 1).normalized()};
  // total mass must match the ambient dimension
  inst.p = Eigen::Vector3d(0.5, 0.5, 0.5);
  CHECK_FALSE(bl_feasibility(inst).feasible);

  // right mass, but the dependent pair {e1, -e1} never spans
  BLInstance dep;
  dep.n = 2;
  dep.vectors = {vec2(1, 0), vec2(-1, 0), vec2(0, 1)};
  dep.p = Eigen::Vector3d(0.6, 0.6, 0.8);
  CHECK_FALSE(bl_feasibility(dep).feasible);

  // while the genuinely attainable point passes
  dep.p = Eigen::Vector3d(0.5, 0.5, 1.0);
  CHECK(bl_feasibility(dep).feasible);
}

TEST_CASE("exponent feasibility guards") {
  BLInstance inst;
  inst.n = 2;
  for (int k = 0; k < 13; ++k) {
    double a = M_PI * k / 14.0;
    inst.vectors.push_back(vec2(std::cos(a), std::sin(a)));
  }
  inst.p = Eigen::VectorXd::Constant(13, 2.0 / 13.0);
  CHECK_THROWS_AS(bl_feasibility(inst), TooManyMaps);

  BLInstance bad;
  bad.n = 2;
  bad.vectors = {vec2(1, 0), vec2(1, 0)};
  bad.p = Eigen::Vector2d(1.0, 1.0);
  CHECK_THROWS_AS(bl_feasibility(bad), ValidationError);
}

TEST_CASE("multilinear ratio for orthogonal segments is one") {
  auto horiz = families::segment(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0));
  auto vert = families::segment(Eigen::Vector2d(0, 0), Eigen::Vector2d(0, 1));
  std::vector<SurfaceDensity> fs = {SurfaceDensity("indicator"), SurfaceDensity("indicator")};
  MultilinearRatio mr = multilinear_l2_ratio({horiz, vert}, fs, QuadratureRule{});
  CHECK(mr.norm_product == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(mr.ratio == Catch::Approx(1.0).margin(0.01));
  CHECK_THROWS_AS(multilinear_l2_ratio({horiz}, fs, QuadratureRule{}), WrongScenario);
}

TEST_CASE("weighted identity with two atoms on the parabola") {
  auto m = families::parabola();
  SurfaceDensity f("smooth_bump");
  KPlaneWeight weight;
  weight.atoms.push_back({AffinePlane(line_at(0.0)), 1.0});
  weight.atoms.push_back({AffinePlane(line_at(M_PI / 12.0), vec2(0.0, 0.3)), 2.0});

  WeightedIdentityReport rep = weighted_identity_check(m, f, weight, tuned_rule(), 101);
  CHECK(rep.rel_error < 1e-4);
  CHECK(rep.atom_lhs.size() == 2);
  CHECK(rep.atom_margin_T[0] == Catch::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-9));
  CHECK(rep.atom_margin_T[1] > 0.19);
  CHECK(rep.lhs > 0.0);
  CHECK_FALSE(rep.diag.oscillation_budget_exceeded);

  KPlaneWeight bad;
  bad.atoms.push_back({AffinePlane(line_at(0.0)), -1.0});
  CHECK_THROWS_AS(weighted_identity_check(m, f, bad, tuned_rule()), ValidationError);
}

TEST_CASE("offset scan on the two caps tracks the interference profile") {
  auto m = families::two_caps();
  SurfaceDensity f("indicator");
  QuadratureRule rule;
  rule.order = 128;
  rule.plane_trunc_radius = 20.0;

  std::vector<double> ys = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  GtViolationScan scan = gt_violation_scan(m, f, line_at(0.0), ys, rule, 0.5);

  REQUIRE(scan.values.size() == 6);
  // interference of the two unit caps: 2 + 2 cos(2 pi y) times a unit factor
  for (std::size_t i = 0; i < ys.size(); ++i) {
    double expect = 2.0 + 2.0 * std::cos(2.0 * M_PI * ys[i]);
    CHECK(scan.values[i] == Catch::Approx(expect).margin(0.1));
  }
  CHECK(scan.y_dependent);
  CHECK(scan.variation > 0.5);
  CHECK(scan.margin_GT < 1e-9);
  CHECK(scan.min_margin_T == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(scan.witness_direction[1]) == Catch::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("offset scan and identity verification exclude each other") {
  auto caps = families::two_caps();
  SurfaceDensity f("indicator");
  QuadratureRule rule;
  rule.order = 128;
  rule.plane_trunc_radius = 20.0;

  // chords between the caps stay transverse to the 60 degree line, so the
  // identity applies there and the violation scan refuses to run
  Subspace tilted = line_at(M_PI / 3.0);
  CHECK_THROWS_AS(gt_violation_scan(caps, f, tilted, {0.0, 0.5}, rule), WrongScenario);
  IdentityReport rep = verify_identity(caps, f, tilted, {vec2(0, 0), vec2(-0.25, 0.25)}, rule);
  CHECK(rep.rhs == Catch::Approx(4.0).epsilon(1e-12));
  CHECK(rep.identity_error < 0.02);

  // and on the horizontal line the scan runs while the verifier refuses
  CHECK_THROWS_AS(verify_identity(caps, f, line_at(0.0), {vec2(0, 0)}, rule),
                  TransversalityViolation);
  CHECK_NOTHROW(gt_violation_scan(caps, f, line_at(0.0), {0.0, 0.5}, rule));
  CHECK_THROWS_AS(gt_violation_scan(families::parabola(), f, line_at(0.0), {0.0, 0.5}, rule),
                  WrongScenario);
}
