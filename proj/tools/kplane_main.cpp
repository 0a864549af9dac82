#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "kplane/runner.hpp"

namespace {

int run_verify(const std::string& path, const std::string& format, const std::string& out_path,
               int quad_order, double trunc_radius, int grid_res) {
  kplane::Scenario scenario = kplane::load_scenario(path);
  if (quad_order > 0) scenario.rule.order = quad_order;
  if (trunc_radius > 0.0) scenario.rule.plane_trunc_radius = trunc_radius;
  if (grid_res > 0) scenario.grid_res = grid_res;
  scenario.rule.validate();

  kplane::VerificationReport report;
  try {
    report = kplane::run_scenario(scenario);
    kplane::write_report(report, format, out_path);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return report.overall_pass() ? 0 : 1;
}

void run_list_families() {
  std::cout << "manifold families (scenario \"manifold.family\"):\n";
  for (const auto& name : kplane::scenario_families()) {
    std::cout << "  " << name << "\n";
    if (name == "segment") std::cout << "      origin, direction, domain\n";
    if (name == "parabola") std::cout << "      coeff, domain, rotate, translate\n";
    if (name == "circle_arc") std::cout << "      radius, center, theta_range\n";
    if (name == "helix") std::cout << "      pitch, radius, domain, ribbon_width\n";
    if (name == "paraboloid") std::cout << "      ambient, domain\n";
    if (name == "graph_curve") std::cout << "      coeffs, domain, rotate, translate\n";
    if (name == "two_caps") std::cout << "      halfwidth, separation, rotate, translate\n";
  }
  std::cout << "density families (scenario \"density.family\"):\n";
  std::cout << "  smooth_bump      amplitude\n";
  std::cout << "  indicator        amplitude\n";
  std::cout << "  gaussian_truncated  amplitude, gamma\n";
  std::cout << "checks (scenario \"checks\"):\n";
  for (const auto& name : kplane::registered_checks()) std::cout << "  " << name << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"transversality and plane-integral identity verifier"};
  app.require_subcommand(1);

  std::string scenario_path, format = "table", out_path, family;
  int quad_order = 0, grid_res = 0;
  double trunc_radius = 0.0;

  CLI::App* verify = app.add_subcommand("verify", "run a scenario file's checks");
  verify->add_option("scenario", scenario_path, "path to a scenario JSON file")->required();
  verify->add_option("--format", format, "report format")
      ->check(CLI::IsMember({"json", "table"}));
  verify->add_option("--out", out_path, "write the report to a file instead of stdout");
  verify->add_option("--quad-order", quad_order, "override the quadrature order")
      ->check(CLI::PositiveNumber);
  verify->add_option("--trunc-radius", trunc_radius, "override the plane truncation radius")
      ->check(CLI::PositiveNumber);
  verify->add_option("--grid-res", grid_res, "override the hypothesis-check grid resolution")
      ->check(CLI::PositiveNumber);

  CLI::App* list = app.add_subcommand("list-families", "list manifold and density families");

  CLI::App* emit = app.add_subcommand("emit-example", "print a canonical scenario for a family");
  emit->add_option("family", family, "manifold family name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (verify->parsed())
      return run_verify(scenario_path, format, out_path, quad_order, trunc_radius, grid_res);
    if (list->parsed()) {
      run_list_families();
      return 0;
    }
    if (emit->parsed()) {
      std::cout << kplane::emit_example(family);
      return 0;
    }
  } catch (const kplane::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const kplane::SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const kplane::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
