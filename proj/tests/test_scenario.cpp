#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include "kplane/runner.hpp"

using namespace kplane;
using nlohmann::json;

TEST_CASE("minimal scenario fills every default") {
  Scenario s = load_scenario_json(json::object(), "minimal");
  CHECK(s.name == "minimal");
  CHECK(s.manifold().family() == "parabola");
  CHECK(s.density().family() == "smooth_bump");
  CHECK(s.plane.dim() == 1);
  CHECK(s.plane.direction().basis().col(0)[0] == Catch::Approx(1.0));
  CHECK(s.rule.order == 64);
  CHECK(s.rule.plane_trunc_radius == 30.0);
  CHECK(s.grid_res == kDefaultGridRes);
  CHECK(s.checks == std::vector<std::string>{"check_transversality_T", "check_transversality_GT",
                                             "verify_identity"});
  REQUIRE(s.y_samples.size() == 5);
  CHECK(s.y_samples[0].norm() == 0.0);
  CHECK(s.y_samples[3].norm() == Catch::Approx(1.0));
  CHECK(s.t_samples == std::vector<double>{0.0, 0.25, 0.5, 1.0});
}

TEST_CASE("unknown keys are rejected with their path") {
  json doc;
  doc["quadratue"] = json::object();
  CHECK_THROWS_WITH(load_scenario_json(doc, "x"),
                    Catch::Matchers::ContainsSubstring("quadratue"));

  json nested;
  nested["quadrature"]["ordr"] = 32;
  CHECK_THROWS_WITH(load_scenario_json(nested, "x"),
                    Catch::Matchers::ContainsSubstring("scenario.quadrature") &&
                        Catch::Matchers::ContainsSubstring("ordr"));

  json mdoc;
  mdoc["manifold"]["family"] = "parabola";
  mdoc["manifold"]["coef"] = 2.0;
  CHECK_THROWS_AS(load_scenario_json(mdoc, "x"), SchemaError);
}

TEST_CASE("type mismatches are schema errors") {
  json doc;
  doc["grid_res"] = "many";
  CHECK_THROWS_AS(load_scenario_json(doc, "x"), SchemaError);

  json doc2;
  doc2["y_samples"] = {1.0, 2.0};  // scalars, not vectors
  CHECK_THROWS_AS(load_scenario_json(doc2, "x"), SchemaError);

  json doc3;
  doc3["checks"] = "verify_identity";
  CHECK_THROWS_AS(load_scenario_json(doc3, "x"), SchemaError);
}

TEST_CASE("semantic problems are validation errors") {
  json doc;
  doc["schema_version"] = 2;
  CHECK_THROWS_AS(load_scenario_json(doc, "x"), ValidationError);

  json doc2;
  doc2["checks"] = {"verify_identities"};
  CHECK_THROWS_AS(load_scenario_json(doc2, "x"), ValidationError);

  json doc3;
  doc3["manifold"]["family"] = "dodecahedron";
  CHECK_THROWS_AS(load_scenario_json(doc3, "x"), ValidationError);

  json doc4;
  doc4["plane"]["basis"] = {{1.0, 0.0}, {0.0, 1.0}};  // two vectors for a line
  CHECK_THROWS_AS(load_scenario_json(doc4, "x"), ValidationError);

  json doc5;
  doc5["manifold"]["family"] = "helix";
  doc5["plane"]["angle"] = 0.5;  // angle form only makes sense in the plane
  CHECK_THROWS_AS(load_scenario_json(doc5, "x"), ValidationError);

  json doc6;
  doc6["y_samples"] = {{0.0, 0.0, 0.0}};  // wrong ambient dimension
  CHECK_THROWS_AS(load_scenario_json(doc6, "x"), ValidationError);

  json doc7;
  doc7["checks"] = {"bl_feasibility"};  // needs its block
  CHECK_THROWS_AS(load_scenario_json(doc7, "x"), ValidationError);
}

TEST_CASE("manifold and manifolds are mutually exclusive") {
  json doc;
  doc["manifold"]["family"] = "parabola";
  doc["manifolds"] = {{{"family", "parabola"}}};
  CHECK_THROWS_AS(load_scenario_json(doc, "x"), SchemaError);
}

TEST_CASE("tolerance overrides are picked up and typo-checked") {
  json doc;
  doc["tolerances"]["verify_identity"] = 5e-4;
  Scenario s = load_scenario_json(doc, "x");
  CHECK(s.tolerances.at("verify_identity") == 5e-4);

  json bad;
  bad["tolerances"]["verify_identty"] = 5e-4;
  CHECK_THROWS_AS(load_scenario_json(bad, "x"), SchemaError);
}

TEST_CASE("plane forms: angle, basis, offset canonicalization") {
  json doc;
  doc["plane"]["angle"] = M_PI / 2.0;
  Scenario s = load_scenario_json(doc, "x");
  CHECK(std::abs(s.plane.direction().basis().col(0)[1]) == Catch::Approx(1.0));

  json doc2;
  doc2["plane"]["basis"] = {{2.0, 0.0}};  // gets normalized
  doc2["plane"]["offset"] = {3.0, 0.25};  // component along the plane is dropped
  Scenario s2 = load_scenario_json(doc2, "x");
  CHECK(s2.plane.offset()[0] == 0.0);
  CHECK(s2.plane.offset()[1] == Catch::Approx(0.25));

  json doc3;
  doc3["plane"]["preset"] = "x_axis";
  doc3["plane"]["angle"] = 0.0;
  CHECK_THROWS_AS(load_scenario_json(doc3, "x"), SchemaError);
}

TEST_CASE("emitted canonical examples load and run clean") {
  for (const auto& family : scenario_families()) {
    INFO("family " << family);
    json doc = json::parse(emit_example(family));
    Scenario s = load_scenario_json(doc, family);
    CHECK(s.manifold().family().rfind(family, 0) == 0);
    VerificationReport report = run_scenario(s);
    CHECK(report.checks.size() >= 2);
    for (const auto& rec : report.checks) {
      INFO(rec.check << ": " << rec.message << " rel_error " << rec.rel_error);
      CHECK(rec.pass);
    }
  }
}

TEST_CASE("runner captures per-check errors without aborting the run") {
  json doc;
  doc["manifold"]["family"] = "parabola";
  doc["checks"] = {"gt_violation_scan", "check_transversality_T"};
  Scenario s = load_scenario_json(doc, "x");
  VerificationReport report = run_scenario(s);
  REQUIRE(report.checks.size() == 2);
  CHECK_FALSE(report.checks[0].pass);  // wrong family, recorded not thrown
  CHECK(report.checks[0].message.find("two-cap") != std::string::npos);
  CHECK(report.checks[1].pass);
  CHECK_FALSE(report.overall_pass());
}

TEST_CASE("empty check list is a passing report") {
  json doc;
  doc["checks"] = json::array();
  VerificationReport report = run_scenario(load_scenario_json(doc, "x"));
  CHECK(report.checks.empty());
  CHECK(report.overall_pass());
}

TEST_CASE("report JSON is parseable, stable, and escaped") {
  json doc;
  doc["name"] = "quote\"and\nnewline";
  doc["checks"] = {"check_transversality_T"};
  Scenario s = load_scenario_json(doc, "x");
  VerificationReport r1 = run_scenario(s);
  VerificationReport r2 = run_scenario(s);

  std::string j1 = report_to_json(r1), j2 = report_to_json(r2);
  auto strip_runtime = [](const std::string& text) {
    std::string out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
      if (line.find("\"runtime_ms\"") == std::string::npos) out += line + "\n";
    return out;
  };
  CHECK(strip_runtime(j1) == strip_runtime(j2));

  json parsed = json::parse(j1);
  CHECK(parsed["schema_version"] == 1);
  CHECK(parsed["scenario"] == "quote\"and\nnewline");
  CHECK(parsed["overall_pass"] == true);
  REQUIRE(parsed["checks"].size() == 1);
  CHECK(parsed["checks"][0]["check"] == "check_transversality_T");
  CHECK(parsed["checks"][0]["pass"] == true);
  CHECK(parsed["quadrature"]["order"] == 64);

  VerificationReport bad;
  bad.scenario = "bad";
  CheckRecord rec;
  rec.check = "x";
  rec.lhs = std::numeric_limits<double>::quiet_NaN();
  bad.checks.push_back(rec);
  CHECK_THROWS_AS(report_to_json(bad), Error);
}

TEST_CASE("table format lists one row per check with the error column") {
  json doc;
  doc["checks"] = {"check_transversality_T", "check_transversality_GT"};
  VerificationReport report = run_scenario(load_scenario_json(doc, "tbl"));
  std::string table = report_to_table(report);
  CHECK(table.find("rel_error") != std::string::npos);
  CHECK(table.find("check_transversality_T") != std::string::npos);
  CHECK(table.find("check_transversality_GT") != std::string::npos);
  CHECK(table.find("overall: pass") != std::string::npos);
}

TEST_CASE("scenario files load from disk with parse errors surfaced") {
  std::string good = "/tmp/kplane_scenario_ok.json";
  {
    std::ofstream out(good);
    out << "{ \"checks\": [] }\n";
  }
  Scenario s = load_scenario(good);
  CHECK(s.name == "kplane_scenario_ok");
  CHECK(s.checks.empty());

  std::string bad = "/tmp/kplane_scenario_bad.json";
  {
    std::ofstream out(bad);
    out << "{ not json\n";
  }
  CHECK_THROWS_AS(load_scenario(bad), ParseError);
  CHECK_THROWS_AS(load_scenario("/tmp/kplane_scenario_missing.json"), ParseError);
}
