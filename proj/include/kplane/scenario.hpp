#ifndef KPLANE_SCENARIO_HPP
#define KPLANE_SCENARIO_HPP

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kplane/applications.hpp"
#include "kplane/manifold.hpp"
#include "kplane/quadrature.hpp"
#include "kplane/transform.hpp"

namespace kplane {

// Check names are the operation names they dispatch to.
inline const std::vector<std::string>& registered_checks() {
  static const std::vector<std::string> names = {
      "check_transversality_T",    "check_transversality_GT", "verify_identity",
      "schrodinger_energy_scan",   "convolution_identity_check",
      "bl_feasibility",            "product_wedge_factor",    "multilinear_l2_ratio",
      "weighted_identity_check",   "gt_violation_scan",       "wedge_gaussian_oracle",
      "graph_reparametrize",
  };
  return names;
}

// Sub-records emitted by composite checks; they can take tolerance overrides
// under these names just like the checks themselves.
inline const std::vector<std::string>& tolerance_only_names() {
  static const std::vector<std::string> names = {
      "verify_identity.y_invariance",
      "verify_identity.adjoint",
      "schrodinger_energy_scan.initial",
      "graph_reparametrize.fd",
  };
  return names;
}

struct WedgeProbe {
  int pairs = 200;
  std::vector<int> dims = {2, 3};
  double min_wedge = 0.05;
  std::uint64_t seed = 12345;
  int oracle_order = 32;
};

struct Scenario {
  std::string name = "unnamed";
  std::vector<ParametrizedManifold> manifolds;
  std::vector<SurfaceDensity> densities;
  AffinePlane plane;
  QuadratureRule rule;
  int grid_res = kDefaultGridRes;
  std::vector<std::string> checks;
  std::map<std::string, double> tolerances;
  std::vector<Eigen::VectorXd> y_samples;
  std::vector<double> t_samples = {0.0, 0.25, 0.5, 1.0};
  std::vector<Eigen::VectorXd> x_samples;
  std::vector<double> y_range = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  double variation_floor = 0.1;
  double expected_ratio = 1.0;
  std::optional<KPlaneWeight> plane_weight;
  std::optional<BLInstance> bl;
  bool bl_expect_feasible = true;
  std::vector<Eigen::VectorXd> product_normals;
  WedgeProbe wedge_probe;
  int chart_points = 100;

  Scenario() : plane(Subspace(2, Eigen::MatrixXd::Identity(2, 2).leftCols(1))) {}

  const ParametrizedManifold& manifold() const { return manifolds.front(); }
  const SurfaceDensity& density() const { return densities.front(); }
};

namespace detail {

// Strict object view: every key must be consumed by the schema, unknown keys
// are reported with their full path.
class StrictView {
 public:
  StrictView(const nlohmann::json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw SchemaError(path_ + ": expected an object");
  }

  StrictView(const StrictView&) = delete;
  StrictView& operator=(const StrictView&) = delete;

  const std::string& path() const { return path_; }
  bool has(const std::string& key) const { return j_.contains(key); }

  const nlohmann::json* get(const std::string& key) {
    used_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &(*it);
  }

  double number(const std::string& key, double def) {
    const nlohmann::json* v = get(key);
    if (!v) return def;
    if (!v->is_number()) throw SchemaError(path_ + "." + key + ": expected a number");
    return v->get<double>();
  }

  int integer(const std::string& key, int def) {
    const nlohmann::json* v = get(key);
    if (!v) return def;
    if (!v->is_number_integer()) throw SchemaError(path_ + "." + key + ": expected an integer");
    return v->get<int>();
  }

  bool boolean(const std::string& key, bool def) {
    const nlohmann::json* v = get(key);
    if (!v) return def;
    if (!v->is_boolean()) throw SchemaError(path_ + "." + key + ": expected a boolean");
    return v->get<bool>();
  }

  std::string str(const std::string& key, const std::string& def) {
    const nlohmann::json* v = get(key);
    if (!v) return def;
    if (!v->is_string()) throw SchemaError(path_ + "." + key + ": expected a string");
    return v->get<std::string>();
  }

  std::array<double, 2> range(const std::string& key, std::array<double, 2> def) {
    const nlohmann::json* v = get(key);
    if (!v) return def;
    std::vector<double> vals = as_numbers(*v, path_ + "." + key);
    if (vals.size() != 2)
      throw SchemaError(path_ + "." + key + ": expected a [lo, hi] pair");
    return {vals[0], vals[1]};
  }

  Eigen::VectorXd vector(const std::string& key, const Eigen::VectorXd& def) {
    const nlohmann::json* v = get(key);
    if (!v) return def;
    return as_vector(*v, path_ + "." + key);
  }

  std::vector<double> numbers(const std::string& key, std::vector<double> def) {
    const nlohmann::json* v = get(key);
    if (!v) return def;
    return as_numbers(*v, path_ + "." + key);
  }

  // Unknown keys are rejected rather than ignored: a typo in a tolerance or
  // quadrature field must never silently run with defaults.
  void finish() const {
    for (const auto& item : j_.items())
      if (!used_.count(item.key()))
        throw SchemaError(path_ + ": unknown key '" + item.key() + "'");
  }

  static std::vector<double> as_numbers(const nlohmann::json& v, const std::string& path) {
    if (!v.is_array()) throw SchemaError(path + ": expected an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) {
      if (!e.is_number()) throw SchemaError(path + ": expected an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  static Eigen::VectorXd as_vector(const nlohmann::json& v, const std::string& path) {
    std::vector<double> vals = as_numbers(v, path);
    if (vals.empty()) throw SchemaError(path + ": vector cannot be empty");
    Eigen::VectorXd out(static_cast<int>(vals.size()));
    for (std::size_t i = 0; i < vals.size(); ++i) out[static_cast<int>(i)] = vals[i];
    return out;
  }

  static std::vector<Eigen::VectorXd> as_vector_list(const nlohmann::json& v,
                                                     const std::string& path) {
    if (!v.is_array()) throw SchemaError(path + ": expected an array of vectors");
    std::vector<Eigen::VectorXd> out;
    for (std::size_t i = 0; i < v.size(); ++i)
      out.push_back(as_vector(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
  }

 private:
  const nlohmann::json& j_;
  std::string path_;
  std::set<std::string> used_;
};

inline Eigen::Vector2d as_vector2(StrictView& view, const std::string& key,
                                  Eigen::Vector2d def) {
  Eigen::VectorXd v = view.vector(key, def);
  if (v.size() != 2) throw SchemaError(view.path() + "." + key + ": expected two components");
  return v;
}

inline ParametrizedManifold parse_manifold(const nlohmann::json& j, const std::string& path) {
  StrictView view(j, path);
  std::string family = view.str("family", "parabola");

  if (family == "segment") {
    Eigen::VectorXd origin = view.vector("origin", Eigen::Vector2d(0, 0));
    Eigen::VectorXd direction = view.vector("direction", Eigen::Vector2d(1, 0));
    auto domain = view.range("domain", {-0.5, 0.5});
    view.finish();
    return families::segment(origin, direction, domain);
  }
  if (family == "parabola") {
    double coeff = view.number("coeff", 1.0);
    auto domain = view.range("domain", {-1.0, 1.0});
    double rotate = view.number("rotate", 0.0);
    Eigen::Vector2d translate = as_vector2(view, "translate", Eigen::Vector2d::Zero());
    view.finish();
    return families::parabola(coeff, domain, rotate, translate);
  }
  if (family == "circle_arc") {
    double radius = view.number("radius", 1.0);
    Eigen::Vector2d center = as_vector2(view, "center", Eigen::Vector2d::Zero());
    auto theta = view.range("theta_range", {0.0, M_PI});
    view.finish();
    return families::circle_arc(radius, center, theta);
  }
  if (family == "helix") {
    double pitch = view.number("pitch", 1.0 / (2.0 * M_PI));
    double radius = view.number("radius", 1.0);
    auto domain = view.range("domain", {0.0, 4.0 * M_PI});
    double ribbon = view.number("ribbon_width", 0.0);
    view.finish();
    return families::helix(pitch, radius, domain, ribbon);
  }
  if (family == "paraboloid") {
    int ambient = view.integer("ambient", 3);
    Box domain;
    if (const nlohmann::json* d = view.get("domain")) {
      if (!d->is_array()) throw SchemaError(path + ".domain: expected an array of [lo, hi] pairs");
      for (std::size_t i = 0; i < d->size(); ++i) {
        auto vals = StrictView::as_numbers((*d)[i], path + ".domain[" + std::to_string(i) + "]");
        if (vals.size() != 2)
          throw SchemaError(path + ".domain[" + std::to_string(i) + "]: expected [lo, hi]");
        domain.axes.push_back({vals[0], vals[1]});
      }
    }
    view.finish();
    return families::paraboloid(ambient, domain);
  }
  if (family == "graph_curve") {
    std::vector<double> coeffs = view.numbers("coeffs", {0.0, 0.0, 0.0, 1.0});
    auto domain = view.range("domain", {-1.0, 1.0});
    double rotate = view.number("rotate", 0.0);
    Eigen::Vector2d translate = as_vector2(view, "translate", Eigen::Vector2d::Zero());
    view.finish();
    return families::graph_curve(coeffs, domain, rotate, translate);
  }
  if (family == "two_caps") {
    double halfwidth = view.number("halfwidth", 0.5);
    Eigen::Vector2d separation = as_vector2(view, "separation", Eigen::Vector2d(0, 1));
    double rotate = view.number("rotate", 0.0);
    Eigen::Vector2d translate = as_vector2(view, "translate", Eigen::Vector2d::Zero());
    view.finish();
    return families::two_caps(halfwidth, separation, rotate, translate);
  }
  throw ValidationError(path + ".family: unknown manifold family '" + family + "'");
}

inline SurfaceDensity parse_density(const nlohmann::json& j, const std::string& path) {
  StrictView view(j, path);
  std::string family = view.str("family", "smooth_bump");
  double amplitude = view.number("amplitude", 1.0);
  double gamma = view.number("gamma", 8.0);
  view.finish();
  return SurfaceDensity(family, amplitude, gamma);
}

inline AffinePlane parse_plane(const nlohmann::json& j, const std::string& path, int ambient,
                               int k) {
  StrictView view(j, path);
  int forms = (view.has("preset") ? 1 : 0) + (view.has("angle") ? 1 : 0) +
              (view.has("basis") ? 1 : 0);
  if (forms > 1)
    throw SchemaError(path + ": give exactly one of preset, angle, basis");

  Eigen::VectorXd offset = view.vector("offset", Eigen::VectorXd::Zero(ambient));
  if (offset.size() != ambient)
    throw ValidationError(path + ".offset: expected " + std::to_string(ambient) + " components");

  if (view.has("angle")) {
    double angle = view.number("angle", 0.0);
    view.finish();
    if (ambient != 2 || k != 1)
      throw ValidationError(path + ".angle: angle form needs a line in the plane");
    Eigen::MatrixXd b(2, 1);
    b << std::cos(angle), std::sin(angle);
    return AffinePlane(Subspace(2, b), offset);
  }
  if (view.has("basis")) {
    const nlohmann::json* b = view.get("basis");
    auto vecs = StrictView::as_vector_list(*b, path + ".basis");
    view.finish();
    if (static_cast<int>(vecs.size()) != k)
      throw ValidationError(path + ".basis: expected " + std::to_string(k) + " spanning vectors");
    for (const auto& v : vecs)
      if (v.size() != ambient)
        throw ValidationError(path + ".basis: vectors must have " + std::to_string(ambient) +
                              " components");
    return AffinePlane(orthonormalize(vecs), offset);
  }

  std::string preset = view.str("preset", "x_axis");
  view.finish();
  if (preset == "x_axis") {
    Eigen::MatrixXd b = Eigen::MatrixXd::Identity(ambient, ambient).leftCols(k);
    return AffinePlane(Subspace(ambient, b), offset);
  }
  if (preset == "diagonal") {
    if (k != 1) throw ValidationError(path + ".preset: diagonal preset is a line");
    Eigen::MatrixXd b = Eigen::MatrixXd::Constant(ambient, 1, 1.0);
    return AffinePlane(Subspace(ambient, b), offset);
  }
  throw ValidationError(path + ".preset: unknown preset '" + preset + "'");
}

inline KPlaneWeight parse_plane_weight(const nlohmann::json& j, const std::string& path,
                                       int ambient, int k) {
  StrictView view(j, path);
  const nlohmann::json* atoms = view.get("atoms");
  if (!atoms || !atoms->is_array() || atoms->empty())
    throw SchemaError(path + ".atoms: expected a non-empty array");
  KPlaneWeight weight;
  for (std::size_t i = 0; i < atoms->size(); ++i) {
    std::string apath = path + ".atoms[" + std::to_string(i) + "]";
    StrictView aview((*atoms)[i], apath);
    double w = aview.number("weight", 1.0);
    // reuse the plane forms for the atom geometry
    nlohmann::json plane_part = (*atoms)[i];
    plane_part.erase("weight");
    (void)aview.get("preset");
    (void)aview.get("angle");
    (void)aview.get("basis");
    (void)aview.get("offset");
    aview.finish();
    weight.atoms.push_back({parse_plane(plane_part, apath, ambient, k), w});
  }
  view.finish();
  weight.validate(ambient, k);
  return weight;
}

inline BLInstance parse_bl(const nlohmann::json& j, const std::string& path, bool& expect) {
  StrictView view(j, path);
  BLInstance inst;
  inst.n = view.integer("n", 2);
  const nlohmann::json* vecs = view.get("vectors");
  if (!vecs) throw SchemaError(path + ".vectors: required");
  for (const auto& v : StrictView::as_vector_list(*vecs, path + ".vectors"))
    inst.vectors.push_back(v);
  std::vector<double> p = view.numbers("p", {});
  if (p.empty()) throw SchemaError(path + ".p: required");
  inst.p = Eigen::Map<Eigen::VectorXd>(p.data(), static_cast<int>(p.size()));
  expect = view.boolean("expect_feasible", true);
  view.finish();
  try {
    inst.validate();
  } catch (const Error& e) {
    throw ValidationError(path + ": " + e.what());
  }
  return inst;
}

inline WedgeProbe parse_wedge_probe(const nlohmann::json& j, const std::string& path) {
  StrictView view(j, path);
  WedgeProbe probe;
  probe.pairs = view.integer("pairs", probe.pairs);
  std::vector<double> dims = view.numbers("dims", {2, 3});
  probe.dims.clear();
  for (double d : dims) probe.dims.push_back(static_cast<int>(d));
  probe.min_wedge = view.number("min_wedge", probe.min_wedge);
  probe.seed = static_cast<std::uint64_t>(view.integer("seed", 12345));
  probe.oracle_order = view.integer("oracle_order", probe.oracle_order);
  view.finish();
  if (probe.pairs < 1) throw ValidationError(path + ".pairs: must be positive");
  for (int d : probe.dims)
    if (d < 2 || d > 6) throw ValidationError(path + ".dims: supported range is 2..6");
  return probe;
}

}  // namespace detail

inline Scenario load_scenario_json(const nlohmann::json& doc, const std::string& name_hint) {
  using detail::StrictView;
  if (!doc.is_object()) throw SchemaError("scenario: expected a JSON object at top level");
  StrictView view(doc, "scenario");

  Scenario s;
  int schema_version = view.integer("schema_version", 1);
  if (schema_version != 1)
    throw ValidationError("scenario.schema_version: this tool reads version 1");
  s.name = view.str("name", name_hint);

  if (view.has("manifold") && view.has("manifolds"))
    throw SchemaError("scenario: give either manifold or manifolds, not both");
  if (const nlohmann::json* m = view.get("manifold")) {
    s.manifolds.push_back(detail::parse_manifold(*m, "scenario.manifold"));
  } else if (const nlohmann::json* ms = view.get("manifolds")) {
    if (!ms->is_array() || ms->empty())
      throw SchemaError("scenario.manifolds: expected a non-empty array");
    for (std::size_t i = 0; i < ms->size(); ++i)
      s.manifolds.push_back(
          detail::parse_manifold((*ms)[i], "scenario.manifolds[" + std::to_string(i) + "]"));
  } else {
    s.manifolds.push_back(families::parabola());
  }

  if (view.has("density") && view.has("densities"))
    throw SchemaError("scenario: give either density or densities, not both");
  if (const nlohmann::json* d = view.get("density")) {
    s.densities.push_back(detail::parse_density(*d, "scenario.density"));
  } else if (const nlohmann::json* ds = view.get("densities")) {
    if (!ds->is_array() || ds->empty())
      throw SchemaError("scenario.densities: expected a non-empty array");
    for (std::size_t i = 0; i < ds->size(); ++i)
      s.densities.push_back(
          detail::parse_density((*ds)[i], "scenario.densities[" + std::to_string(i) + "]"));
  } else {
    s.densities.emplace_back("smooth_bump");
  }
  if (s.densities.size() == 1 && s.manifolds.size() > 1)
    s.densities.resize(s.manifolds.size(), s.densities.front());
  if (s.densities.size() != s.manifolds.size())
    throw ValidationError("scenario: need one density per manifold");

  int n = s.manifold().ambient_dim();
  int k = s.manifold().param_dim();
  if (const nlohmann::json* p = view.get("plane"))
    s.plane = detail::parse_plane(*p, "scenario.plane", n, k);
  else
    s.plane = AffinePlane(Subspace(n, Eigen::MatrixXd::Identity(n, n).leftCols(k)));

  if (const nlohmann::json* q = view.get("quadrature")) {
    StrictView qview(*q, "scenario.quadrature");
    s.rule.order = qview.integer("order", s.rule.order);
    s.rule.plane_trunc_radius = qview.number("plane_trunc_radius", s.rule.plane_trunc_radius);
    s.rule.plane_points_per_axis =
        qview.integer("plane_points_per_axis", s.rule.plane_points_per_axis);
    s.rule.window = qview.str("window", s.rule.window);
    qview.finish();
    try {
      s.rule.validate();
    } catch (const Error& e) {
      throw ValidationError("scenario.quadrature: " + std::string(e.what()));
    }
  }
  s.grid_res = view.integer("grid_res", s.grid_res);
  if (s.grid_res < 2) throw ValidationError("scenario.grid_res: must be at least 2");

  if (const nlohmann::json* c = view.get("checks")) {
    if (!c->is_array()) throw SchemaError("scenario.checks: expected an array of names");
    for (std::size_t i = 0; i < c->size(); ++i) {
      if (!(*c)[i].is_string())
        throw SchemaError("scenario.checks[" + std::to_string(i) + "]: expected a name");
      std::string name = (*c)[i].get<std::string>();
      const auto& reg = registered_checks();
      if (std::find(reg.begin(), reg.end(), name) == reg.end())
        throw ValidationError("scenario.checks[" + std::to_string(i) + "]: '" + name +
                              "' is not a registered check");
      s.checks.push_back(name);
    }
  } else {
    s.checks = {"check_transversality_T", "check_transversality_GT", "verify_identity"};
  }

  if (const nlohmann::json* t = view.get("tolerances")) {
    StrictView tview(*t, "scenario.tolerances");
    auto known = registered_checks();
    for (const auto& extra : tolerance_only_names()) known.push_back(extra);
    for (const auto& name : known) {
      if (tview.has(name)) s.tolerances[name] = tview.number(name, 0.0);
    }
    tview.finish();
  }

  if (const nlohmann::json* y = view.get("y_samples")) {
    s.y_samples = StrictView::as_vector_list(*y, "scenario.y_samples");
    for (const auto& v : s.y_samples)
      if (v.size() != n)
        throw ValidationError("scenario.y_samples: offsets must have " + std::to_string(n) +
                              " components");
  } else {
    Eigen::VectorXd perp = s.plane.direction().orthogonal_complement().basis().col(0);
    for (double c : {0.0, 0.5, -0.5, 1.0, -1.0}) s.y_samples.push_back(c * perp);
  }

  s.t_samples = view.numbers("t_samples", s.t_samples);
  if (const nlohmann::json* x = view.get("x_samples")) {
    s.x_samples = StrictView::as_vector_list(*x, "scenario.x_samples");
  } else {
    s.x_samples = {Eigen::Vector2d(0.25, 0.25), Eigen::Vector2d(1.0, 0.5),
                   Eigen::Vector2d(-0.5, 1.0)};
  }
  s.y_range = view.numbers("y_range", s.y_range);
  s.variation_floor = view.number("variation_floor", s.variation_floor);
  s.expected_ratio = view.number("expected_ratio", s.expected_ratio);

  if (const nlohmann::json* w = view.get("plane_weight"))
    s.plane_weight = detail::parse_plane_weight(*w, "scenario.plane_weight", n, k);
  if (const nlohmann::json* b = view.get("bl"))
    s.bl = detail::parse_bl(*b, "scenario.bl", s.bl_expect_feasible);
  if (const nlohmann::json* pn = view.get("product_normals"))
    s.product_normals = StrictView::as_vector_list(*pn, "scenario.product_normals");
  if (const nlohmann::json* wp = view.get("wedge_probe"))
    s.wedge_probe = detail::parse_wedge_probe(*wp, "scenario.wedge_probe");
  s.chart_points = view.integer("chart_points", s.chart_points);
  if (s.chart_points < 2) throw ValidationError("scenario.chart_points: must be at least 2");

  view.finish();

  // Checks that need blocks beyond the defaults must find them in the file.
  for (const auto& name : s.checks) {
    if (name == "bl_feasibility" && !s.bl)
      throw ValidationError("scenario: bl_feasibility needs a bl block");
    if (name == "product_wedge_factor" && s.product_normals.empty())
      throw ValidationError("scenario: product_wedge_factor needs product_normals");
    if (name == "weighted_identity_check" && !s.plane_weight)
      throw ValidationError("scenario: weighted_identity_check needs a plane_weight block");
    if ((name == "convolution_identity_check" || name == "multilinear_l2_ratio") &&
        s.manifolds.size() != 2)
      throw ValidationError("scenario: " + name + " needs a manifolds list of two entries");
  }
  return s;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("scenario file '" + path + "': " + e.what());
  }
  std::string stem = path;
  if (auto slash = stem.find_last_of('/'); slash != std::string::npos) stem = stem.substr(slash + 1);
  if (auto dot = stem.find_last_of('.'); dot != std::string::npos) stem = stem.substr(0, dot);
  return load_scenario_json(doc, stem);
}

// Canonical runnable scenario for a family, with the defaults written out.
// Loading the emitted text reproduces the same scenario byte for byte.
inline std::string emit_example(const std::string& family) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = 1;
  doc["name"] = family + "_example";

  nlohmann::ordered_json m;
  m["family"] = family;
  nlohmann::ordered_json plane;
  std::vector<std::string> checks = {"check_transversality_T", "check_transversality_GT",
                                     "verify_identity"};

  if (family == "segment") {
    m["origin"] = {0.0, 0.0};
    m["direction"] = {1.0, 0.0};
    m["domain"] = {-0.5, 0.5};
    plane["preset"] = "x_axis";
  } else if (family == "parabola") {
    m["coeff"] = 1.0;
    m["domain"] = {-1.0, 1.0};
    m["rotate"] = 0.0;
    m["translate"] = {0.0, 0.0};
    plane["preset"] = "x_axis";
  } else if (family == "circle_arc") {
    m["radius"] = 1.0;
    m["center"] = {0.0, 0.0};
    m["theta_range"] = {M_PI / 4.0, 3.0 * M_PI / 4.0};
    plane["preset"] = "x_axis";
  } else if (family == "helix") {
    m["pitch"] = 1.0 / (2.0 * M_PI);
    m["radius"] = 1.0;
    m["domain"] = {0.0, 4.0 * M_PI};
    m["ribbon_width"] = 0.0;
    plane["basis"] = {{0.0, 0.0, 1.0}};
  } else if (family == "paraboloid") {
    m["ambient"] = 2;
    m["domain"] = {{-1.0, 1.0}};
    plane["preset"] = "x_axis";
    checks.push_back("schrodinger_energy_scan");
  } else if (family == "graph_curve") {
    m["coeffs"] = {0.0, 0.25, 0.0, 0.5};
    m["domain"] = {-1.0, 1.0};
    m["rotate"] = 0.0;
    m["translate"] = {0.0, 0.0};
    plane["preset"] = "x_axis";
  } else if (family == "two_caps") {
    m["halfwidth"] = 0.5;
    m["separation"] = {0.0, 1.0};
    m["rotate"] = 0.0;
    m["translate"] = {0.0, 0.0};
    plane["preset"] = "x_axis";
    checks = {"check_transversality_T", "gt_violation_scan"};
  } else {
    throw ValidationError("unknown manifold family '" + family + "'");
  }

  doc["manifold"] = m;
  nlohmann::ordered_json density;
  density["family"] = "smooth_bump";
  density["amplitude"] = 1.0;
  density["gamma"] = 8.0;
  doc["density"] = density;
  doc["plane"] = plane;

  // enough oscillation budget for the default truncation radius; the helix
  // image is wider than the planar families
  QuadratureRule rule;
  rule.order = family == "helix" ? 448 : 320;
  nlohmann::ordered_json q;
  q["order"] = rule.order;
  q["plane_trunc_radius"] = rule.plane_trunc_radius;
  q["plane_points_per_axis"] = rule.plane_points_per_axis;
  q["window"] = rule.window;
  doc["quadrature"] = q;
  doc["grid_res"] = kDefaultGridRes;
  doc["checks"] = checks;
  if (family == "two_caps") {
    doc["y_range"] = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
    doc["variation_floor"] = 0.5;
  }
  return doc.dump(2) + "\n";
}

inline const std::vector<std::string>& scenario_families() {
  static const std::vector<std::string> names = {
      "segment", "parabola", "circle_arc", "helix", "paraboloid", "graph_curve", "two_caps"};
  return names;
}

}  // namespace kplane

#endif
