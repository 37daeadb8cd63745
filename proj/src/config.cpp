#include "cdgreen/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "cdgreen/output.hpp"
#include "toml.hpp"

namespace cdg::config {

namespace {

// Reads keys of one TOML table and remembers which were consumed so that
// leftovers can be reported.
class Reader {
 public:
  Reader(const toml::table* t, std::string path) : t_(t), path_(std::move(path)) {}

  bool has(const std::string& key) const { return t_ && t_->contains(key); }

  void number(const std::string& key, double& out) {
    if (const toml::node* n = take(key)) out = as_number(*n, key);
  }
  void number(const std::string& key, std::optional<double>& out) {
    if (const toml::node* n = take(key)) out = as_number(*n, key);
  }
  void integer(const std::string& key, int& out) {
    if (const toml::node* n = take(key)) {
      const auto v = n->value<std::int64_t>();
      if (!n->is_integer() || !v || *v < INT32_MIN || *v > INT32_MAX) fail(key, "expected an integer");
      out = static_cast<int>(*v);
    }
  }
  void integer(const std::string& key, std::uint64_t& out) {
    if (const toml::node* n = take(key)) {
      const auto v = n->value<std::int64_t>();
      if (!n->is_integer() || !v || *v < 0) fail(key, "expected a non-negative integer");
      out = static_cast<std::uint64_t>(*v);
    }
  }
  void boolean(const std::string& key, bool& out) {
    if (const toml::node* n = take(key)) {
      if (!n->is_boolean()) fail(key, "expected true or false");
      out = *n->value<bool>();
    }
  }
  void string(const std::string& key, std::string& out) {
    if (const toml::node* n = take(key)) {
      if (!n->is_string()) fail(key, "expected a string");
      out = *n->value<std::string>();
    }
  }
  void numbers(const std::string& key, std::vector<double>& out) {
    if (const toml::node* n = take(key)) {
      const toml::array* arr = n->as_array();
      if (!arr) fail(key, "expected an array of numbers");
      out.clear();
      for (const toml::node& e : *arr) out.push_back(as_number(e, key));
    }
  }
  template <std::size_t N>
  void fixed(const std::string& key, std::array<double, N>& out) {
    std::vector<double> v;
    if (!has(key)) return;
    numbers(key, v);
    if (v.size() != N) fail(key, "expected " + std::to_string(N) + " numbers");
    std::copy(v.begin(), v.end(), out.begin());
  }
  void point(const std::string& key, Point& out) {
    std::array<double, 2> v{out.x, out.y};
    fixed(key, v);
    out = {v[0], v[1]};
  }
  template <class E, class F>
  void enumeration(const std::string& key, E& out, F from_string) {
    std::string name;
    if (!has(key)) return;
    string(key, name);
    try {
      out = from_string(name);
    } catch (const std::invalid_argument& e) {
      fail(key, e.what());
    }
  }
  void kinds(const std::string& key, std::vector<DerivKind>& out) {
    if (const toml::node* n = take(key)) {
      const toml::array* arr = n->as_array();
      if (!arr) fail(key, "expected an array of derivative kinds");
      out.clear();
      for (const toml::node& e : *arr) {
        const auto s = e.value<std::string>();
        if (!s) fail(key, "expected strings");
        try {
          out.push_back(deriv_kind_from_string(*s));
        } catch (const std::invalid_argument& err) {
          fail(key, err.what());
        }
      }
    }
  }
  const toml::table* table(const std::string& key) {
    if (const toml::node* n = take(key)) {
      if (!n->is_table()) fail(key, "expected a table");
      return n->as_table();
    }
    return nullptr;
  }
  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    if (!t_) return;
    for (const auto& [k, v] : *t_) {
      const std::string key(k.str());
      if (!used_.count(key)) throw ConfigError("unknown key '" + child(key) + "'");
    }
  }

  [[noreturn]] void fail(const std::string& key, const std::string& why) const {
    throw ConfigError("'" + child(key) + "': " + why);
  }

 private:
  const toml::node* take(const std::string& key) {
    if (!t_) return nullptr;
    used_.insert(key);
    return t_->get(key);
  }
  double as_number(const toml::node& n, const std::string& key) const {
    if (n.is_floating_point()) return *n.value<double>();
    if (n.is_integer()) return static_cast<double>(*n.value<std::int64_t>());
    fail(key, "expected a number");
  }

  const toml::table* t_;
  std::string path_;
  std::set<std::string> used_;
};

void read_study(Reader& r, StudyConfig& s) {
  r.string("integrand", s.integrand);
  r.enumeration("variant", s.variant, image_variant_from_string);
  r.kinds("kinds", s.kinds);
  r.numbers("epsilon", s.eps);
  r.numbers("rho", s.rho);
  r.boolean("rho_relative", s.rho_relative);
  r.point("singular", s.singular);
  r.string("region", s.region);
  r.fixed("window", s.window);
  r.enumeration("model", s.model, scaling::model_from_string);
  r.number("expect_slope", s.expect_slope);
  r.number("slope_tol", s.slope_tol);
  r.number("max_spread", s.max_spread);
  r.number("max_rel_residual", s.max_rel_residual);
  r.number("max_value", s.max_value);
  r.finish();
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

bool in_unit(Point p) { return p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0; }

bool valid_eps(double e) { return std::isfinite(e) && e > 0.0 && e <= 1.0; }

void validate_study(const StudyConfig& s, const std::string& name) {
  const std::string p = name + ": ";
  require(s.integrand == "image" || s.integrand == "defect" || s.integrand == "fundamental",
          p + "integrand must be image, defect or fundamental");
  require(!s.eps.empty(), p + "epsilon list is empty");
  for (double e : s.eps) require(valid_eps(e), p + "epsilon values must lie in (0, 1]");
  require(!s.rho.empty(), p + "rho list is empty");
  for (double r : s.rho) require(std::isfinite(r) && r >= 0.0, p + "rho values must be >= 0");
  require(!s.kinds.empty(), p + "kinds list is empty");
  require(in_unit(s.singular), p + "singular point must lie in the closed unit square");
  const bool needs_rho = s.region == "square_minus_ball" || s.region == "ball";
  require(needs_rho || s.region == "unit_square" || s.region == "strip_window",
          p + "region must be unit_square, square_minus_ball, ball or strip_window");
  if (needs_rho) {
    for (double r : s.rho) require(r > 0.0, p + "region '" + s.region + "' needs rho > 0");
  }
  if (s.region == "strip_window") {
    require(s.window[0] >= 0.0 && s.window[1] <= 1.0 && s.window[0] < s.window[1] &&
                s.window[2] < s.window[3],
            p + "window must be [xi0, xi1, eta0, eta1] with 0 <= xi0 < xi1 <= 1, eta0 < eta1");
  }
  require(s.integrand != "fundamental" || s.kinds.size() == 1,
          p + "the fundamental integrand takes exactly one kind");
  require(s.slope_tol > 0.0, p + "slope_tol must be positive");
}

}  // namespace

CoefficientField CoefficientConfig::build() const {
  try {
    return CoefficientField::preset(preset, a, b);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("coefficients: ") + e.what());
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("coefficients: ") + e.what());
  }
}

nlohmann::json RunConfig::to_json() const {
  using nlohmann::json;
  auto pt = [](Point p) { return json::array({p.x, p.y}); };
  auto kinds_json = [](const std::vector<DerivKind>& ks) {
    json a = json::array();
    for (DerivKind k : ks) a.push_back(std::string(cdg::to_string(k)));
    return a;
  };
  auto study = [&](const StudyConfig& s) {
    json j{{"integrand", s.integrand},
           {"variant", std::string(cdg::to_string(s.variant))},
           {"kinds", kinds_json(s.kinds)},
           {"epsilon", s.eps},
           {"rho", s.rho},
           {"rho_relative", s.rho_relative},
           {"singular", pt(s.singular)},
           {"region", s.region},
           {"window", s.window},
           {"model", std::string(scaling::to_string(s.model))},
           {"slope_tol", s.slope_tol}};
    if (s.expect_slope) j["expect_slope"] = *s.expect_slope;
    if (s.max_spread) j["max_spread"] = *s.max_spread;
    if (s.max_rel_residual) j["max_rel_residual"] = *s.max_rel_residual;
    if (s.max_value) j["max_value"] = *s.max_value;
    return j;
  };
  // threads and out do not change results and stay out of the hash
  return json{
      {"command", command},
      {"seed", seed},
      {"tol", tol},
      {"format", format},
      {"svg", svg},
      {"coefficients", {{"preset", coefficients.preset}, {"a", coefficients.a}, {"b", coefficients.b}}},
      {"eval",
       {{"variant", std::string(cdg::to_string(eval.variant))},
        {"kind", std::string(cdg::to_string(eval.kind))},
        {"epsilon", eval.eps},
        {"singular", pt(eval.singular)},
        {"grid", eval.grid},
        {"xi_range", eval.xi_range},
        {"eta_range", eval.eta_range},
        {"log_scale", eval.log_scale}}},
      {"norms", study(norms)},
      {"scaling", study(scaling)},
      {"fd",
       {{"epsilon", fd.eps},
        {"N", fd.n},
        {"mesh", {{"kind", std::string(fd::to_string(fd.mesh))}}},
        {"bc", std::string(fd::to_string(fd.bc))},
        {"probe", pt(fd.probe)},
        {"representation_tol", fd.representation_tol},
        {"mass_slack", fd.mass_slack},
        {"compare_image", fd.compare_image},
        {"compare_tol", fd.compare_tol}}},
      {"residual",
       {{"variant", std::string(cdg::to_string(residual.variant))},
        {"epsilon", residual.eps},
        {"singular", pt(residual.singular)},
        {"samples", residual.samples},
        {"pde_tol", residual.pde_tol},
        {"defect_tol", residual.defect_tol}}},
      {"selfcheck", {{"only", selfcheck.only}}},
  };
}

std::string RunConfig::hash() const { return io::hex64(io::fnv1a64(to_json().dump())); }

void RunConfig::validate() const {
  require(!out.empty(), "out must not be empty");
  require(threads >= 0, "threads must be >= 0");
  require(std::isfinite(tol) && tol > 0.0 && tol < 1.0, "tol must lie in (0, 1)");
  require(format == "csv" || format == "json", "format must be csv or json");
  (void)coefficients.build();

  require(valid_eps(eval.eps), "eval: epsilon must lie in (0, 1]");
  require(in_unit(eval.singular), "eval: singular point must lie in the closed unit square");
  require(eval.grid >= 1 && eval.grid <= 4097, "eval: grid must lie in [1, 4097]");
  require(eval.xi_range[0] <= eval.xi_range[1] && eval.eta_range[0] <= eval.eta_range[1],
          "eval: ranges must be increasing");

  validate_study(norms, "norms");
  validate_study(scaling, "scaling");

  require(!fd.eps.empty(), "fd: epsilon list is empty");
  for (double e : fd.eps) require(valid_eps(e), "fd: epsilon values must lie in (0, 1]");
  require(fd.n >= 4 && fd.n <= 512, "fd: N must lie in [4, 512]");
  require(fd.mesh != fd::MeshKind::shishkin || fd.n % 4 == 0, "fd: Shishkin meshes need N % 4 == 0");
  require(fd.probe.x > 0.0 && fd.probe.x < 1.0 && fd.probe.y >= 0.0 && fd.probe.y <= 1.0,
          "fd: probe must lie in (0,1) x [0,1]");
  require(fd.representation_tol > 0.0 && fd.mass_slack >= 0.0 && fd.compare_tol > 0.0,
          "fd: tolerances must be positive");

  require(valid_eps(residual.eps), "residual: epsilon must lie in (0, 1]");
  require(in_unit(residual.singular), "residual: singular point must lie in the closed unit square");
  require(residual.samples >= 1, "residual: samples must be >= 1");
  require(is_bar(residual.variant), "residual: the defect is defined for bar variants only");
  for (int id : selfcheck.only) require(id >= 1 && id <= 15, "selfcheck: ids must lie in [1, 15]");
}

RunConfig parse(std::string_view text, const std::string& source) {
  toml::table root;
  try {
    root = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << source << ":" << e.source().begin.line << ":" << e.source().begin.column << ": "
        << e.description();
    throw ConfigError(msg.str());
  }

  RunConfig c;
  Reader top(&root, "");
  top.string("command", c.command);
  top.string("out", c.out);
  top.integer("seed", c.seed);
  top.integer("threads", c.threads);
  top.number("tol", c.tol);
  top.string("format", c.format);
  top.boolean("svg", c.svg);

  if (top.has("coefficients") && root.get("coefficients")->is_string()) {
    top.string("coefficients", c.coefficients.preset);
  } else {
    Reader r(top.table("coefficients"), "coefficients");
    r.string("preset", c.coefficients.preset);
    r.number("a", c.coefficients.a);
    r.number("b", c.coefficients.b);
    r.finish();
  }
  {
    Reader r(top.table("eval"), "eval");
    EvalConfig& e = c.eval;
    r.enumeration("variant", e.variant, image_variant_from_string);
    r.enumeration("kind", e.kind, deriv_kind_from_string);
    r.number("epsilon", e.eps);
    r.point("singular", e.singular);
    r.integer("grid", e.grid);
    r.fixed("xi_range", e.xi_range);
    r.fixed("eta_range", e.eta_range);
    r.boolean("log_scale", e.log_scale);
    r.finish();
  }
  {
    Reader r(top.table("norms"), "norms");
    read_study(r, c.norms);
  }
  {
    Reader r(top.table("scaling"), "scaling");
    read_study(r, c.scaling);
  }
  {
    Reader r(top.table("fd"), "fd");
    FdConfig& f = c.fd;
    r.numbers("epsilon", f.eps);
    r.integer("N", f.n);
    {
      Reader m(r.table("mesh"), r.child("mesh"));
      m.enumeration("kind", f.mesh, fd::mesh_kind_from_string);
      m.finish();
    }
    r.enumeration("bc", f.bc, fd::boundary_condition_from_string);
    r.point("probe", f.probe);
    r.number("representation_tol", f.representation_tol);
    r.number("mass_slack", f.mass_slack);
    r.boolean("compare_image", f.compare_image);
    r.number("compare_tol", f.compare_tol);
    r.finish();
  }
  {
    Reader r(top.table("residual"), "residual");
    ResidualConfig& s = c.residual;
    r.enumeration("variant", s.variant, image_variant_from_string);
    r.number("epsilon", s.eps);
    r.point("singular", s.singular);
    r.integer("samples", s.samples);
    r.number("pde_tol", s.pde_tol);
    r.number("defect_tol", s.defect_tol);
    r.finish();
  }
  {
    Reader r(top.table("selfcheck"), "selfcheck");
    std::vector<double> ids;
    r.numbers("only", ids);
    for (double v : ids) {
      if (v != std::floor(v)) r.fail("only", "expected integers");
      c.selfcheck.only.push_back(static_cast<int>(v));
    }
    r.finish();
  }
  top.finish();
  c.validate();
  return c;
}

RunConfig load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

}  // namespace cdg::config
