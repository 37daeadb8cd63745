#include "commands.hpp"

#include <omp.h>

#include <cmath>
#include <exception>
#include <filesystem>
#include <memory>
#include <numbers>
#include <random>

#include "cdgreen/checks.hpp"
#include "cdgreen/cutoff.hpp"
#include "cdgreen/fdsolver.hpp"
#include "cdgreen/image_green.hpp"
#include "cdgreen/output.hpp"
#include "cdgreen/quadrature.hpp"
#include "cdgreen/scaling.hpp"

namespace cdg::cli {

namespace fs = std::filesystem;
using config::ConfigError;
using config::RunConfig;
using config::StudyConfig;
using nlohmann::json;

namespace {

// Collects the files of one command under the output directory.
class Sink {
 public:
  explicit Sink(const RunConfig& c) : dir_(c.out), prov_{io::library_version(), c.hash()} {}

  const io::Provenance& prov() const { return prov_; }

  void write(const std::string& name, const std::string& content, Outcome& o) const {
    io::write_file((dir_ / name).string(), content);
    o.files.push_back(name);
  }

 private:
  fs::path dir_;
  io::Provenance prov_;
};

json point_json(Point p) { return json::array({p.x, p.y}); }

std::shared_ptr<const CoefficientField> field_of(const RunConfig& c) {
  return std::make_shared<const CoefficientField>(c.coefficients.build());
}

std::string q_rule(ImageVariant v) {
  return is_bar(v) ? "q = a(x,y)/2 frozen at the singular point" : "q = a(xi,eta)/2 frozen at the field point";
}

double grid_coord(const std::array<double, 2>& range, int i, int n) {
  return n == 1 ? range[0] : range[0] + (range[1] - range[0]) * i / (n - 1.0);
}

quad::Region region_for(const StudyConfig& s, double rho) {
  if (s.region == "square_minus_ball") return quad::Region::square_minus_ball(s.singular, rho);
  if (s.region == "ball") return quad::Region::ball_intersect_square(s.singular, rho);
  if (s.region == "strip_window") {
    return quad::Region::strip_window(s.window[0], s.window[1], s.window[2], s.window[3]);
  }
  return quad::Region::unit_square();
}

quad::Integrand integrand_for(const StudyConfig& s, const std::shared_ptr<const CoefficientField>& field,
                              double eps) {
  if (s.integrand == "fundamental") {
    return quad::fundamental_integrand(FrozenParams(s.singular, 0.5 * field->a(s.singular), eps), s.kinds[0]);
  }
  const ImageGreenSpec spec(s.variant, field, eps);
  if (s.integrand == "defect") {
    try {
      return quad::defect_integrand(spec, s.singular);
    } catch (const std::domain_error& e) {
      throw ConfigError(std::string("defect integrand: ") + e.what());
    }
  }
  return quad::image_norm_integrand(spec, s.singular, s.kinds);
}

struct StudyRow {
  scaling::Sample sample;
  bool budget_exceeded = false;
};

std::vector<StudyRow> run_study(const RunConfig& c, const StudyConfig& s) {
  const auto field = field_of(c);
  quad::Options qo;
  qo.tol = c.tol;
  std::vector<StudyRow> rows;
  for (double eps : s.eps) {
    const quad::Integrand f = integrand_for(s, field, eps);
    for (double r : s.rho) {
      const double rho = s.rho_relative ? r * eps : r;
      StudyRow row;
      quad::NormResult n;
      try {
        n = quad::integrate(f, region_for(s, rho), qo);
      } catch (const quad::BudgetExceeded& e) {
        n = e.best();
        row.budget_exceeded = true;
      }
      row.sample = {eps, rho, n.value, n.abs_error_estimate, n.cells_used};
      rows.push_back(row);
    }
  }
  return rows;
}

io::CsvTable study_table(const std::vector<StudyRow>& rows) {
  io::CsvTable t({"epsilon", "rho", "norm", "err_estimate", "cells"});
  for (const StudyRow& r : rows) {
    t.add_row({r.sample.eps, r.sample.rho, r.sample.value, r.sample.err, static_cast<long long>(r.sample.cells)});
  }
  return t;
}

json study_rows_json(const std::vector<StudyRow>& rows) {
  json a = json::array();
  for (const StudyRow& r : rows) {
    a.push_back({{"epsilon", r.sample.eps},
                 {"rho", r.sample.rho},
                 {"norm", r.sample.value},
                 {"err_estimate", r.sample.err},
                 {"cells", r.sample.cells},
                 {"budget_exceeded", r.budget_exceeded}});
  }
  return a;
}

}  // namespace

RunConfig resolve(const std::optional<std::string>& config_path, const std::string& command,
                  const Overrides& ov) {
  RunConfig c = config_path ? config::load(*config_path) : config::parse("", "<defaults>");
  if (!c.command.empty() && c.command != command) {
    throw ConfigError("config is written for command '" + c.command + "', not '" + command + "'");
  }
  c.command = command;
  if (ov.out) c.out = *ov.out;
  if (ov.threads) c.threads = *ov.threads;
  if (ov.tol) c.tol = *ov.tol;
  if (ov.format) c.format = *ov.format;
  if (ov.svg) c.svg = true;
  if (!ov.only.empty()) c.selfcheck.only = ov.only;
  c.validate();
  return c;
}

Outcome cmd_eval(const RunConfig& c) {
  const config::EvalConfig& e = c.eval;
  const auto field = field_of(c);
  const ImageGreenSpec spec(e.variant, field, e.eps);
  const int n = e.grid;
  std::vector<double> values(static_cast<std::size_t>(n) * n);
  std::vector<std::exception_ptr> row_error(static_cast<std::size_t>(n));

#pragma omp parallel for schedule(dynamic)
  for (int j = 0; j < n; ++j) {
    try {
      const double eta = grid_coord(e.eta_range, j, n);
      for (int i = 0; i < n; ++i) {
        values[static_cast<std::size_t>(j) * n + i] =
            eval_image(spec, e.singular, {grid_coord(e.xi_range, i, n), eta}, e.kind);
      }
    } catch (...) {
      row_error[static_cast<std::size_t>(j)] = std::current_exception();
    }
  }
  for (const auto& err : row_error) {
    if (err) std::rethrow_exception(err);
  }

  const double dx = n > 1 ? (e.xi_range[1] - e.xi_range[0]) / (n - 1.0) : 0.0;
  const double dy = n > 1 ? (e.eta_range[1] - e.eta_range[0]) / (n - 1.0) : 0.0;
  double sum = 0.0, peak = -INFINITY;
  Point at{};
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double v = values[static_cast<std::size_t>(j) * n + i];
      sum += v;
      if (v > peak) {
        peak = v;
        at = {grid_coord(e.xi_range, i, n), grid_coord(e.eta_range, j, n)};
      }
    }
  }

  Outcome o;
  const Sink sink(c);
  if (c.format == "csv") {
    io::CsvTable t({"xi", "eta", "value"});
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        t.add_row({grid_coord(e.xi_range, i, n), grid_coord(e.eta_range, j, n),
                   values[static_cast<std::size_t>(j) * n + i]});
      }
    }
    sink.write("eval.csv", t.render(sink.prov()), o);
  } else {
    json rows = json::array();
    for (int j = 0; j < n; ++j) {
      rows.push_back(std::vector<double>(values.begin() + static_cast<std::ptrdiff_t>(j) * n,
                                         values.begin() + static_cast<std::ptrdiff_t>(j + 1) * n));
    }
    sink.write("eval.json", io::render_json({{"xi_range", e.xi_range}, {"eta_range", e.eta_range}, {"n", n}, {"values", rows}},
                                            sink.prov()),
               o);
  }

  o.details = {{"variant", std::string(to_string(e.variant))},
               {"kind", std::string(to_string(e.kind))},
               {"epsilon", e.eps},
               {"q_rule", q_rule(e.variant)},
               {"singular", point_json(e.singular)},
               {"coefficients", field->name()},
               {"grid", n},
               {"xi_range", e.xi_range},
               {"eta_range", e.eta_range},
               {"max_value", peak},
               {"argmax", point_json(at)},
               {"sum_times_cell_area", sum * dx * dy}};
  sink.write("eval_meta.json", io::render_json(o.details, sink.prov()), o);

  if (c.svg) {
    io::Heatmap map;
    map.nx = map.ny = n;
    map.x0 = e.xi_range[0], map.x1 = e.xi_range[1], map.y0 = e.eta_range[0], map.y1 = e.eta_range[1];
    map.log_scale = e.log_scale;
    map.values = values;
    if (e.kind != DerivKind::value || e.log_scale) {
      for (double& v : map.values) v = std::abs(v);
    }
    char title[160];
    std::snprintf(title, sizeof title, "%s %s%s, eps = %g, source (%.4g, %.4g)", std::string(to_string(e.variant)).c_str(),
                  e.kind == DerivKind::value ? "" : "|", std::string(to_string(e.kind)).c_str(), e.eps,
                  e.singular.x, e.singular.y);
    map.title = title;
    sink.write("eval.svg", io::render_svg_heatmap(map, sink.prov()), o);
  }
  return o;
}

Outcome cmd_norms(const RunConfig& c) {
  const StudyConfig& s = c.norms;
  const std::vector<StudyRow> rows = run_study(c, s);
  Outcome o;
  const Sink sink(c);
  bool budget_ok = true;
  double largest = 0.0;
  for (const StudyRow& r : rows) {
    budget_ok = budget_ok && !r.budget_exceeded;
    largest = std::max(largest, r.sample.value);
  }
  const bool value_ok = !s.max_value || largest <= *s.max_value;
  o.pass = budget_ok && value_ok;
  if (c.format == "csv") {
    sink.write("norms.csv", study_table(rows).render(sink.prov()), o);
  } else {
    sink.write("norms.json", io::render_json({{"rows", study_rows_json(rows)}}, sink.prov()), o);
  }
  o.details = {{"rows", rows.size()}, {"max_norm", largest}, {"within_budget", budget_ok}};
  if (s.max_value) o.details["max_value"] = {{"limit", *s.max_value}, {"pass", value_ok}};
  return o;
}

Outcome cmd_scaling(const RunConfig& c) {
  const StudyConfig& s = c.scaling;
  const bool rho_model = s.model == scaling::Model::ln_rho || s.model == scaling::Model::ln_rho_log;
  if (!rho_model) {
    const auto [lo, hi] = std::minmax_element(s.eps.begin(), s.eps.end());
    if (s.eps.size() < 3 || *hi < 100.0 * *lo) {
      throw ConfigError("scaling: eps models need at least 3 epsilon values spanning two decades");
    }
  }
  const std::vector<StudyRow> rows = run_study(c, s);
  std::vector<scaling::Sample> samples;
  bool budget_ok = true;
  for (const StudyRow& r : rows) {
    samples.push_back(r.sample);
    budget_ok = budget_ok && !r.budget_exceeded;
  }
  const scaling::Fit fit = scaling::fit(s.model, samples);

  json expectations = json::object();
  bool pass = budget_ok;
  if (s.expect_slope) {
    const bool ok = std::abs(fit.slope - *s.expect_slope) <= s.slope_tol;
    expectations["slope"] = {{"expected", *s.expect_slope}, {"tolerance", s.slope_tol}, {"pass", ok}};
    pass = pass && ok;
  }
  if (s.max_spread) {
    const bool ok = fit.normalized_spread <= *s.max_spread;
    expectations["normalized_spread"] = {{"limit", *s.max_spread}, {"pass", ok}};
    pass = pass && ok;
  }
  if (s.max_rel_residual) {
    const bool ok = fit.max_rel_residual <= *s.max_rel_residual;
    expectations["max_rel_residual"] = {{"limit", *s.max_rel_residual}, {"pass", ok}};
    pass = pass && ok;
  }

  Outcome o;
  o.pass = pass;
  const Sink sink(c);
  json report = {{"model", std::string(scaling::to_string(fit.model))},
                 {"params", fit.params},
                 {"slope", fit.slope},
                 {"max_rel_residual", fit.max_rel_residual},
                 {"normalized_spread", fit.normalized_spread},
                 {"samples", study_rows_json(rows)},
                 {"expectations", expectations},
                 {"pass", pass}};
  sink.write("scaling.json", io::render_json(report, sink.prov()), o);
  if (c.format == "csv") sink.write("scaling.csv", study_table(rows).render(sink.prov()), o);
  if (c.svg) {
    std::string kinds;
    for (DerivKind k : s.kinds) kinds += (kinds.empty() ? "" : "+") + std::string(to_string(k));
    sink.write("scaling.svg", io::render_svg_fit(fit, s.integrand + " " + kinds + " on " + s.region, sink.prov()), o);
  }
  o.details = {{"model", report["model"]},
               {"slope", fit.slope},
               {"max_rel_residual", fit.max_rel_residual},
               {"normalized_spread", fit.normalized_spread},
               {"expectations", expectations},
               {"within_budget", budget_ok}};
  return o;
}

Outcome cmd_fd(const RunConfig& c) {
  const config::FdConfig& f = c.fd;
  const auto field = field_of(c);
  if (f.compare_image && !field->constant_b_zero()) {
    throw ConfigError("fd: compare_image needs constant coefficients with b = 0");
  }
  io::CsvTable t({"epsilon", "rho", "norm", "err_estimate", "cells", "n", "mesh", "bc", "probe_x", "probe_y",
                  "max_mass", "mass_bound", "green_min", "representation_rel", "image_l1_rel"});
  json rows = json::array();
  bool pass = true;
  std::optional<fd::NodalField> first_green;

  for (double eps : f.eps) {
    const auto mesh = std::make_shared<const fd::TensorMesh>(fd::TensorMesh::make(f.mesh, f.n, eps, field->alpha()));
    const fd::System sys(field, mesh, eps, f.bc);
    const fd::MassReport mass = fd::mass_bound(sys);

    const int k = sys.nearest_unknown(f.probe);
    const Point node = sys.point(k);
    const fd::Vector g = sys.discrete_green(k);
    const double norm = g.dot(sys.areas());
    const double err = sys.last_relative_residual() * norm;
    const double gmin = g.minCoeff();

    const fd::Vector rhs = sys.sample([](Point p) { return 1.0 + std::sin(3.0 * p.x) * p.y; });
    const fd::Vector u = sys.solve(fd::OperatorKind::primal, rhs);
    const double rep = (g.array() * rhs.array() * sys.areas().array()).sum();
    const double rep_rel = std::abs(rep - u[k]) / std::abs(u[k]);

    const fd::NodalField nodal = sys.to_nodal(g);
    if (!first_green) first_green = nodal;
    double image_rel = NAN;
    if (f.compare_image) {
      const ImageVariant v = f.bc == fd::BoundaryCondition::dirichlet ? ImageVariant::bar_square
                                                                       : ImageVariant::bar_square_neumann;
      const ImageGreenSpec spec(v, field, eps);
      image_rel = fd::l1_compare([&](Point p) { return nodal.at(p); },
                                 [&](Point p) { return eval_image(spec, node, p, DerivKind::value); }, *mesh, &node)
                      .relative();
    }

    const bool row_pass = mass.max_mass <= (1.0 + f.mass_slack) * mass.bound && gmin >= 0.0 &&
                          rep_rel <= f.representation_tol && (!f.compare_image || image_rel <= f.compare_tol);
    pass = pass && row_pass;
    const std::string mesh_name(fd::to_string(f.mesh)), bc_name(fd::to_string(f.bc));
    t.add_row({eps, 0.0, norm, err, static_cast<long long>(f.n) * f.n, static_cast<long long>(f.n), mesh_name,
               bc_name, node.x, node.y, mass.max_mass, mass.bound, gmin, rep_rel,
               f.compare_image ? io::CsvTable::Cell{image_rel} : io::CsvTable::Cell{std::string()}});
    json row = {{"epsilon", eps},
                {"norm", norm},
                {"err_estimate", err},
                {"n", f.n},
                {"mesh", mesh_name},
                {"bc", bc_name},
                {"probe", point_json(node)},
                {"max_mass", mass.max_mass},
                {"mass_argmax", point_json(mass.argmax)},
                {"mass_bound", mass.bound},
                {"green_min", gmin},
                {"representation_rel", rep_rel},
                {"pass", row_pass}};
    if (f.compare_image) row["image_l1_rel"] = image_rel;
    rows.push_back(row);
  }

  Outcome o;
  o.pass = pass;
  const Sink sink(c);
  if (c.format == "csv") {
    sink.write("fd.csv", t.render(sink.prov()), o);
  } else {
    sink.write("fd.json", io::render_json({{"rows", rows}}, sink.prov()), o);
  }
  if (c.svg && first_green) {
    io::Heatmap map;
    map.nx = map.ny = 201;
    for (int j = 0; j < map.ny; ++j) {
      for (int i = 0; i < map.nx; ++i) map.values.push_back(std::abs(first_green->at({i / 200.0, j / 200.0})));
    }
    char title[128];
    std::snprintf(title, sizeof title, "discrete Green's function, eps = %g, N = %d (%s, %s)", f.eps.front(), f.n,
                  std::string(fd::to_string(f.mesh)).c_str(), std::string(fd::to_string(f.bc)).c_str());
    map.title = title;
    sink.write("fd.svg", io::render_svg_heatmap(map, sink.prov()), o);
  }
  o.details = {{"rows", rows}};
  return o;
}

Outcome cmd_residual(const RunConfig& c) {
  const config::ResidualConfig& r = c.residual;
  const auto field = field_of(c);
  if (!field->constant_b_zero()) throw ConfigError("residual: needs constant coefficients with b = 0");
  const ImageGreenSpec spec(r.variant, field, r.eps);
  const Point s = r.singular;
  const FrozenParams p(s, 0.5 * field->a(s), r.eps);

  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double pde = 0.0;
  for (int i = 0; i < r.samples; ++i) {
    const double rad = 0.1 * std::pow(200.0, unit(rng));
    const double th = 2.0 * std::numbers::pi * unit(rng);
    const Point f{s.x + r.eps * rad * std::cos(th), s.y + r.eps * rad * std::sin(th)};
    const double dxx = -r.eps * eval_g(p, f, DerivKind::d2_xi_xi);
    const double dyy = -r.eps * eval_g(p, f, DerivKind::d2_eta_eta);
    const double conv = 2.0 * p.q() * eval_g(p, f, DerivKind::d_xi);
    const double dominant = std::max({std::abs(dxx), std::abs(dyy), std::abs(conv)});
    if (dominant > 0.0) pde = std::max(pde, std::abs(dxx + dyy + conv) / dominant);
  }

  // the defect may only live where a cut-off is in transition
  auto plateau = [](CutoffKind k, double t) {
    const CutoffJet j = cutoff_jet(k, t);
    return j.d1 == 0.0 && j.d2 == 0.0;
  };
  auto in_transition = [&](Point f) {
    if (!plateau(CutoffKind::omega1, f.x)) return true;
    if (!is_square(r.variant)) return false;
    return !plateau(CutoffKind::omega0, f.y) || !plateau(CutoffKind::omega1, f.y);
  };
  double outside = 0.0, inside = 0.0;
  int n_out = 0, n_in = 0;
  for (int i = 0; i < r.samples; ++i) {
    const Point f{unit(rng), unit(rng)};
    if (distance(f, s) < 1e-9) continue;
    const FrozenResidual fr = frozen_residual(spec, s, f);
    const double rel = fr.scale > 0.0 ? std::abs(fr.value) / fr.scale : 0.0;
    if (in_transition(f)) {
      inside = std::max(inside, rel);
      ++n_in;
    } else {
      outside = std::max(outside, rel);
      ++n_out;
    }
  }

  Outcome o;
  const bool pde_ok = pde <= r.pde_tol, defect_ok = outside <= r.defect_tol;
  o.pass = pde_ok && defect_ok;
  const Sink sink(c);
  io::CsvTable t({"quantity", "points", "max_rel", "tolerance", "pass"});
  t.add_row({std::string("fundamental_pde_residual"), static_cast<long long>(r.samples), pde, r.pde_tol,
             std::string(pde_ok ? "true" : "false")});
  t.add_row({std::string("defect_off_transitions"), static_cast<long long>(n_out), outside, r.defect_tol,
             std::string(defect_ok ? "true" : "false")});
  t.add_row({std::string("defect_in_transitions"), static_cast<long long>(n_in), inside, std::string(), std::string()});
  o.details = {{"variant", std::string(to_string(r.variant))},
               {"epsilon", r.eps},
               {"singular", point_json(s)},
               {"fundamental_pde_residual", pde},
               {"defect_off_transitions", outside},
               {"defect_in_transitions", inside},
               {"points_off_transitions", n_out},
               {"points_in_transitions", n_in}};
  if (c.format == "csv") {
    sink.write("residual.csv", t.render(sink.prov()), o);
  } else {
    sink.write("residual.json", io::render_json(o.details, sink.prov()), o);
  }
  return o;
}

Outcome cmd_selfcheck(const RunConfig& c) {
  std::vector<int> numeric;
  bool with_determinism = c.selfcheck.only.empty();
  for (int id : c.selfcheck.only) {
    if (id == 15) {
      with_determinism = true;
    } else {
      numeric.push_back(id);
    }
  }
  const checks::Options opts;
  std::vector<checks::CheckResult> results = checks::run(opts, numeric);
  if (with_determinism) results.push_back(checks::determinism(opts, results, numeric));

  Outcome o;
  const Sink sink(c);
  const json rep = checks::report(results);
  o.pass = rep["pass"].get<bool>();
  sink.write("selfcheck.json", io::render_json(rep, sink.prov()), o);
  io::CsvTable t({"id", "name", "pass", "summary"});
  for (const auto& r : results) {
    t.add_row({static_cast<long long>(r.id), r.name, std::string(r.pass ? "PASS" : "FAIL"), r.summary});
  }
  sink.write("selfcheck.csv", t.render(sink.prov()), o);
  json lines = json::array();
  for (const auto& r : results) {
    lines.push_back((r.pass ? "PASS " : "FAIL ") + std::to_string(r.id) + " " + r.name + ": " + r.summary);
  }
  o.details = {{"checks", lines}};
  return o;
}

int run(const std::string& command, const std::optional<std::string>& config_path, const Overrides& ov,
        std::ostream& out, std::ostream& err) {
  auto fail = [&](const char* type, const std::string& message, int code) {
    err << json{{"command", command},
                {"cdgreen_version", io::library_version()},
                {"error", {{"type", type}, {"message", message}}}}
               .dump(2)
        << "\n";
    return code;
  };

  RunConfig c;
  try {
    c = resolve(config_path, command, ov);
  } catch (const std::exception& e) {
    return fail("usage", e.what(), kUsage);
  }
  if (c.threads > 0) omp_set_num_threads(c.threads);

  std::error_code ec;
  fs::create_directories(c.out, ec);
  if (ec) return fail("io", "cannot create output directory '" + c.out + "': " + ec.message(), kRuntime);

  Outcome o;
  try {
    if (command == "eval") {
      o = cmd_eval(c);
    } else if (command == "norms") {
      o = cmd_norms(c);
    } else if (command == "scaling") {
      o = cmd_scaling(c);
    } else if (command == "fd") {
      o = cmd_fd(c);
    } else if (command == "residual") {
      o = cmd_residual(c);
    } else if (command == "selfcheck") {
      o = cmd_selfcheck(c);
    } else {
      return fail("usage", "unknown command '" + command + "'", kUsage);
    }
  } catch (const ConfigError& e) {
    return fail("usage", e.what(), kUsage);
  } catch (const SingularPointError& e) {
    return fail("singular_point", std::string("singular point: ") + e.what(), kRuntime);
  } catch (const io::IoError& e) {
    return fail("io", e.what(), kRuntime);
  } catch (const std::exception& e) {
    return fail("runtime", e.what(), kRuntime);
  }

  const json summary = {{"command", command}, {"pass", o.pass}, {"files", o.files}, {"details", o.details}};
  const std::string text = io::render_json(summary, {io::library_version(), c.hash()});
  try {
    io::write_file((fs::path(c.out) / (command + "_summary.json")).string(), text);
  } catch (const io::IoError& e) {
    return fail("io", e.what(), kRuntime);
  }
  out << text;
  return o.pass ? kPass : kFail;
}

}  // namespace cdg::cli
