#include "cdgreen/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>

#include "cdgreen/coefficients.hpp"
#include "cdgreen/cutoff.hpp"
#include "cdgreen/fdsolver.hpp"
#include "cdgreen/fundamental.hpp"
#include "cdgreen/image_green.hpp"
#include "cdgreen/output.hpp"
#include "cdgreen/quadrature.hpp"
#include "cdgreen/scaling.hpp"
#include "cdgreen/specfun.hpp"

namespace cdg::checks {

namespace detail {
extern const char* const kBesselReferenceCsv;
}

namespace {

using nlohmann::json;
constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

double rel_err(double a, double ref) {
  if (a == ref) return 0.0;
  return std::abs(a - ref) / std::abs(ref);
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(lo * std::pow(hi / lo, i / (n - 1.0)));
  return out;
}

double central_diff(const std::function<double(double)>& f, double t, double h) {
  return (f(t + h) - f(t - h)) / (2.0 * h);
}

// |a - b| / max(|a|, |b|, floor)
double scaled_gap(double a, double b, double floor) {
  const double d = std::abs(a - b);
  if (d == 0.0) return 0.0;
  return d / std::max({std::abs(a), std::abs(b), floor});
}

std::shared_ptr<const CoefficientField> shared(const CoefficientField& f) {
  return std::make_shared<const CoefficientField>(f);
}

// ---------------------------------------------------------------------------

CheckResult bessel_accuracy(const Options&) {
  double worst_table = 0.0;
  for (const BesselRef& r : bessel_reference()) {
    const double e = std::exp(r.s);
    worst_table = std::max({worst_table, rel_err(specfun::bessel_k0(r.s), r.k0),
                            rel_err(specfun::bessel_k1(r.s), r.k1),
                            rel_err(specfun::bessel_k0_scaled(r.s), r.k0 * e),
                            rel_err(specfun::bessel_k1_scaled(r.s), r.k1 * e)});
  }
  double worst_fd = 0.0;
  for (double s : log_grid(1e-3, 50.0, 60)) {
    const double h = 1e-4 * std::min(s, 1.0);
    const double d0 = central_diff(specfun::bessel_k0, s, h);
    worst_fd = std::max(worst_fd, rel_err(d0, -specfun::bessel_k1(s)));
  }
  CheckResult r;
  r.pass = worst_table <= 1e-12 && worst_fd <= 1e-7;
  r.summary = "table rel " + fmt(worst_table) + " (<= 1e-12), K0' = -K1 rel " + fmt(worst_fd) +
              " (<= 1e-7)";
  r.metrics = {{"table_rows", bessel_reference().size()},
               {"table_max_rel", worst_table},
               {"derivative_max_rel", worst_fd}};
  return r;
}

struct GSample {
  double q, eps;
  Point singular, field;
};

// 100 points per (q, eps) at hat-distance log-uniform in [0.1, 20]
std::vector<GSample> g_samples() {
  std::mt19937_64 rng(20240917);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<GSample> out;
  for (double q : {0.5, 1.0}) {
    for (double eps : {0.1, 1e-3}) {
      for (int i = 0; i < 100; ++i) {
        const double r = 0.1 * std::pow(200.0, unit(rng));
        const double th = 2.0 * kPi * unit(rng);
        const Point s{0.2 + 0.6 * unit(rng), unit(rng)};
        out.push_back({q, eps, s, {s.x + eps * r * std::cos(th), s.y + eps * r * std::sin(th)}});
      }
    }
  }
  return out;
}

CheckResult derivative_kinds(const Options&) {
  const DerivKind kinds[] = {DerivKind::d_xi,      DerivKind::d_eta,      DerivKind::d_q,
                             DerivKind::d2_xi_xi,  DerivKind::d2_xi_eta,  DerivKind::d2_eta_eta,
                             DerivKind::d2_xi_q,   DerivKind::d_x,        DerivKind::d_y};
  std::vector<double> worst(std::size(kinds), 0.0);
  int failures = 0;
  const auto samples = g_samples();
  for (const GSample& s : samples) {
    const FrozenParams p(s.singular, s.q, s.eps);
    const Point f = s.field;
    const double h = 1e-6 * s.eps;
    auto at = [&](DerivKind k, Point pt) { return eval_g(p, pt, k); };
    const double g0 = std::abs(at(DerivKind::value, f));
    const double floor1 = 1e-3 * g0 / s.eps, floor2 = 1e-3 * g0 / (s.eps * s.eps);
    auto in_xi = [&](DerivKind k) { return central_diff([&](double t) { return at(k, {t, f.y}); }, f.x, h); };
    auto in_eta = [&](DerivKind k) { return central_diff([&](double t) { return at(k, {f.x, t}); }, f.y, h); };
    auto in_q = [&](DerivKind k) {
      return central_diff([&](double t) { return eval_g(FrozenParams(s.singular, t, s.eps), f, k); }, s.q,
                          1e-6 * s.q);
    };
    auto in_source = [&](int axis) {
      return central_diff(
          [&](double t) {
            const Point src = axis == 0 ? Point{t, s.singular.y} : Point{s.singular.x, t};
            return eval_g(FrozenParams(src, s.q, s.eps), f, DerivKind::value);
          },
          axis == 0 ? s.singular.x : s.singular.y, h);
    };
    const double gaps[] = {
        scaled_gap(at(DerivKind::d_xi, f), in_xi(DerivKind::value), floor1),
        scaled_gap(at(DerivKind::d_eta, f), in_eta(DerivKind::value), floor1),
        scaled_gap(at(DerivKind::d_q, f), in_q(DerivKind::value), 1e-3 * g0),
        scaled_gap(at(DerivKind::d2_xi_xi, f), in_xi(DerivKind::d_xi), floor2),
        scaled_gap(at(DerivKind::d2_xi_eta, f), in_eta(DerivKind::d_xi), floor2),
        scaled_gap(at(DerivKind::d2_eta_eta, f), in_eta(DerivKind::d_eta), floor2),
        scaled_gap(at(DerivKind::d2_xi_q, f), in_q(DerivKind::d_xi), floor1),
        scaled_gap(at(DerivKind::d_x, f), in_source(0), floor1),
        scaled_gap(at(DerivKind::d_y, f), in_source(1), floor1),
    };
    for (std::size_t k = 0; k < std::size(kinds); ++k) {
      worst[k] = std::max(worst[k], gaps[k]);
      if (!(gaps[k] <= 1e-5)) ++failures;
    }
  }
  CheckResult r;
  r.pass = failures == 0;
  json per_kind = json::object();
  for (std::size_t k = 0; k < std::size(kinds); ++k) per_kind[std::string(to_string(kinds[k]))] = worst[k];
  r.metrics = {{"points", samples.size()}, {"failures", failures}, {"max_rel_by_kind", per_kind}};
  r.summary = std::to_string(samples.size()) + " points x " + std::to_string(std::size(kinds)) +
              " kinds, worst rel " + fmt(*std::max_element(worst.begin(), worst.end())) + " (<= 1e-5)";
  return r;
}

CheckResult pde_residual(const Options&) {
  double worst = 0.0;
  const auto samples = g_samples();
  for (const GSample& s : samples) {
    const FrozenParams p(s.singular, s.q, s.eps);
    const double dxx = -s.eps * eval_g(p, s.field, DerivKind::d2_xi_xi);
    const double dyy = -s.eps * eval_g(p, s.field, DerivKind::d2_eta_eta);
    const double conv = 2.0 * s.q * eval_g(p, s.field, DerivKind::d_xi);
    const double dominant = std::max({std::abs(dxx), std::abs(dyy), std::abs(conv)});
    worst = std::max(worst, std::abs(dxx + dyy + conv) / dominant);
  }
  CheckResult r;
  r.pass = worst <= 1e-8;
  r.summary = "max |residual| / dominant term " + fmt(worst) + " (<= 1e-8)";
  r.metrics = {{"points", samples.size()}, {"max_rel_residual", worst}};
  return r;
}

CheckResult boundary_exactness(const Options&) {
  const CoefficientField smooth = CoefficientField::smooth();
  double dirichlet = 0.0, tilde = 0.0, neumann_flux = 0.0, neumann_identity = 0.0;
  auto ratio = [](double v, double ref) {
    if (v == 0.0) return 0.0;
    return ref != 0.0 ? std::abs(v) / std::abs(ref) : INFINITY;
  };
  for (double eps : {0.2, 1e-2, 1e-4}) {
    const ImageGreenSpec bar(ImageVariant::bar_square, smooth, eps);
    const ImageGreenSpec til(ImageVariant::tilde_square, smooth, eps);
    const Point s{0.37, 0.61};
    const FrozenParams free(s, 0.5 * smooth.a(s), eps);
    const Point field{0.52, 0.44};
    for (int i = 0; i <= 40; ++i) {
      const double t = i / 40.0;
      for (Point b : {Point{0.0, t}, Point{1.0, t}, Point{t, 0.0}, Point{t, 1.0}}) {
        dirichlet = std::max(dirichlet, ratio(eval_image(bar, s, b, DerivKind::value),
                                              eval_g(free, b, DerivKind::value)));
        const FrozenParams from_b(b, 0.5 * smooth.a(field), eps);
        tilde = std::max(tilde, ratio(eval_image(til, b, field, DerivKind::value),
                                      eval_g(from_b, field, DerivKind::value)));
      }
    }
  }
  const CoefficientField unit = CoefficientField::constant(1.0);
  for (double eps : {0.05, 1e-3}) {
    const ImageGreenSpec neu(ImageVariant::bar_square_neumann, unit, eps);
    const ImageGreenSpec dir(ImageVariant::bar_square, unit, eps);
    const ImageGreenSpec strip(ImageVariant::bar_strip, unit, eps);
    for (Point s : {Point{0.3, 0.2}, Point{0.6, 0.85}}) {
      for (int i = 1; i < 20; ++i) {
        const double xi = i / 20.0;
        for (double eta : {0.0, 1.0}) {
          const double scale = std::abs(eval_image(strip, s, {xi, eta}, DerivKind::d_eta));
          neumann_flux = std::max(neumann_flux, ratio(eval_image(neu, s, {xi, eta}, DerivKind::d_eta), scale));
        }
        for (int j = 0; j <= 20; ++j) {
          const Point f{xi, j / 20.0};
          if (distance(f, s) < 1e-9) continue;
          const double images =
              cutoff(CutoffKind::omega0, f.y) * eval_image(strip, s, {f.x, -f.y}, DerivKind::value) +
              cutoff(CutoffKind::omega1, f.y) * eval_image(strip, s, {f.x, 2.0 - f.y}, DerivKind::value);
          const double diff = eval_image(neu, s, f, DerivKind::value) - eval_image(dir, s, f, DerivKind::value);
          const double scale = std::max(std::abs(eval_image(strip, s, f, DerivKind::value)), std::abs(diff));
          neumann_identity = std::max(neumann_identity, ratio(diff - 2.0 * images, scale));
        }
      }
    }
  }
  CheckResult r;
  r.pass = dirichlet <= 1e-14 && tilde <= 1e-14 && neumann_flux <= 1e-13 && neumann_identity <= 1e-13;
  r.summary = "Dirichlet " + fmt(dirichlet) + ", tilde " + fmt(tilde) + " (<= 1e-14); Neumann flux " +
              fmt(neumann_flux) + ", image identity " + fmt(neumann_identity) + " (<= 1e-13)";
  r.metrics = {{"bar_square_boundary_rel", dirichlet},
               {"tilde_square_boundary_rel", tilde},
               {"neumann_normal_derivative_rel", neumann_flux},
               {"neumann_identity_rel", neumann_identity}};
  return r;
}

CheckResult defect_smallness(const Options& opts) {
  const double eps = 0.05;
  const CoefficientField unit = CoefficientField::constant(1.0);
  const ImageGreenSpec spec(ImageVariant::bar_strip, unit, eps);
  const Point s{0.5, 0.5};
  quad::Options qo;
  qo.tol = 1e-3;
  qo.parallel = opts.parallel;
  const quad::NormResult n =
      quad::integrate(quad::defect_integrand(spec, s), quad::Region::strip_window(0.0, 1.0, -1.5, 2.5), qo);

  double outside = 0.0;
  for (int i = 0; i <= 120; ++i) {
    const double xi = 1.0 / 3.0 + (2.0 / 3.0) * i / 120.0;
    for (int j = 0; j <= 40; ++j) {
      const Point f{xi, -0.5 + 2.0 * j / 40.0};
      if (distance(f, s) < 1e-9) continue;
      const FrozenResidual res = frozen_residual(spec, s, f);
      if (res.scale > 0.0) outside = std::max(outside, std::abs(res.value) / res.scale);
    }
  }
  CheckResult r;
  r.pass = n.value <= 1e-6 && outside <= 1e-7;
  r.summary = "int |defect| = " + fmt(n.value) + " (<= 1e-6), sampled xi >= 1/3 rel " + fmt(outside) +
              " (<= 1e-7)";
  r.metrics = {{"defect_l1", n.value},
               {"defect_l1_err", n.abs_error_estimate},
               {"cells", n.cells_used},
               {"max_rel_defect_xi_ge_third", outside}};
  return r;
}

quad::NormResult image_norm(double eps, std::vector<DerivKind> kinds, const quad::Region& region,
                            const Options& opts, Point s = {0.5, 0.5}) {
  const ImageGreenSpec spec(ImageVariant::bar_square, CoefficientField::constant(1.0), eps);
  quad::Options qo;
  qo.parallel = opts.parallel;
  return quad::integrate(quad::image_norm_integrand(spec, s, std::move(kinds)), region, qo);
}

json samples_json(const std::vector<scaling::Sample>& samples) {
  json a = json::array();
  for (const auto& s : samples) {
    a.push_back({{"epsilon", s.eps}, {"rho", s.rho}, {"norm", s.value}, {"err", s.err}, {"cells", s.cells}});
  }
  return a;
}

scaling::Job norm_job(DerivKind kind, const Options& opts) {
  return [kind, opts](double eps, double) {
    return image_norm(eps, {kind}, quad::Region::unit_square(), opts);
  };
}

CheckResult eta_slope(const Options& opts) {
  const scaling::Fit f =
      scaling::scaling_study(norm_job(DerivKind::d_eta, opts), {1e-2, 1e-3, 1e-4}, {}, scaling::Model::power);
  CheckResult r;
  r.pass = std::abs(f.slope + 0.5) <= 0.1;
  r.summary = "slope of ||d_eta G|| = " + fmt(f.slope) + " (-0.5 +- 0.1)";
  r.metrics = {{"slope", f.slope}, {"constant", f.params.at(0)}, {"samples", samples_json(f.samples)}};
  return r;
}

CheckResult xi_log_law(const Options& opts) {
  const scaling::Fit f =
      scaling::scaling_study(norm_job(DerivKind::d_xi, opts), {1e-2, 1e-3, 1e-4}, {}, scaling::Model::log_model);
  std::vector<double> normalized;
  for (const auto& s : f.samples) normalized.push_back(s.value / (1.0 + std::abs(std::log(s.eps))));
  const double spread = scaling::relative_spread(normalized);
  CheckResult r;
  r.pass = spread <= 0.25;
  r.summary = "spread of ||d_xi G|| / (1 + |ln eps|) = " + fmt(spread) + " (<= 0.25)";
  r.metrics = {{"spread", spread}, {"normalized", normalized}, {"samples", samples_json(f.samples)}};
  return r;
}

CheckResult rho_law(const Options& opts) {
  const double eps = 1e-2;
  const Point s{0.5, 0.5};
  struct Row {
    DerivKind kind;
    scaling::Model model;
  };
  const Row rows[] = {{DerivKind::d2_xi_xi, scaling::Model::ln_rho},
                      {DerivKind::d2_xi_eta, scaling::Model::ln_rho},
                      {DerivKind::d2_eta_eta, scaling::Model::ln_rho_log}};
  CheckResult r;
  r.pass = true;
  r.metrics = json::object();
  std::string summary;
  for (const Row& row : rows) {
    std::vector<scaling::Sample> samples;
    for (double rho : {eps / 8.0, eps / 2.0, 2.0 * eps}) {
      const quad::NormResult n = image_norm(eps, {row.kind}, quad::Region::square_minus_ball(s, rho), opts, s);
      samples.push_back({eps, rho, n.value, n.abs_error_estimate, n.cells_used});
    }
    const scaling::Fit f = scaling::fit(row.model, samples);
    r.pass = r.pass && f.max_rel_residual <= 0.3;
    const std::string name(to_string(row.kind));
    r.metrics[name] = {{"model", std::string(scaling::to_string(row.model))},
                       {"constant", f.slope},
                       {"max_rel_deviation", f.max_rel_residual},
                       {"samples", samples_json(f.samples)}};
    summary += (summary.empty() ? "" : ", ") + name + " " + fmt(f.max_rel_residual);
  }
  r.summary = "max deviation from the rho law: " + summary + " (<= 0.3)";
  return r;
}

CheckResult ball_growth(const Options& opts) {
  const double eps = 1e-3;
  const Point s{0.5, 0.5};
  std::vector<double> per_rho;
  json samples = json::array();
  for (double k : {1.0 / 16, 1.0 / 8, 1.0 / 4, 1.0 / 2, 1.0, 2.0}) {
    const double rho = k * eps;
    const quad::NormResult n = image_norm(eps, {DerivKind::value, DerivKind::d_xi, DerivKind::d_eta},
                                          quad::Region::ball_intersect_square(s, rho), opts, s);
    per_rho.push_back(n.value / rho);
    samples.push_back({{"rho", rho}, {"norm", n.value}, {"err", n.abs_error_estimate}, {"cells", n.cells_used}});
  }
  double log_sum = 0.0;
  for (double v : per_rho) log_sum += std::log(v);
  const double c = std::exp(log_sum / per_rho.size());
  double dev = 0.0;
  for (double v : per_rho) dev = std::max(dev, std::abs(v / c - 1.0));
  CheckResult r;
  r.pass = dev <= 0.3;
  r.summary = "||G||_{1,1;ball} / rho within " + fmt(dev) + " of " + fmt(c) + " (<= 0.3)";
  r.metrics = {{"constant", c}, {"max_rel_deviation", dev}, {"norm_over_rho", per_rho}, {"samples", samples}};
  return r;
}

CheckResult mass_bounds(const Options& opts) {
  CheckResult r;
  r.pass = true;
  json fd_rows = json::array();
  double worst = 0.0;
  for (const char* preset : {"constant", "smooth"}) {
    const auto field = shared(CoefficientField::preset(preset));
    for (fd::BoundaryCondition bc : {fd::BoundaryCondition::dirichlet, fd::BoundaryCondition::neumann_top_bottom}) {
      for (double eps : {0.05, 0.01, 0.002}) {
        const auto mesh = std::make_shared<const fd::TensorMesh>(fd::TensorMesh::shishkin(128, eps, field->alpha()));
        const fd::System sys(field, mesh, eps, bc, opts.parallel);
        const fd::MassReport m = fd::mass_bound(sys);
        const double ratio = m.max_mass / m.bound;
        worst = std::max(worst, ratio);
        r.pass = r.pass && m.max_mass <= 1.1 * m.bound;
        fd_rows.push_back({{"field", preset},
                           {"bc", std::string(fd::to_string(bc))},
                           {"epsilon", eps},
                           {"max_mass", m.max_mass},
                           {"bound", m.bound}});
      }
    }
  }
  json quad_rows = json::array();
  double quad_max = 0.0;
  for (double eps : {0.1, 0.01}) {
    for (Point s : {Point{0.5, 0.5}, Point{0.1, 0.5}}) {
      const quad::NormResult n = image_norm(eps, {DerivKind::value}, quad::Region::unit_square(), opts, s);
      quad_max = std::max(quad_max, n.value);
      r.pass = r.pass && n.value <= 1.0 + 1e-4;
      quad_rows.push_back({{"epsilon", eps}, {"singular", {s.x, s.y}}, {"mass", n.value}, {"err", n.abs_error_estimate}});
    }
  }
  r.summary = "FD max mass * alpha = " + fmt(worst) + " (<= 1.1); quadrature mass " + fmt(quad_max) +
              " (<= 1 + 1e-4)";
  r.metrics = {{"fd", fd_rows}, {"quadrature", quad_rows}};
  return r;
}

CheckResult representation(const Options& opts) {
  double worst = 0.0;
  int cases = 0;
  for (const char* preset : {"smooth", "shear"}) {
    const auto field = shared(CoefficientField::preset(preset));
    for (fd::BoundaryCondition bc : {fd::BoundaryCondition::dirichlet, fd::BoundaryCondition::neumann_top_bottom}) {
      const double eps = 0.01;
      const auto mesh = std::make_shared<const fd::TensorMesh>(fd::TensorMesh::shishkin(64, eps, field->alpha()));
      const fd::System sys(field, mesh, eps, bc, opts.parallel);
      const fd::Vector f = sys.sample([](Point q) { return 1.0 + std::sin(3.0 * q.x) * q.y; });
      const fd::Vector u = sys.solve(fd::OperatorKind::primal, f);
      for (Point p : {Point{0.3, 0.5}, Point{0.05, 0.9}, Point{0.8, 0.0}}) {
        if (bc == fd::BoundaryCondition::dirichlet && p.y == 0.0) continue;
        const int k = sys.nearest_unknown(p);
        const fd::Vector g = sys.discrete_green(k);
        const double rep = (g.array() * f.array() * sys.areas().array()).sum();
        worst = std::max(worst, rel_err(rep, u[k]));
        ++cases;
      }
    }
  }
  CheckResult r;
  r.pass = worst <= 1e-8;
  r.summary = "sum G_h f area vs u_h: max rel " + fmt(worst) + " over " + std::to_string(cases) +
              " probes (<= 1e-8)";
  r.metrics = {{"cases", cases}, {"max_rel", worst}};
  return r;
}

CheckResult apriori(const Options&) {
  const auto field = shared(CoefficientField::constant(1.0));
  const std::vector<double> eps{1e-2, 1e-3, 1e-4, 1e-5};
  const fd::DivergenceData f2{[](Point) { return 0.0; }, [](Point) { return 0.0; },
                              [](Point p) { return std::sin(kPi * p.y); },
                              [](Point p) { return kPi * std::cos(kPi * p.y); }};
  const fd::DivergenceData f1{[](Point p) { return p.x; }, [](Point) { return 1.0; },
                              [](Point) { return 0.0; }, [](Point) { return 0.0; }};
  const auto rows2 = fd::apriori_check(field, f2, eps, fd::MeshKind::shishkin, 128);
  const auto rows1 = fd::apriori_check(field, f1, eps, fd::MeshKind::shishkin, 128);
  // rows follow eps from the largest down; bounded means no growth beyond 2x
  // of the value at the largest eps
  double growth2 = 0.0, growth1 = 0.0;
  json t2 = json::array(), t1 = json::array();
  for (std::size_t i = 0; i < eps.size(); ++i) {
    growth2 = std::max(growth2, rows2[i].u_sqrt_eps / rows2.front().u_sqrt_eps);
    growth1 = std::max(growth1, rows1[i].u_over_log / rows1.front().u_over_log);
    t2.push_back({{"epsilon", rows2[i].eps}, {"u_max", rows2[i].u_max}, {"u_sqrt_eps", rows2[i].u_sqrt_eps}});
    t1.push_back({{"epsilon", rows1[i].eps}, {"u_max", rows1[i].u_max}, {"u_over_log", rows1[i].u_over_log}});
  }
  CheckResult r;
  r.pass = growth2 <= 2.0 && growth1 <= 2.0;
  r.summary = "growth of u sqrt(eps) (F2) " + fmt(growth2) + ", of u / (1 + |ln eps|) (F1) " + fmt(growth1) +
              " (<= 2)";
  r.metrics = {{"F2_growth", growth2}, {"F1_growth", growth1}, {"F2_rows", t2}, {"F1_rows", t1}};
  return r;
}

CheckResult gamma_1d(const Options& opts) {
  CheckResult r;
  r.pass = true;
  double worst = 0.0;
  json rows = json::array();
  for (double a : {1.0, 2.0}) {
    for (double eps : {0.5, 1e-3}) {
      const fd::Gamma1dResult g = fd::gamma_1d_check([a](double) { return a; }, a, eps, 2048, opts.parallel);
      worst = std::max(worst, g.max_variation / g.bound);
      r.pass = r.pass && g.max_variation <= 1.1 * g.bound;
      rows.push_back({{"a", a}, {"epsilon", eps}, {"max_variation", g.max_variation}, {"bound", g.bound}});
    }
  }
  r.summary = "max variation / (2/alpha) = " + fmt(worst) + " (<= 1.1)";
  r.metrics = {{"rows", rows}};
  return r;
}

CheckResult fd_vs_image(const Options& opts) {
  const double eps = 0.05;
  const Point s{0.5, 0.5};
  const auto field = shared(CoefficientField::constant(1.0));
  const ImageGreenSpec spec(ImageVariant::bar_square, field, eps);
  auto ref = [&](Point q) { return eval_image(spec, s, q, DerivKind::value); };
  std::vector<double> rel;
  for (int n : {128, 256}) {
    const auto mesh = std::make_shared<const fd::TensorMesh>(fd::TensorMesh::uniform(n));
    const fd::System sys(field, mesh, eps, fd::BoundaryCondition::dirichlet, opts.parallel);
    const fd::NodalField g = sys.to_nodal(sys.discrete_green(sys.nearest_unknown(s)));
    rel.push_back(fd::l1_compare([&](Point q) { return g.at(q); }, ref, *mesh, &s, opts.parallel).relative());
  }
  CheckResult r;
  r.pass = rel[1] <= kFdImageTolerance && rel[1] < rel[0];
  r.summary = "relative L1 " + fmt(rel[0]) + " (N=128) -> " + fmt(rel[1]) + " (N=256), frozen tolerance " +
              fmt(kFdImageTolerance);
  r.metrics = {{"rel_l1_128", rel[0]}, {"rel_l1_256", rel[1]}, {"tolerance", kFdImageTolerance}};
  return r;
}

}  // namespace

const std::vector<BesselRef>& bessel_reference() {
  static const std::vector<BesselRef> table = [] {
    std::vector<BesselRef> rows;
    std::istringstream in(detail::kBesselReferenceCsv);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      if (header) {
        header = false;
        continue;
      }
      BesselRef r{};
      char c1 = 0, c2 = 0;
      std::istringstream ss(line);
      ss >> r.s >> c1 >> r.k0 >> c2 >> r.k1;
      if (!ss || c1 != ',' || c2 != ',') throw std::runtime_error("bessel reference: bad row '" + line + "'");
      rows.push_back(r);
    }
    return rows;
  }();
  return table;
}

const std::vector<CheckInfo>& registry() {
  static const std::vector<CheckInfo> checks{
      {1, "bessel-accuracy", bessel_accuracy},
      {2, "derivative-kinds", derivative_kinds},
      {3, "frozen-pde-residual", pde_residual},
      {4, "boundary-exactness", boundary_exactness},
      {5, "defect-smallness", defect_smallness},
      {6, "eta-derivative-slope", eta_slope},
      {7, "xi-derivative-log-law", xi_log_law},
      {8, "second-derivative-rho-law", rho_law},
      {9, "ball-growth", ball_growth},
      {10, "mass-bound", mass_bounds},
      {11, "representation-identity", representation},
      {12, "apriori-sweep", apriori},
      {13, "gamma-1d-variation", gamma_1d},
      {14, "fd-vs-image-green", fd_vs_image},
  };
  return checks;
}

std::vector<CheckResult> run(const Options& opts, const std::vector<int>& only) {
  std::vector<CheckResult> out;
  for (const CheckInfo& c : registry()) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    CheckResult r;
    try {
      r = c.run(opts);
    } catch (const std::exception& e) {
      r = CheckResult{};
      r.pass = false;
      r.summary = std::string("error: ") + e.what();
      r.metrics = json::object();
    }
    r.id = c.id;
    r.name = c.name;
    out.push_back(std::move(r));
  }
  return out;
}

CheckResult determinism(const Options& opts, const std::vector<CheckResult>& first,
                        const std::vector<int>& only) {
  const std::string a = report(first).dump();
  const std::string b = report(run(opts, only)).dump();
  CheckResult r;
  r.id = 15;
  r.name = "determinism";
  r.pass = a == b;
  r.summary = std::string(r.pass ? "repeated run is byte-identical" : "repeated run differs") +
              " (fnv1a " + io::hex64(io::fnv1a64(a)) + ")";
  r.metrics = {{"report_bytes", a.size()}, {"first_hash", io::hex64(io::fnv1a64(a))},
               {"second_hash", io::hex64(io::fnv1a64(b))}};
  return r;
}

json report(const std::vector<CheckResult>& results) {
  json checks = json::array();
  bool all = true;
  for (const CheckResult& r : results) {
    all = all && r.pass;
    checks.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"summary", r.summary}, {"metrics", r.metrics}});
  }
  return {{"pass", all}, {"checks", checks}};
}

}  // namespace cdg::checks
