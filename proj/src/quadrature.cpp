#include "cdgreen/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

namespace cdg::quad {
namespace {

constexpr double kPi = std::numbers::pi;
// innermost radius of an unholed polar patch; far above the coordinate ulp
constexpr double kMinRadius = 1e-12;

// 7-point Kronrod extension of the 3-point Gauss rule on [-1,1]
constexpr std::array<double, 7> kNodes = {
    -0.9604912687080202834235071, -0.7745966692414833770358531, -0.4342437493468025580020715, 0.0,
    0.4342437493468025580020715,  0.7745966692414833770358531,  0.9604912687080202834235071};
constexpr std::array<double, 7> kKronrod = {
    0.1046562260264672651938239, 0.2684880898683334407285722, 0.4013974147759622229050518,
    0.4509165386584741423451091, 0.4013974147759622229050518, 0.2684880898683334407285722,
    0.1046562260264672651938239};
// Gauss weights on the Kronrod grid (zero off the Gauss nodes 1, 3, 5)
constexpr std::array<double, 7> kGauss = {0.0, 5.0 / 9.0, 0.0, 8.0 / 9.0, 0.0, 5.0 / 9.0, 0.0};

struct Box {
  double x0, x1, y0, y1;
  bool contains(Point p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
};

// Distance from c (inside b) along direction th to the boundary of b.
double ray_exit(const Box& b, Point c, double th) {
  const double cx = std::cos(th), cy = std::sin(th);
  double t = std::numeric_limits<double>::infinity();
  if (cx > 0.0) t = std::min(t, (b.x1 - c.x) / cx);
  if (cx < 0.0) t = std::min(t, (b.x0 - c.x) / cx);
  if (cy > 0.0) t = std::min(t, (b.y1 - c.y) / cy);
  if (cy < 0.0) t = std::min(t, (b.y0 - c.y) / cy);
  return std::max(t, 0.0);
}

// Polar patch around c: r from r_in to min(ray exit of rect, r_cap), with a
// logarithmic radial map so that r^-1 and log singularities become smooth.
struct Polar {
  Point c;
  Box rect;
  Box clamp;
  double r_in;
  double r_cap;

  double r_out(double th) const { return std::min(ray_exit(rect, c, th), r_cap); }

  // point and area Jacobian for parameters (theta, u in [0,1])
  double map(double th, double u, Point& p) const {
    const double ro = r_out(th);
    if (!(ro > r_in)) return 0.0;
    const double L = std::log(ro / r_in);
    const double r = r_in * std::exp(u * L);
    p.x = std::clamp(c.x + r * std::cos(th), clamp.x0, clamp.x1);
    p.y = std::clamp(c.y + r * std::sin(th), clamp.y0, clamp.y1);
    return r * r * L;
  }

  std::vector<double> breakpoints() const {
    std::vector<double> th;
    for (int k = -4; k <= 4; ++k) th.push_back(k * kPi / 4.0);
    for (double x : {rect.x0, rect.x1}) {
      for (double y : {rect.y0, rect.y1}) {
        if (x != c.x || y != c.y) th.push_back(std::atan2(y - c.y, x - c.x));
      }
    }
    auto circle = [&](double r) {
      if (!std::isfinite(r) || r <= 0.0) return;
      for (double x : {rect.x0, rect.x1}) {
        const double dx = x - c.x;
        if (std::abs(dx) < r) {
          const double dy = std::sqrt(r * r - dx * dx);
          th.push_back(std::atan2(dy, dx));
          th.push_back(std::atan2(-dy, dx));
        }
      }
      for (double y : {rect.y0, rect.y1}) {
        const double dy = y - c.y;
        if (std::abs(dy) < r) {
          const double dx = std::sqrt(r * r - dy * dy);
          th.push_back(std::atan2(dy, dx));
          th.push_back(std::atan2(dy, -dx));
        }
      }
    };
    circle(r_cap);
    circle(r_in);
    for (double& t : th) t = std::clamp(t, -kPi, kPi);
    std::sort(th.begin(), th.end());
    th.erase(std::unique(th.begin(), th.end(), [](double a, double b) { return b - a < 1e-14; }),
             th.end());
    return th;
  }
};

struct Cell {
  double a0, a1, b0, b1;  // (x, y) or (theta, u)
  bool polar;
  double value = 0.0;
  double err = 0.0;
  double dir0 = 0.0;
  double dir1 = 0.0;
};

struct Layout {
  Box box;
  std::optional<Polar> polar;
  std::vector<Cell> cells;
};

double neumaier(const std::vector<Cell>& cells, double Cell::*field) {
  double sum = 0.0, comp = 0.0;
  for (const Cell& c : cells) {
    const double v = c.*field;
    const double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return sum + comp;
}

// centre +- start * 2^k up to the given span
void add_graded(std::vector<double>& lines, double centre, double start, double span) {
  if (!(start > 0.0)) return;
  for (double d = start; d < span; d *= 2.0) {
    lines.push_back(centre - d);
    lines.push_back(centre + d);
  }
}

std::vector<double> finish_lines(std::vector<double> lines, double lo, double hi) {
  lines.push_back(lo);
  lines.push_back(hi);
  std::vector<double> out;
  for (double v : lines) {
    if (v >= lo && v <= hi) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  const double tiny = 1e-14 * std::max(1.0, hi - lo);
  out.erase(std::unique(out.begin(), out.end(), [&](double a, double b) { return b - a < tiny; }),
            out.end());
  out.front() = lo;
  out.back() = hi;
  return out;
}

Layout build_layout(const Integrand& in, const Region& region) {
  Layout lay;
  const double eps = in.eps;
  switch (region.kind) {
    case Region::Kind::strip_window:
      lay.box = {region.xi0, region.xi1, region.eta0, region.eta1};
      break;
    default:
      lay.box = {0.0, 1.0, 0.0, 1.0};
  }
  const Box& box = lay.box;
  double patch_radius = 0.0;

  if (region.kind == Region::Kind::ball_intersect_square) {
    const double floor = std::max(1e-14 * region.rho, kMinRadius);
    lay.polar = Polar{region.center, box, box, floor, region.rho};
  } else {
    const bool hole = region.kind == Region::Kind::square_minus_ball;
    std::optional<Point> c;
    if (hole) c = region.center;
    else if (in.singular && box.contains(*in.singular)) c = in.singular;
    if (c) {
      const double R = std::max(4.0 * eps, 2.0 * (hole ? region.rho : 0.0));
      patch_radius = R;
      const Box rect{std::max(box.x0, c->x - R), std::min(box.x1, c->x + R),
                     std::max(box.y0, c->y - R), std::min(box.y1, c->y + R)};
      lay.polar = Polar{*c, rect, box, hole ? region.rho : std::max(1e-14 * R, kMinRadius),
                        std::numeric_limits<double>::infinity()};
    }
  }

  // polar cells
  if (lay.polar) {
    const Polar& P = *lay.polar;
    const std::vector<double> th = P.breakpoints();
    for (std::size_t i = 0; i + 1 < th.size(); ++i) {
      const double mid = 0.5 * (th[i] + th[i + 1]);
      if (!(P.r_out(mid) > P.r_in) && !(P.r_out(th[i]) > P.r_in) &&
          !(P.r_out(th[i + 1]) > P.r_in)) {
        continue;
      }
      lay.cells.push_back({th[i], th[i + 1], 0.0, 1.0, true});
    }
  }
  if (region.kind == Region::Kind::ball_intersect_square) return lay;

  // Cartesian cells, graded towards the singular point, the walls and the
  // cut-off knots
  std::vector<double> xs{1.0 / 6.0, 1.0 / 3.0, 2.0 / 3.0, 5.0 / 6.0};
  std::vector<double> ys = xs;
  const double sx = box.x1 - box.x0, sy = box.y1 - box.y0;
  for (double wall : {0.0, 1.0}) {
    xs.push_back(wall);
    ys.push_back(wall);
    add_graded(xs, wall, eps, 0.5);
    add_graded(ys, wall, eps, 0.5);
  }
  const double R0 = std::max(patch_radius, 4.0 * eps);
  for (std::optional<Point> c : {in.singular, lay.polar ? std::optional<Point>(lay.polar->c)
                                                        : std::optional<Point>()}) {
    if (!c) continue;
    xs.push_back(c->x);
    ys.push_back(c->y);
    add_graded(xs, c->x, R0, 2.0 * sx);
    add_graded(ys, c->y, R0, 2.0 * sy);
    add_graded(ys, c->y, std::sqrt(eps), 2.0 * sy);
  }
  if (lay.polar) {
    const Box& r = lay.polar->rect;
    xs.insert(xs.end(), {r.x0, r.x1});
    ys.insert(ys.end(), {r.y0, r.y1});
  }
  xs = finish_lines(xs, box.x0, box.x1);
  ys = finish_lines(ys, box.y0, box.y1);

  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
      const Point mid{0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1])};
      if (lay.polar && lay.polar->rect.x0 < mid.x && mid.x < lay.polar->rect.x1 &&
          lay.polar->rect.y0 < mid.y && mid.y < lay.polar->rect.y1) {
        continue;
      }
      lay.cells.push_back({xs[i], xs[i + 1], ys[j], ys[j + 1], false});
    }
  }
  return lay;
}

void evaluate_cell(Cell& c, const Layout& lay, const std::function<double(Point)>& f) {
  const double h0 = 0.5 * (c.a1 - c.a0), m0 = 0.5 * (c.a1 + c.a0);
  const double h1 = 0.5 * (c.b1 - c.b0), m1 = 0.5 * (c.b1 + c.b0);
  double kk = 0.0, gg = 0.0, gk = 0.0, kg = 0.0;
  for (int i = 0; i < 7; ++i) {
    const double s = m0 + h0 * kNodes[i];
    double row_k = 0.0, row_g = 0.0;
    for (int j = 0; j < 7; ++j) {
      const double t = m1 + h1 * kNodes[j];
      Point p{s, t};
      double jac = 1.0;
      if (c.polar) {
        jac = lay.polar->map(s, t, p);
        if (jac == 0.0) continue;
      }
      const double v = f(p) * jac;
      row_k += kKronrod[j] * v;
      row_g += kGauss[j] * v;
    }
    kk += kKronrod[i] * row_k;
    kg += kKronrod[i] * row_g;
    gk += kGauss[i] * row_k;
    gg += kGauss[i] * row_g;
  }
  const double area = h0 * h1;
  c.value = kk * area;
  c.dir0 = std::abs(kk - gk) * area;
  c.dir1 = std::abs(kk - kg) * area;
  c.err = std::max({std::abs(kk - gg) * area, c.dir0, c.dir1});
  if (!std::isfinite(c.value) || !std::isfinite(c.err)) {
    throw std::runtime_error("quadrature: non-finite integrand value");
  }
}

void evaluate_range(std::vector<Cell>& cells, std::size_t begin, const Layout& lay,
                    const std::function<double(Point)>& f, bool parallel) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(cells.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 8) if (parallel)
  for (std::ptrdiff_t k = static_cast<std::ptrdiff_t>(begin); k < n; ++k) {
    try {
      evaluate_cell(cells[static_cast<std::size_t>(k)], lay, f);
    } catch (...) {
#pragma omp critical(cdg_quad_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

void split(const Cell& c, std::vector<Cell>& out) {
  const bool s0 = !(c.dir1 > 3.0 * c.dir0);
  const bool s1 = !(c.dir0 > 3.0 * c.dir1);
  const double am = 0.5 * (c.a0 + c.a1), bm = 0.5 * (c.b0 + c.b1);
  if (s0 && s1) {
    out.push_back({c.a0, am, c.b0, bm, c.polar});
    out.push_back({am, c.a1, c.b0, bm, c.polar});
    out.push_back({c.a0, am, bm, c.b1, c.polar});
    out.push_back({am, c.a1, bm, c.b1, c.polar});
  } else if (s0) {
    out.push_back({c.a0, am, c.b0, c.b1, c.polar});
    out.push_back({am, c.a1, c.b0, c.b1, c.polar});
  } else {
    out.push_back({c.a0, c.a1, c.b0, bm, c.polar});
    out.push_back({c.a0, c.a1, bm, c.b1, c.polar});
  }
}

}  // namespace

Region Region::unit_square() { return {}; }

Region Region::square_minus_ball(Point center, double rho) {
  if (!(rho > 0.0)) throw std::domain_error("square_minus_ball: rho must be positive");
  Region r;
  r.kind = Kind::square_minus_ball;
  r.center = center;
  r.rho = rho;
  return r;
}

Region Region::ball_intersect_square(Point center, double rho) {
  if (!(rho > 0.0)) throw std::domain_error("ball_intersect_square: rho must be positive");
  if (!(center.x >= 0.0 && center.x <= 1.0 && center.y >= 0.0 && center.y <= 1.0)) {
    throw std::domain_error("ball_intersect_square: centre outside the unit square");
  }
  Region r;
  r.kind = Kind::ball_intersect_square;
  r.center = center;
  r.rho = rho;
  return r;
}

Region Region::strip_window(double xi0, double xi1, double eta0, double eta1) {
  if (!(xi0 >= 0.0 && xi1 <= 1.0 && xi0 < xi1 && eta0 < eta1) || !std::isfinite(eta0) ||
      !std::isfinite(eta1)) {
    throw std::domain_error("strip_window: need 0 <= xi0 < xi1 <= 1 and finite eta0 < eta1");
  }
  Region r;
  r.kind = Kind::strip_window;
  r.xi0 = xi0;
  r.xi1 = xi1;
  r.eta0 = eta0;
  r.eta1 = eta1;
  return r;
}

std::string Region::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case Kind::unit_square: os << "unit_square"; break;
    case Kind::square_minus_ball:
      os << "square_minus_ball(" << center.x << "," << center.y << ";" << rho << ")";
      break;
    case Kind::ball_intersect_square:
      os << "ball_intersect_square(" << center.x << "," << center.y << ";" << rho << ")";
      break;
    case Kind::strip_window:
      os << "strip_window(" << xi0 << "," << xi1 << ";" << eta0 << "," << eta1 << ")";
      break;
  }
  return os.str();
}

NormResult integrate(const Integrand& integrand, const Region& region, const Options& opts) {
  if (!integrand.f) throw std::invalid_argument("integrate: empty integrand");
  if (!(opts.tol > 0.0) || opts.tol_abs < 0.0) {
    throw std::invalid_argument("integrate: tol must be positive");
  }
  if (!(integrand.eps > 0.0)) throw std::invalid_argument("integrate: eps must be positive");

  Layout lay = build_layout(integrand, region);
  std::vector<Cell> cells = std::move(lay.cells);
  NormResult res;
  res.integrand_id = integrand.id;
  evaluate_range(cells, 0, lay, integrand.f, opts.parallel);
  res.evaluations = 49 * cells.size();

  std::vector<std::size_t> order;
  std::vector<char> chosen;
  for (;;) {
    res.value = neumaier(cells, &Cell::value);
    res.abs_error_estimate = neumaier(cells, &Cell::err);
    res.cells_used = cells.size();
    const double target = std::max(opts.tol * std::abs(res.value), opts.tol_abs);
    if (res.abs_error_estimate <= target) return res;

    order.resize(cells.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return cells[a].err > cells[b].err; });
    chosen.assign(cells.size(), 0);
    double remaining = res.abs_error_estimate;
    for (std::size_t idx : order) {
      if (remaining <= 0.5 * target && idx != order.front()) break;
      chosen[idx] = 1;
      remaining -= cells[idx].err;
    }

    std::vector<Cell> kept, fresh;
    kept.reserve(cells.size());
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (chosen[k]) split(cells[k], fresh);
      else kept.push_back(cells[k]);
    }
    if (kept.size() + fresh.size() > opts.max_cells) {
      throw BudgetExceeded("quadrature: cell budget of " + std::to_string(opts.max_cells) +
                               " exceeded for " + integrand.id + " over " + region.describe(),
                           res);
    }
    const std::size_t first_new = kept.size();
    kept.insert(kept.end(), fresh.begin(), fresh.end());
    cells = std::move(kept);
    evaluate_range(cells, first_new, lay, integrand.f, opts.parallel);
    res.evaluations += 49 * fresh.size();
  }
}

Integrand image_norm_integrand(const ImageGreenSpec& spec, Point singular,
                               std::vector<DerivKind> kinds) {
  if (kinds.empty()) throw std::invalid_argument("image_norm_integrand: no derivative kinds");
  Integrand in;
  in.singular = singular;
  in.eps = spec.eps;
  in.id = std::string(to_string(spec.variant)) + ":";
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    in.id += (i ? "+" : "") + std::string(to_string(kinds[i]));
  }
  in.f = [spec, singular, kinds = std::move(kinds)](Point p) {
    const KindValues k = eval_image_all(spec, singular, p);
    double s = 0.0;
    for (DerivKind kind : kinds) s += std::abs(k[kind]);
    return s;
  };
  return in;
}

Integrand defect_integrand(const ImageGreenSpec& spec, Point singular) {
  if (!is_bar(spec.variant) || !spec.field->constant_b_zero()) {
    throw std::domain_error("defect_integrand: needs a bar variant with constant a and b = 0");
  }
  Integrand in;
  in.singular = singular;
  in.eps = spec.eps;
  in.id = std::string(to_string(spec.variant)) + ":defect";
  in.f = [spec, singular](Point p) { return std::abs(frozen_residual(spec, singular, p).value); };
  return in;
}

Integrand fundamental_integrand(const FrozenParams& params, DerivKind kind) {
  Integrand in;
  in.singular = params.singular();
  in.eps = params.eps();
  in.id = "g:" + std::string(to_string(kind));
  in.f = [params, kind](Point p) { return std::abs(eval_g(params, p, kind)); };
  return in;
}

}  // namespace cdg::quad
