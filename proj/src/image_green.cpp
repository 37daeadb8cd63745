#include "cdgreen/image_green.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cdgreen/cutoff.hpp"

namespace cdg {
namespace {

// exp() of anything below this is exactly zero in binary64
constexpr double kUnderflowExponent = -746.0;

// Partial derivatives of one image-sum building block with respect to
// (xi, eta, q, x, y), q treated as an independent variable.
struct Jet {
  double v = 0.0;
  double xi = 0.0;
  double eta = 0.0;
  double q = 0.0;
  double xixi = 0.0;
  double xieta = 0.0;
  double etaeta = 0.0;
  double xiq = 0.0;
  double x = 0.0;
  double y = 0.0;

  Jet& operator-=(const Jet& o) {
    v -= o.v; xi -= o.xi; eta -= o.eta; q -= o.q;
    xixi -= o.xixi; xieta -= o.xieta; etaeta -= o.etaeta; xiq -= o.xiq;
    x -= o.x; y -= o.y;
    return *this;
  }
  Jet& operator+=(const Jet& o) {
    v += o.v; xi += o.xi; eta += o.eta; q += o.q;
    xixi += o.xixi; xieta += o.xieta; etaeta += o.etaeta; xiq += o.xiq;
    x += o.x; y += o.y;
    return *this;
  }
  Jet scaled(double s) const {
    return {v * s, xi * s, eta * s, q * s, xixi * s, xieta * s, etaeta * s, xiq * s, x * s, y * s};
  }
};

// One image source at abscissa d = sigma*x + c. The term is
//   T_d = 1/(2 pi eps) e^{q (xi - x)/eps} K0(q r_hat_d)
//       = e^{q (d - x)/eps} g(d, y; xi, eta; q),
// with every exponential folded into a single exponent so that the huge
// image weights never materialise on their own.
struct Source {
  double dxi;    // xi - d, arranged so mirrored pairs agree bitwise on the boundary
  double shift;  // (d - x) / eps
  double sigma;  // dd/dx
};

Jet term(double q, double eps, double xi_hat_x, const Source& src, double deta) {
  const double r = std::hypot(src.dxi / eps, deta / eps);
  const double expo = q * (xi_hat_x - r);
  if (expo < kUnderflowExponent) return {};
  const GJet g = scaled_jet(q, eps, src.dxi, deta);
  const double e = std::exp(expo);
  Jet t;
  t.v = g.v * e;
  t.xi = g.xi * e;
  t.eta = g.eta * e;
  t.xixi = g.xixi * e;
  t.xieta = g.xieta * e;
  t.etaeta = g.etaeta * e;
  t.q = (src.shift * g.v + g.q) * e;
  t.xiq = (src.shift * g.xi + g.xiq) * e;
  t.x = (q * (src.sigma - 1.0) / eps * g.v - src.sigma * g.xi) * e;
  t.y = -g.eta * e;
  return t;
}

Source src_x(double x, double xi) { return {xi - x, 0.0, 1.0}; }
Source src_minus_x(double x, double xi, double eps) { return {xi + x, -2.0 * x / eps, -1.0}; }
Source src_two_minus_x(double x, double xi, double eps) {
  return {(xi - 1.0) - (1.0 - x), (2.0 - 2.0 * x) / eps, -1.0};
}
Source src_two_plus_x(double x, double xi, double eps) {
  return {(xi - 1.0) - (1.0 + x), 2.0 / eps, 1.0};
}

// Strip (0,1) x R, q frozen at the singular point:
//   [T_x - T_{-x}] - [T_{2-x} - T_{2+x}] omega1(xi)
Jet strip_bar(double x, double y, double xi, double eta, double q, double eps) {
  const double xh = (xi - x) / eps;
  const double deta = eta - y;
  Jet out = term(q, eps, xh, src_x(x, xi), deta);
  out -= term(q, eps, xh, src_minus_x(x, xi, eps), deta);

  const CutoffJet w = cutoff_jet(CutoffKind::omega1, xi);
  if (w.zero()) return out;
  Jet b = term(q, eps, xh, src_two_minus_x(x, xi, eps), deta);
  b -= term(q, eps, xh, src_two_plus_x(x, xi, eps), deta);

  Jet wb = b.scaled(w.w);
  wb.xi += w.d1 * b.v;
  wb.xixi += 2.0 * w.d1 * b.xi + w.d2 * b.v;
  wb.xieta += w.d1 * b.eta;
  wb.xiq += w.d1 * b.q;
  out -= wb;
  return out;
}

// Strip (0,1) x R, q frozen at the field point:
//   [T_x - T_{2-x}] - [T_{-x} - T_{2+x}] omega0(x)
Jet strip_tilde(double x, double y, double xi, double eta, double q, double eps) {
  const double xh = (xi - x) / eps;
  const double deta = eta - y;
  Jet out = term(q, eps, xh, src_x(x, xi), deta);
  out -= term(q, eps, xh, src_two_minus_x(x, xi, eps), deta);

  const CutoffJet w = cutoff_jet(CutoffKind::omega0, x);
  if (w.zero()) return out;
  Jet b = term(q, eps, xh, src_minus_x(x, xi, eps), deta);
  b -= term(q, eps, xh, src_two_plus_x(x, xi, eps), deta);

  Jet wb = b.scaled(w.w);
  wb.x += w.d1 * b.v;
  out -= wb;
  return out;
}

// omega(eta) * S(xi, c - eta): reflection flips odd eta-derivatives, then
// the product rule brings in the cut-off derivatives.
Jet reflected_in_eta(const Jet& s, const CutoffJet& w) {
  Jet r = s;
  r.eta = -s.eta;
  r.xieta = -s.xieta;
  Jet out = r.scaled(w.w);
  out.eta += w.d1 * r.v;
  out.xieta += w.d1 * r.xi;
  out.etaeta += w.d2 * r.v + 2.0 * w.d1 * r.eta;
  return out;
}

// omega(y) * S(x, c - y; xi, eta)
Jet reflected_in_y(const Jet& s, const CutoffJet& w) {
  Jet r = s;
  r.y = -s.y;
  Jet out = r.scaled(w.w);
  out.y += w.d1 * r.v;
  return out;
}

void check_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::domain_error(std::string("image Green's function: ") + what +
                            " outside [0,1]: " + std::to_string(v));
  }
}

struct Evaluated {
  Jet jet;
  double q = 0.0;
};

Evaluated evaluate(const ImageGreenSpec& spec, Point s, Point f) {
  check_unit(s.x, "singular x");
  check_unit(f.x, "field xi");
  if (is_square(spec.variant)) {
    check_unit(s.y, "singular y");
    check_unit(f.y, "field eta");
  } else if (!std::isfinite(s.y) || !std::isfinite(f.y)) {
    throw std::domain_error("image Green's function: non-finite ordinate");
  }
  if (s.x == f.x && s.y == f.y) {
    throw SingularPointError("image Green's function evaluated at the singular point");
  }

  const double eps = spec.eps;
  const bool bar = is_bar(spec.variant);
  const double q = 0.5 * (bar ? spec.field->a(s) : spec.field->a(f));
  const double sign = is_neumann(spec.variant) ? 1.0 : -1.0;

  Evaluated out;
  out.q = q;
  if (bar) {
    out.jet = strip_bar(s.x, s.y, f.x, f.y, q, eps);
    if (!is_square(spec.variant)) return out;
    const CutoffJet w0 = cutoff_jet(CutoffKind::omega0, f.y);
    const CutoffJet w1 = cutoff_jet(CutoffKind::omega1, f.y);
    if (!w0.zero()) {
      out.jet += reflected_in_eta(strip_bar(s.x, s.y, f.x, -f.y, q, eps), w0).scaled(sign);
    }
    if (!w1.zero()) {
      out.jet += reflected_in_eta(strip_bar(s.x, s.y, f.x, 2.0 - f.y, q, eps), w1).scaled(sign);
    }
  } else {
    out.jet = strip_tilde(s.x, s.y, f.x, f.y, q, eps);
    if (!is_square(spec.variant)) return out;
    const CutoffJet w0 = cutoff_jet(CutoffKind::omega0, s.y);
    const CutoffJet w1 = cutoff_jet(CutoffKind::omega1, s.y);
    if (!w0.zero()) {
      out.jet += reflected_in_y(strip_tilde(s.x, -s.y, f.x, f.y, q, eps), w0).scaled(sign);
    }
    if (!w1.zero()) {
      out.jet += reflected_in_y(strip_tilde(s.x, 2.0 - s.y, f.x, f.y, q, eps), w1).scaled(sign);
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(ImageVariant v) {
  switch (v) {
    case ImageVariant::bar_strip: return "bar_strip";
    case ImageVariant::tilde_strip: return "tilde_strip";
    case ImageVariant::bar_square: return "bar_square";
    case ImageVariant::tilde_square: return "tilde_square";
    case ImageVariant::bar_square_neumann: return "bar_square_neumann";
    case ImageVariant::tilde_square_neumann: return "tilde_square_neumann";
  }
  return "unknown";
}

ImageVariant image_variant_from_string(std::string_view name) {
  for (ImageVariant v : {ImageVariant::bar_strip, ImageVariant::tilde_strip,
                         ImageVariant::bar_square, ImageVariant::tilde_square,
                         ImageVariant::bar_square_neumann, ImageVariant::tilde_square_neumann}) {
    if (to_string(v) == name) return v;
  }
  throw std::invalid_argument("unknown image variant '" + std::string(name) + "'");
}

bool is_bar(ImageVariant v) {
  return v == ImageVariant::bar_strip || v == ImageVariant::bar_square ||
         v == ImageVariant::bar_square_neumann;
}

bool is_square(ImageVariant v) {
  return v != ImageVariant::bar_strip && v != ImageVariant::tilde_strip;
}

bool is_neumann(ImageVariant v) {
  return v == ImageVariant::bar_square_neumann || v == ImageVariant::tilde_square_neumann;
}

ImageGreenSpec::ImageGreenSpec(ImageVariant v, std::shared_ptr<const CoefficientField> f,
                               double e)
    : variant(v), field(std::move(f)), eps(e) {
  if (!field) throw std::invalid_argument("ImageGreenSpec: null coefficient field");
  if (!(eps > 0.0 && eps <= 1.0)) throw std::domain_error("ImageGreenSpec: eps must lie in (0,1]");
}

ImageGreenSpec::ImageGreenSpec(ImageVariant v, const CoefficientField& f, double e)
    : ImageGreenSpec(v, std::make_shared<const CoefficientField>(f), e) {}

KindValues eval_image_all(const ImageGreenSpec& spec, Point singular, Point field) {
  const Evaluated ev = evaluate(spec, singular, field);
  const Jet& j = ev.jet;
  KindValues k;
  k[DerivKind::value] = j.v;
  k[DerivKind::d_xi] = j.xi;
  k[DerivKind::d_eta] = j.eta;
  k[DerivKind::d_q] = j.q;
  k[DerivKind::d2_xi_xi] = j.xixi;
  k[DerivKind::d2_xi_eta] = j.xieta;
  k[DerivKind::d2_eta_eta] = j.etaeta;
  k[DerivKind::d2_xi_q] = j.xiq;
  k[DerivKind::d_x] = j.x;
  k[DerivKind::d_y] = j.y;
  if (is_bar(spec.variant)) {
    k[DerivKind::full_D_eta] = j.eta;
    k[DerivKind::full_D_y] = j.y + 0.5 * spec.field->a_y(singular) * j.q;
  } else {
    k[DerivKind::full_D_eta] = j.eta + 0.5 * spec.field->a_y(field) * j.q;
    k[DerivKind::full_D_y] = j.y;
  }
  return k;
}

double eval_image(const ImageGreenSpec& spec, Point singular, Point field, DerivKind kind) {
  return eval_image_all(spec, singular, field)[kind];
}

FrozenResidual frozen_residual(const ImageGreenSpec& spec, Point singular, Point field) {
  if (!is_bar(spec.variant)) {
    throw std::domain_error("frozen_residual: only bar variants solve the frozen adjoint operator");
  }
  if (!spec.field->constant_b_zero()) {
    throw std::domain_error("frozen_residual: requires constant a and b = 0");
  }
  const Evaluated ev = evaluate(spec, singular, field);
  const double a = 2.0 * ev.q;
  const double diff_xi = -spec.eps * ev.jet.xixi;
  const double diff_eta = -spec.eps * ev.jet.etaeta;
  const double conv = a * ev.jet.xi;
  FrozenResidual r;
  r.value = diff_xi + diff_eta + conv;
  r.scale = std::max({std::abs(diff_xi), std::abs(diff_eta), std::abs(conv)});
  return r;
}

}  // namespace cdg
