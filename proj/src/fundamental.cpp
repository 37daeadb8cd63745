#include "cdgreen/fundamental.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "cdgreen/specfun.hpp"

namespace cdg {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool finite_all(double a, double b, double c, double d) {
  return std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(d);
}

}  // namespace

FrozenParams::FrozenParams(Point singular, double q, double eps)
    : singular_(singular), q_(q), eps_(eps) {
  if (!finite_all(singular.x, singular.y, q, eps)) {
    throw std::domain_error("FrozenParams: non-finite parameter");
  }
  if (q <= 0.0) throw std::domain_error("FrozenParams: q must be positive");
  if (eps <= 0.0 || eps > 1.0) throw std::domain_error("FrozenParams: eps must lie in (0,1]");
  if (singular.x < -1.0 || singular.x > 3.0) {
    throw std::domain_error("FrozenParams: singular abscissa outside [-1,3]");
  }
}

FrozenParams FrozenParams::with_alpha(Point singular, double q, double eps, double alpha) {
  if (!(alpha > 0.0)) throw std::domain_error("FrozenParams: alpha must be positive");
  if (q < 0.5 * alpha) {
    throw std::domain_error("FrozenParams: q=" + std::to_string(q) + " below alpha/2");
  }
  return FrozenParams(singular, q, eps);
}

HatCoords hat_coords(const FrozenParams& params, Point field) {
  HatCoords h;
  h.xi_hat = (field.x - params.x()) / params.eps();
  h.eta_hat = (field.y - params.y()) / params.eps();
  h.r_hat = std::hypot(h.xi_hat, h.eta_hat);
  return h;
}

double Weights::lambda() const { return std::exp(log_lambda); }
double Weights::lambda_plus() const { return std::exp(log_lambda_plus); }
double Weights::lambda_minus() const { return std::exp(log_lambda_minus); }
double Weights::p() const { return std::exp(log_p); }

Weights weights(const FrozenParams& params) {
  const double s = 2.0 * params.q() / params.eps();
  Weights w;
  w.log_lambda = s * (params.x() - 1.0);
  w.log_lambda_plus = s * (1.0 + params.x());
  w.log_lambda_minus = s * (1.0 - params.x());
  w.log_p = -s * params.x();
  return w;
}

std::string_view to_string(DerivKind kind) {
  switch (kind) {
    case DerivKind::value: return "value";
    case DerivKind::d_xi: return "d_xi";
    case DerivKind::d_eta: return "d_eta";
    case DerivKind::d_q: return "d_q";
    case DerivKind::d2_xi_xi: return "d2_xi_xi";
    case DerivKind::d2_xi_eta: return "d2_xi_eta";
    case DerivKind::d2_eta_eta: return "d2_eta_eta";
    case DerivKind::d2_xi_q: return "d2_xi_q";
    case DerivKind::d_x: return "d_x";
    case DerivKind::d_y: return "d_y";
    case DerivKind::full_D_eta: return "full_D_eta";
    case DerivKind::full_D_y: return "full_D_y";
  }
  return "unknown";
}

DerivKind deriv_kind_from_string(std::string_view name) {
  for (DerivKind k : kAllDerivKinds) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown derivative kind '" + std::string(name) + "'");
}

double upwind_exponent(double xi_hat, double eta_hat, double r_hat) {
  if (xi_hat > 0.0) return -eta_hat * eta_hat / (r_hat + xi_hat);
  return xi_hat - r_hat;
}

GJet scaled_jet(double q, double eps, double dxi, double deta) {
  const double xh = dxi / eps;
  const double eh = deta / eps;
  const double r = std::hypot(xh, eh);
  if (r == 0.0) throw SingularPointError("fundamental solution evaluated at its source point");

  const specfun::ScaledPair k = specfun::bessel_k01_scaled(q * r);
  const double k0 = k.k0;
  const double k1 = k.k1;
  const double cx = xh / r;
  const double ce = eh / r;
  const double r2 = r * r;
  const double r3 = r2 * r;

  const double c1 = 1.0 / (kTwoPi * eps);
  const double c2 = q / (kTwoPi * eps * eps);
  const double c3 = c2 / eps;

  GJet j;
  j.r_hat = r;
  j.v = c1 * k0;
  j.xi = c2 * (k0 - cx * k1);
  j.eta = -c2 * ce * k1;
  j.q = c1 * (xh * k0 - r * k1);
  j.xieta = c3 * (eh / r2) * (q * r * (cx * k0 - k1) + 2.0 * cx * k1);
  j.etaeta = c3 * (q * ce * ce * k0 + (eh * eh - xh * xh) / r3 * k1);
  j.xixi = c3 * (q * (k0 + cx * cx * k0 - 2.0 * cx * k1) + (xh * xh - eh * eh) / r3 * k1);
  j.xiq = c2 / r * (xh * r * (2.0 * k0 + k1 / (q * r)) - (xh * xh + r2) * k1) + j.xi / q;
  return j;
}

double eval_g(const FrozenParams& params, Point field, DerivKind kind, ChainPartials chain) {
  const double q = params.q();
  const GJet j = scaled_jet(q, params.eps(), field.x - params.x(), field.y - params.y());
  const double xh = (field.x - params.x()) / params.eps();
  const double eh = (field.y - params.y()) / params.eps();
  const double scale = std::exp(q * upwind_exponent(xh, eh, j.r_hat));

  double f = 0.0;
  switch (kind) {
    case DerivKind::value: f = j.v; break;
    case DerivKind::d_xi: f = j.xi; break;
    case DerivKind::d_eta: f = j.eta; break;
    case DerivKind::d_q: f = j.q; break;
    case DerivKind::d2_xi_xi: f = j.xixi; break;
    case DerivKind::d2_xi_eta: f = j.xieta; break;
    case DerivKind::d2_eta_eta: f = j.etaeta; break;
    case DerivKind::d2_xi_q: f = j.xiq; break;
    case DerivKind::d_x: f = -j.xi; break;
    case DerivKind::d_y: f = -j.eta; break;
    case DerivKind::full_D_eta: f = j.eta + 0.5 * chain.da_deta * j.q; break;
    case DerivKind::full_D_y: f = -j.eta + 0.5 * chain.da_dy * j.q; break;
  }
  return f * scale;
}

double eval_g3(const FrozenParams3& params, Point3 field) {
  if (!(params.q > 0.0) || !(params.eps > 0.0) || params.eps > 1.0) {
    throw std::domain_error("eval_g3: need q > 0 and eps in (0,1]");
  }
  const double d1 = field.x1 - params.source.x1;
  const double d2 = field.x2 - params.source.x2;
  const double d3 = field.x3 - params.source.x3;
  const double r = std::sqrt(d1 * d1 + d2 * d2 + d3 * d3);
  if (r == 0.0) throw SingularPointError("eval_g3 evaluated at its source point");
  // d1 - r <= 0; written as -(d2^2+d3^2)/(r+d1) downstream to avoid cancellation
  const double expo = d1 > 0.0 ? -(d2 * d2 + d3 * d3) / (r + d1) : d1 - r;
  return std::exp(params.q * expo / params.eps) / (4.0 * std::numbers::pi * params.eps * r);
}

}  // namespace cdg
