#pragma once

#include <array>
#include <string_view>

#include "cdgreen/geometry.hpp"

namespace cdg {

// Parameter pack of the frozen-coefficient fundamental solution
//   g(x,y; xi,eta; q) = 1/(2 pi eps) e^{q xi_hat} K0(q r_hat).
class FrozenParams {
 public:
  // Throws std::domain_error unless q > 0, eps in (0,1], x in [-1,3] and all
  // entries are finite.
  FrozenParams(Point singular, double q, double eps);

  // Additionally enforces q >= alpha/2 for a coefficient lower bound alpha.
  static FrozenParams with_alpha(Point singular, double q, double eps, double alpha);

  Point singular() const { return singular_; }
  double x() const { return singular_.x; }
  double y() const { return singular_.y; }
  double q() const { return q_; }
  double eps() const { return eps_; }

 private:
  Point singular_;
  double q_;
  double eps_;
};

struct HatCoords {
  double xi_hat = 0.0;
  double eta_hat = 0.0;
  double r_hat = 0.0;
};

HatCoords hat_coords(const FrozenParams& params, Point field);

// lambda = e^{2q(x-1)/eps}, lambda^{+-} = e^{2q(1+-x)/eps}, p = e^{-2qx/eps}.
// Only the logarithms are stored; lambda^{+-} overflow for small eps.
struct Weights {
  double log_lambda = 0.0;
  double log_lambda_plus = 0.0;
  double log_lambda_minus = 0.0;
  double log_p = 0.0;

  double lambda() const;
  double lambda_plus() const;
  double lambda_minus() const;
  double p() const;
};

Weights weights(const FrozenParams& params);

enum class DerivKind {
  value,
  d_xi,
  d_eta,
  d_q,
  d2_xi_xi,
  d2_xi_eta,
  d2_eta_eta,
  d2_xi_q,
  d_x,
  d_y,
  full_D_eta,
  full_D_y,
};

inline constexpr std::array<DerivKind, 12> kAllDerivKinds = {
    DerivKind::value,    DerivKind::d_xi,      DerivKind::d_eta,      DerivKind::d_q,
    DerivKind::d2_xi_xi, DerivKind::d2_xi_eta, DerivKind::d2_eta_eta, DerivKind::d2_xi_q,
    DerivKind::d_x,      DerivKind::d_y,       DerivKind::full_D_eta, DerivKind::full_D_y,
};

std::string_view to_string(DerivKind kind);
// Throws std::invalid_argument for unknown names.
DerivKind deriv_kind_from_string(std::string_view name);

// Coefficient partials entering the full derivatives
//   D_eta = d_eta + 1/2 a_eta(xi,eta) d_q,   D_y = d_y + 1/2 a_y(x,y) d_q.
struct ChainPartials {
  double da_deta = 0.0;
  double da_dy = 0.0;
};

// g and its derivatives in scaled form: every entry must be multiplied by
// exp(log_scale) to obtain the true value. The factors stay O(1) in the
// far field, so callers can fold further exponentials (image weights) into
// log_scale before materialising anything.
struct GJet {
  double v = 0.0;
  double xi = 0.0;
  double eta = 0.0;
  double q = 0.0;
  double xixi = 0.0;
  double xieta = 0.0;
  double etaeta = 0.0;
  double xiq = 0.0;
  double r_hat = 0.0;
};

// Factors of the jet at offset (xi - x, eta - y); the matching exponent is
// q (xi_hat - r_hat). Throws SingularPointError when the offset is zero.
GJet scaled_jet(double q, double eps, double dxi, double deta);

// Stable evaluation of xi_hat - r_hat (<= 0).
double upwind_exponent(double xi_hat, double eta_hat, double r_hat);

double eval_g(const FrozenParams& params, Point field, DerivKind kind,
              ChainPartials chain = {});

// Three-dimensional analogue g3 = 1/(4 pi eps r) e^{q(xi1 - x1 - r)/eps},
// with r the Euclidean distance.
struct FrozenParams3 {
  Point3 source;
  double q = 0.0;
  double eps = 0.0;
};

double eval_g3(const FrozenParams3& params, Point3 field);

}  // namespace cdg
