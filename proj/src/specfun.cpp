#include "cdgreen/specfun.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cdg::specfun {
namespace {

constexpr double kSeriesLimit = 2.0;
constexpr int kMaxIter = 10000;

void check_argument(double s) {
  if (!std::isfinite(s) || s <= 0.0) {
    throw std::domain_error("Bessel K: argument must be positive and finite, got " +
                            std::to_string(s));
  }
}

// Power series around s = 0 (A&S 9.6.13 and 9.6.11). Unscaled.
ScaledPair series(double s) {
  const double t = 0.25 * s * s;
  const double log_half = std::log(0.5 * s);
  const double gamma = std::numbers::egamma;

  double term0 = 1.0;   // t^k / (k!)^2
  double term1 = 1.0;   // t^k / (k! (k+1)!)
  double harmonic = 0.0;
  double i0 = 1.0;
  double i1 = 1.0;
  double k0_tail = 0.0;
  // psi(k+1) + psi(k+2) = 2 H_k + 1/(k+1) - 2 gamma
  double k1_tail = (1.0 - 2.0 * gamma);
  for (int k = 1; k < 200; ++k) {
    const double kd = static_cast<double>(k);
    term0 *= t / (kd * kd);
    term1 *= t / (kd * (kd + 1.0));
    harmonic += 1.0 / kd;
    i0 += term0;
    i1 += term1;
    k0_tail += term0 * harmonic;
    k1_tail += term1 * (2.0 * harmonic + 1.0 / (kd + 1.0) - 2.0 * gamma);
    if (term0 * harmonic < 1e-18 * std::abs(k0_tail) && term1 < 1e-18 * i1) break;
  }
  i1 *= 0.5 * s;

  ScaledPair out;
  out.k0 = -(log_half + gamma) * i0 + k0_tail;
  out.k1 = 1.0 / s + log_half * i1 - 0.25 * s * k1_tail;
  return out;
}

// Steed's continued fraction (Temme's CF2 for order 0), valid for s >= 2.
// Returns scaled values directly.
ScaledPair continued_fraction(double s) {
  constexpr double a1 = 0.25;
  double b = 2.0 * (1.0 + s);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  double q = a1;
  double c = a1;
  double a = -a1;
  double sum = 1.0 + q * delh;
  int i = 1;
  for (; i < kMaxIter; ++i) {
    const double id = static_cast<double>(i);
    a -= 2.0 * id;
    c = -a * c / (id + 1.0);
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    sum += dels;
    if (std::abs(dels / sum) < 1e-17) break;
  }
  if (i == kMaxIter) {
    throw std::runtime_error("Bessel K: continued fraction failed to converge at s=" +
                             std::to_string(s));
  }
  h *= a1;
  ScaledPair out;
  out.k0 = std::sqrt(std::numbers::pi / (2.0 * s)) / sum;
  out.k1 = out.k0 * (s + 0.5 - h) / s;
  return out;
}

}  // namespace

ScaledPair bessel_k01_scaled(double s) {
  check_argument(s);
  if (s <= kSeriesLimit) {
    ScaledPair p = series(s);
    const double e = std::exp(s);
    p.k0 *= e;
    p.k1 *= e;
    return p;
  }
  return continued_fraction(s);
}

double bessel_k0_scaled(double s) { return bessel_k01_scaled(s).k0; }
double bessel_k1_scaled(double s) { return bessel_k01_scaled(s).k1; }

double bessel_k0(double s) {
  check_argument(s);
  if (s <= kSeriesLimit) return series(s).k0;
  return continued_fraction(s).k0 * std::exp(-s);
}

double bessel_k1(double s) {
  check_argument(s);
  if (s <= kSeriesLimit) return series(s).k1;
  return continued_fraction(s).k1 * std::exp(-s);
}

BesselEval eval_k0(double s) {
  return {s, bessel_k0(s), bessel_k0_scaled(s)};
}

BesselEval eval_k1(double s) {
  return {s, bessel_k1(s), bessel_k1_scaled(s)};
}

}  // namespace cdg::specfun
