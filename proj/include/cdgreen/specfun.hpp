#pragma once

// Modified Bessel functions of the second kind, orders 0 and 1.
//
// The unscaled functions underflow gracefully to 0.0 once e^{-s} leaves the
// double range. Code that multiplies K_n by a large exponential (all of the
// Green's-function assembly) must use the scaled variants K_n(s) e^{s}.

namespace cdg::specfun {

struct BesselEval {
  double argument = 0.0;
  double value = 0.0;         // K_n(s)
  double scaled_value = 0.0;  // K_n(s) e^{s}
};

// Both scaled orders at once; the continued-fraction branch produces them
// together, so callers needing K0 and K1 should prefer this.
struct ScaledPair {
  double k0 = 0.0;
  double k1 = 0.0;
};

double bessel_k0(double s);
double bessel_k1(double s);
double bessel_k0_scaled(double s);
double bessel_k1_scaled(double s);

ScaledPair bessel_k01_scaled(double s);

BesselEval eval_k0(double s);
BesselEval eval_k1(double s);

}  // namespace cdg::specfun
