#include "cdgreen/cutoff.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cdg {
namespace {

constexpr double kLow = 2.0 / 3.0;
constexpr double kHigh = 5.0 / 6.0;
constexpr double kWidth = kHigh - kLow;

CutoffJet omega0(double t) {
  if (t <= kLow) return {1.0, 0.0, 0.0};
  if (t >= kHigh) return {0.0, 0.0, 0.0};
  const double u = (t - kLow) / kWidth;
  const double s = u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
  const double ds = 30.0 * u * u * (1.0 - u) * (1.0 - u);
  const double dds = 60.0 * u * (1.0 - u) * (1.0 - 2.0 * u);
  return {1.0 - s, -ds / kWidth, -dds / (kWidth * kWidth)};
}

}  // namespace

CutoffJet cutoff_jet(CutoffKind kind, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::domain_error("cutoff: argument " + std::to_string(t) + " outside [0,1]");
  }
  if (kind == CutoffKind::omega0) return omega0(t);
  const CutoffJet j = omega0(1.0 - t);
  return {j.w, -j.d1, j.d2};
}

double cutoff(CutoffKind kind, double t, int deriv) {
  const CutoffJet j = cutoff_jet(kind, t);
  switch (deriv) {
    case 0: return j.w;
    case 1: return j.d1;
    case 2: return j.d2;
    default: throw std::domain_error("cutoff: derivative order must be 0, 1 or 2");
  }
}

}  // namespace cdg
