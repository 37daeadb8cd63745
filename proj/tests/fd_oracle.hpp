#pragma once

#include <algorithm>
#include <cmath>
#include <functional>

namespace cdg::testing {

inline double central_diff(const std::function<double(double)>& f, double t, double h) {
  return (f(t + h) - f(t - h)) / (2.0 * h);
}

// |a - b| <= tol * max(|a|, |b|, floor); floor keeps derivatives that vanish
// on symmetry lines from demanding a relative match of pure rounding noise.
inline bool close_rel(double a, double b, double tol, double floor) {
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), floor});
}

}  // namespace cdg::testing
