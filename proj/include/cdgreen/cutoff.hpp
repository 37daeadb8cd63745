#pragma once

namespace cdg {

enum class CutoffKind { omega0, omega1 };

// C^2 plateau functions: omega0 = 1 on [0, 2/3], 0 on [5/6, 1], joined by the
// quintic smoothstep; omega1(t) = omega0(1 - t). deriv selects the value or
// its first/second derivative. Throws std::domain_error for t outside [0,1]
// or deriv outside {0,1,2}.
double cutoff(CutoffKind kind, double t, int deriv = 0);

struct CutoffJet {
  double w = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  bool zero() const { return w == 0.0 && d1 == 0.0 && d2 == 0.0; }
};

CutoffJet cutoff_jet(CutoffKind kind, double t);

}  // namespace cdg
