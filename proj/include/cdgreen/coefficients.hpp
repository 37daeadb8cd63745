#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cdgreen/geometry.hpp"

namespace cdg {

// Coefficients a(x,y), b(x,y) of  -eps Lap u - (a u)_x + b u = f, with the
// analytic partials of a. Construction validates
//   a >= alpha > 0,  b >= 0,  b - a_x >= 0
// on a 64x64 grid over the closed unit square.
class CoefficientField {
 public:
  using Fn = std::function<double(double, double)>;

  struct Functions {
    Fn a;
    Fn a_x;
    Fn a_y;
    Fn b;
  };

  CoefficientField(std::string name, Functions fns, double alpha, bool constant = false);

  static CoefficientField constant(double a, double b = 0.0);
  // a = 1 + sin(pi x) cos(pi y)/4, b = 1; alpha = 3/4.
  static CoefficientField smooth();
  // a = 1 + 2 y (1 - y), b = 0; a depends on y only, alpha = 1.
  static CoefficientField shear();

  // Preset lookup by name: "constant" (uses a0, b0), "smooth", "shear".
  static CoefficientField preset(const std::string& name, double a0 = 1.0, double b0 = 0.0);
  static std::vector<std::string> preset_names();

  double a(Point p) const { return fns_.a(p.x, p.y); }
  double a_x(Point p) const { return fns_.a_x(p.x, p.y); }
  double a_y(Point p) const { return fns_.a_y(p.x, p.y); }
  double b(Point p) const { return fns_.b(p.x, p.y); }

  double alpha() const { return alpha_; }
  const std::string& name() const { return name_; }
  // a and b are constants and b == 0 is not implied; see constant_b_zero().
  bool is_constant() const { return constant_; }
  bool constant_b_zero() const;

 private:
  std::string name_;
  Functions fns_;
  double alpha_;
  bool constant_;
};

}  // namespace cdg
