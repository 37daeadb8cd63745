#include "cdgreen/coefficients.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace cdg {

CoefficientField::CoefficientField(std::string name, Functions fns, double alpha, bool constant)
    : name_(std::move(name)), fns_(std::move(fns)), alpha_(alpha), constant_(constant) {
  if (!fns_.a || !fns_.a_x || !fns_.a_y || !fns_.b) {
    throw std::invalid_argument("CoefficientField '" + name_ + "': missing function");
  }
  if (!(alpha_ > 0.0)) {
    throw std::domain_error("CoefficientField '" + name_ + "': alpha must be positive");
  }
  constexpr int n = 64;
  constexpr double slack = 1e-12;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double x = static_cast<double>(i) / (n - 1);
      const double y = static_cast<double>(j) / (n - 1);
      const double av = fns_.a(x, y);
      const double bv = fns_.b(x, y);
      const double ax = fns_.a_x(x, y);
      const char* violated = nullptr;
      if (!(av >= alpha_ - slack)) violated = "a >= alpha";
      else if (!(bv >= -slack)) violated = "b >= 0";
      else if (!(bv - ax >= -slack)) violated = "b - a_x >= 0";
      if (violated) {
        std::ostringstream msg;
        msg << "CoefficientField '" << name_ << "': " << violated << " fails at (" << x
            << ", " << y << ")";
        throw std::domain_error(msg.str());
      }
    }
  }
}

CoefficientField CoefficientField::constant(double a, double b) {
  Functions f{
      [a](double, double) { return a; },
      [](double, double) { return 0.0; },
      [](double, double) { return 0.0; },
      [b](double, double) { return b; },
  };
  std::ostringstream name;
  name << "constant(a=" << a << ",b=" << b << ")";
  return CoefficientField(name.str(), std::move(f), a, true);
}

CoefficientField CoefficientField::smooth() {
  using std::numbers::pi;
  Functions f{
      [](double x, double y) { return 1.0 + 0.25 * std::sin(pi * x) * std::cos(pi * y); },
      [](double x, double y) { return 0.25 * pi * std::cos(pi * x) * std::cos(pi * y); },
      [](double x, double y) { return -0.25 * pi * std::sin(pi * x) * std::sin(pi * y); },
      [](double, double) { return 1.0; },
  };
  return CoefficientField("smooth", std::move(f), 0.75);
}

CoefficientField CoefficientField::shear() {
  Functions f{
      [](double, double y) { return 1.0 + 2.0 * y * (1.0 - y); },
      [](double, double) { return 0.0; },
      [](double, double y) { return 2.0 - 4.0 * y; },
      [](double, double) { return 0.0; },
  };
  // a(x,y) < 1 for y outside [0,1]; only the unit square is validated
  return CoefficientField("shear", std::move(f), 1.0);
}

CoefficientField CoefficientField::preset(const std::string& name, double a0, double b0) {
  if (name == "constant") return constant(a0, b0);
  if (name == "smooth") return smooth();
  if (name == "shear") return shear();
  throw std::invalid_argument("unknown coefficient preset '" + name + "'");
}

std::vector<std::string> CoefficientField::preset_names() {
  return {"constant", "smooth", "shear"};
}

bool CoefficientField::constant_b_zero() const {
  return constant_ && fns_.b(0.5, 0.5) == 0.0;
}

}  // namespace cdg
