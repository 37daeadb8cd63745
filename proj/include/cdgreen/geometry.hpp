#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace cdg {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Point3 {
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Thrown when a Green's function is evaluated at its own source point.
class SingularPointError : public std::domain_error {
 public:
  explicit SingularPointError(const std::string& what) : std::domain_error(what) {}
};

}  // namespace cdg
