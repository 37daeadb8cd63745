#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdgreen/fundamental.hpp"
#include "cdgreen/geometry.hpp"
#include "cdgreen/image_green.hpp"

namespace cdg::quad {

struct Region {
  enum class Kind { unit_square, square_minus_ball, ball_intersect_square, strip_window };

  Kind kind = Kind::unit_square;
  Point center{};
  double rho = 0.0;
  // bounds of a strip_window
  double xi0 = 0.0, xi1 = 1.0, eta0 = 0.0, eta1 = 1.0;

  static Region unit_square();
  static Region square_minus_ball(Point center, double rho);
  static Region ball_intersect_square(Point center, double rho);
  static Region strip_window(double xi0, double xi1, double eta0, double eta1);

  std::string describe() const;
};

// A pointwise integrand. `singular` marks an integrable singularity that gets
// a polar patch; `eps` sets the layer scale used to grade the initial cells.
struct Integrand {
  std::function<double(Point)> f;
  std::optional<Point> singular;
  double eps = 1.0;
  std::string id;
};

struct Options {
  double tol = 1e-4;      // relative
  double tol_abs = 0.0;   // absolute floor on the target error
  std::size_t max_cells = std::size_t{1} << 22;
  bool parallel = true;
};

struct NormResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  std::size_t cells_used = 0;
  std::size_t evaluations = 0;
  std::string integrand_id;
};

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, NormResult best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const NormResult& best() const { return best_; }

 private:
  NormResult best_;
};

// Adaptive integration of integrand.f over the region. Stops once the summed
// cell error estimate is below max(tol*|value|, tol_abs).
NormResult integrate(const Integrand& integrand, const Region& region, const Options& opts = {});

// sum over kinds of |d^k G(singular; .)|, e.g. {value, d_xi, d_eta} for the
// W^{1,1} integrand.
Integrand image_norm_integrand(const ImageGreenSpec& spec, Point singular,
                               std::vector<DerivKind> kinds);

// |frozen defect| of a bar variant (constant coefficients only).
Integrand defect_integrand(const ImageGreenSpec& spec, Point singular);

// |d^k g| of the free-space fundamental solution.
Integrand fundamental_integrand(const FrozenParams& params, DerivKind kind);

}  // namespace cdg::quad
