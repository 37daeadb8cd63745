#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cdgreen/coefficients.hpp"
#include "cdgreen/fdsolver.hpp"
#include "cdgreen/fundamental.hpp"
#include "cdgreen/image_green.hpp"
#include "cdgreen/scaling.hpp"
#include "json.hpp"

namespace cdg::config {

// Bad configuration or arguments; the CLI maps it to a usage error.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct CoefficientConfig {
  std::string preset = "constant";
  double a = 1.0;  // constant preset only
  double b = 0.0;

  CoefficientField build() const;
};

struct EvalConfig {
  ImageVariant variant = ImageVariant::bar_square;
  DerivKind kind = DerivKind::value;
  double eps = 1e-3;
  Point singular{1.0 / 3.0, 0.5};
  int grid = 513;  // points per direction, endpoints included
  std::array<double, 2> xi_range{0.0, 1.0};
  std::array<double, 2> eta_range{0.0, 1.0};
  bool log_scale = true;
};

// Shared by `norms` (table only) and `scaling` (table + fit + expectations).
struct StudyConfig {
  std::string integrand = "image";  // image | defect | fundamental
  ImageVariant variant = ImageVariant::bar_square;
  std::vector<DerivKind> kinds{DerivKind::d_eta};
  std::vector<double> eps{1e-2, 1e-3, 1e-4};
  std::vector<double> rho{0.0};
  Point singular{0.5, 0.5};
  // unit_square | square_minus_ball | ball | strip_window
  std::string region = "unit_square";
  std::array<double, 4> window{0.0, 1.0, 0.0, 1.0};
  // rho given as a multiple of eps instead of an absolute radius
  bool rho_relative = false;
  scaling::Model model = scaling::Model::power;
  std::optional<double> expect_slope;
  double slope_tol = 0.1;
  std::optional<double> max_spread;
  std::optional<double> max_rel_residual;
  std::optional<double> max_value;
};

struct FdConfig {
  std::vector<double> eps{0.05};
  int n = 128;
  fd::MeshKind mesh = fd::MeshKind::shishkin;
  fd::BoundaryCondition bc = fd::BoundaryCondition::dirichlet;
  Point probe{0.5, 0.5};
  double representation_tol = 1e-8;
  double mass_slack = 0.1;  // mass <= (1 + slack) / alpha
  // relative L1 distance to the bar_square approximation; needs a constant
  // coefficient field with b = 0
  bool compare_image = false;
  double compare_tol = 0.15;
};

struct ResidualConfig {
  ImageVariant variant = ImageVariant::bar_square;
  double eps = 0.05;
  Point singular{0.5, 0.5};
  int samples = 1000;
  double pde_tol = 1e-8;
  double defect_tol = 1e-7;
};

struct SelfcheckConfig {
  std::vector<int> only;  // criterion ids; empty runs all
};

struct RunConfig {
  std::string command;
  std::string out = "out";
  std::uint64_t seed = 1;
  int threads = 0;  // 0 keeps the OpenMP default
  double tol = 1e-4;
  std::string format = "csv";  // csv | json
  bool svg = false;

  CoefficientConfig coefficients;
  EvalConfig eval;
  StudyConfig norms;
  StudyConfig scaling;
  FdConfig fd;
  ResidualConfig residual;
  SelfcheckConfig selfcheck;

  // Resolved configuration, stable key order.
  nlohmann::json to_json() const;
  // FNV-1a 64 of to_json().dump(), as 16 hex digits.
  std::string hash() const;
  // Throws ConfigError on the first inconsistent field.
  void validate() const;
};

// TOML text -> validated RunConfig. Unknown keys are errors.
RunConfig parse(std::string_view text, const std::string& source = "<string>");
RunConfig load(const std::string& path);

}  // namespace cdg::config
