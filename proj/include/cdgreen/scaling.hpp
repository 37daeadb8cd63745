#pragma once

#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

#include "cdgreen/quadrature.hpp"

namespace cdg::scaling {

// Models for a norm N as a function of eps (and rho):
//   power         N = C eps^s                      (log-log least squares)
//   log_model     N = c0 + c1 |ln eps|             (linear least squares)
//   ln_rho        N = c eps^-1 ln(2 + eps/rho)     (single constant)
//   ln_rho_log    N = c eps^-1 (ln(2 + eps/rho) + |ln eps|)
enum class Model { power, log_model, ln_rho, ln_rho_log };

std::string_view to_string(Model m);
Model model_from_string(std::string_view name);

struct Sample {
  double eps = 0.0;
  double rho = 0.0;
  double value = 0.0;
  double err = 0.0;
  std::size_t cells = 0;
};

struct Fit {
  Model model = Model::power;
  std::vector<Sample> samples;  // sorted by eps, then rho
  std::vector<double> params;
  double slope = 0.0;             // power exponent, c1, or the fitted constant
  double max_rel_residual = 0.0;  // max |N / model - 1|
  // (max - min)/min of N divided by the model's shape function
  // (1 + |ln eps| for log_model; the rho law for ln_rho*; eps^s for power)
  double normalized_spread = 0.0;
};

// Shape function of a model without its fitted constant(s); power uses the
// given exponent.
double shape(Model m, double eps, double rho, double exponent = 0.0);

// The fitted model at (eps, rho).
double evaluate(const Fit& f, double eps, double rho);

// (max - min) / min over positive values.
double relative_spread(const std::vector<double>& values);

// Throws std::invalid_argument for fewer than three samples or non-positive
// values.
Fit fit(Model model, std::vector<Sample> samples);

using Job = std::function<quad::NormResult(double eps, double rho)>;

// Runs job for every (eps, rho) pair and fits the model. The eps-models need
// eps values spanning at least two decades.
Fit scaling_study(const Job& job, const std::vector<double>& eps_list,
                  const std::vector<double>& rho_list, Model model);

}  // namespace cdg::scaling
