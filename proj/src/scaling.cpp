#include "cdgreen/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cdg::scaling {

std::string_view to_string(Model m) {
  switch (m) {
    case Model::power: return "power";
    case Model::log_model: return "log_model";
    case Model::ln_rho: return "ln_rho";
    case Model::ln_rho_log: return "ln_rho_log";
  }
  return "unknown";
}

Model model_from_string(std::string_view name) {
  for (Model m : {Model::power, Model::log_model, Model::ln_rho, Model::ln_rho_log}) {
    if (to_string(m) == name) return m;
  }
  throw std::invalid_argument("unknown scaling model '" + std::string(name) + "'");
}

double shape(Model m, double eps, double rho, double exponent) {
  switch (m) {
    case Model::power: return std::pow(eps, exponent);
    case Model::log_model: return 1.0 + std::abs(std::log(eps));
    case Model::ln_rho: return std::log(2.0 + eps / rho) / eps;
    case Model::ln_rho_log: return (std::log(2.0 + eps / rho) + std::abs(std::log(eps))) / eps;
  }
  return 0.0;
}

double relative_spread(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("relative_spread: no values");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (!(*lo > 0.0)) throw std::invalid_argument("relative_spread: values must be positive");
  return (*hi - *lo) / *lo;
}

namespace {

// least squares y = a + b t
std::pair<double, double> line_fit(const std::vector<double>& t, const std::vector<double>& y) {
  const double n = static_cast<double>(t.size());
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    st += t[i]; sy += y[i]; stt += t[i] * t[i]; sty += t[i] * y[i];
  }
  const double den = n * stt - st * st;
  if (!(std::abs(den) > 0.0)) throw std::invalid_argument("scaling fit: degenerate abscissae");
  const double b = (n * sty - st * sy) / den;
  return {(sy - b * st) / n, b};
}

}  // namespace

Fit fit(Model model, std::vector<Sample> samples) {
  if (samples.size() < 3) throw std::invalid_argument("scaling fit: need at least 3 samples");
  for (const Sample& s : samples) {
    if (!(s.value > 0.0) || !(s.eps > 0.0)) {
      throw std::invalid_argument("scaling fit: values and eps must be positive");
    }
    if ((model == Model::ln_rho || model == Model::ln_rho_log) && !(s.rho > 0.0)) {
      throw std::invalid_argument("scaling fit: rho models need rho > 0");
    }
  }
  std::sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) {
    return a.eps != b.eps ? a.eps < b.eps : a.rho < b.rho;
  });

  Fit f;
  f.model = model;
  f.samples = samples;
  std::vector<double> t, y;
  for (const Sample& s : samples) {
    if (model == Model::power) {
      t.push_back(std::log(s.eps));
      y.push_back(std::log(s.value));
    } else if (model == Model::log_model) {
      t.push_back(std::abs(std::log(s.eps)));
      y.push_back(s.value);
    }
  }

  std::vector<double> predicted;
  switch (model) {
    case Model::power: {
      const auto [a, b] = line_fit(t, y);
      f.params = {std::exp(a), b};
      f.slope = b;
      for (const Sample& s : samples) predicted.push_back(std::exp(a) * std::pow(s.eps, b));
      break;
    }
    case Model::log_model: {
      const auto [a, b] = line_fit(t, y);
      f.params = {a, b};
      f.slope = b;
      for (double ti : t) predicted.push_back(a + b * ti);
      break;
    }
    case Model::ln_rho:
    case Model::ln_rho_log: {
      double log_sum = 0.0;
      for (const Sample& s : samples) log_sum += std::log(s.value / shape(model, s.eps, s.rho));
      const double c = std::exp(log_sum / static_cast<double>(samples.size()));
      f.params = {c};
      f.slope = c;
      for (const Sample& s : samples) predicted.push_back(c * shape(model, s.eps, s.rho));
      break;
    }
  }

  std::vector<double> normalized;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    f.max_rel_residual =
        std::max(f.max_rel_residual, std::abs(samples[i].value / predicted[i] - 1.0));
    normalized.push_back(samples[i].value / shape(model, samples[i].eps, samples[i].rho, f.slope));
  }
  f.normalized_spread = relative_spread(normalized);
  return f;
}

double evaluate(const Fit& f, double eps, double rho) {
  switch (f.model) {
    case Model::power:
      return f.params.at(0) * std::pow(eps, f.params.at(1));
    case Model::log_model:
      return f.params.at(0) + f.params.at(1) * std::abs(std::log(eps));
    case Model::ln_rho:
    case Model::ln_rho_log:
      return f.params.at(0) * shape(f.model, eps, rho);
  }
  return 0.0;
}

Fit scaling_study(const Job& job, const std::vector<double>& eps_list,
                  const std::vector<double>& rho_list, Model model) {
  if (eps_list.empty()) throw std::invalid_argument("scaling_study: empty eps list");
  const bool rho_model = model == Model::ln_rho || model == Model::ln_rho_log;
  if (rho_model && rho_list.empty()) throw std::invalid_argument("scaling_study: empty rho list");
  if (!rho_model) {
    const auto [lo, hi] = std::minmax_element(eps_list.begin(), eps_list.end());
    if (eps_list.size() < 3 || *hi < 100.0 * *lo) {
      throw std::invalid_argument("scaling_study: need >= 3 eps values spanning two decades");
    }
  }
  std::vector<Sample> samples;
  const std::vector<double> rhos = rho_list.empty() ? std::vector<double>{0.0} : rho_list;
  for (double eps : eps_list) {
    for (double rho : rhos) {
      const quad::NormResult r = job(eps, rho);
      samples.push_back({eps, rho, r.value, r.abs_error_estimate, r.cells_used});
    }
  }
  return fit(model, std::move(samples));
}

}  // namespace cdg::scaling
