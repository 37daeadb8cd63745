#include <cmath>

#include "cdgreen/scaling.hpp"
#include "doctest.h"

using namespace cdg;
using namespace cdg::scaling;

TEST_CASE("power fit recovers an exact exponent") {
  std::vector<Sample> s;
  for (double eps : {1e-4, 1e-2, 1e-3}) s.push_back({eps, 0.0, 3.0 * std::pow(eps, -0.5)});
  const Fit f = fit(Model::power, s);
  CHECK(f.slope == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(f.params[0] == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(f.max_rel_residual < 1e-10);
  CHECK(f.normalized_spread < 1e-10);
  CHECK(f.samples.front().eps == 1e-4);
}

TEST_CASE("log model and its normalized spread") {
  std::vector<Sample> s;
  for (double eps : {1e-2, 1e-3, 1e-4}) s.push_back({eps, 0.0, 2.0 + 0.5 * std::abs(std::log(eps))});
  const Fit f = fit(Model::log_model, s);
  CHECK(f.params[0] == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(f.slope == doctest::Approx(0.5).epsilon(1e-10));
  std::vector<double> normalized;
  for (const Sample& x : s) normalized.push_back(x.value / (1.0 + std::abs(std::log(x.eps))));
  CHECK(f.normalized_spread == doctest::Approx(relative_spread(normalized)));
}

TEST_CASE("rho laws use a single constant") {
  const double eps = 1e-2;
  std::vector<Sample> s;
  for (double r : {eps / 8, eps / 2, 2 * eps}) {
    s.push_back({eps, r, 1.7 * std::log(2.0 + eps / r) / eps});
  }
  const Fit f = fit(Model::ln_rho, s);
  CHECK(f.slope == doctest::Approx(1.7).epsilon(1e-12));
  CHECK(f.max_rel_residual < 1e-12);
  s[0].value *= 1.2;
  const Fit g = fit(Model::ln_rho, s);
  CHECK(g.max_rel_residual > 0.1);
  CHECK(g.max_rel_residual < 0.2);
  CHECK(shape(Model::ln_rho_log, eps, eps, 0.0) ==
        doctest::Approx((std::log(3.0) + std::log(100.0)) / eps));
}

TEST_CASE("spread") {
  CHECK(relative_spread({2.0, 3.0, 2.5}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(relative_spread({}), std::invalid_argument);
  CHECK_THROWS_AS(relative_spread({0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("study runs one job per sample") {
  int calls = 0;
  const Job job = [&](double eps, double) {
    ++calls;
    quad::NormResult r;
    r.value = std::pow(eps, -0.5);
    return r;
  };
  const Fit f = scaling_study(job, {1e-2, 1e-3, 1e-4}, {}, Model::power);
  CHECK(calls == 3);
  CHECK(f.slope == doctest::Approx(-0.5));
  CHECK_THROWS_AS(scaling_study(job, {}, {}, Model::power), std::invalid_argument);
  CHECK_THROWS_AS(scaling_study(job, {1e-2, 2e-2, 3e-2}, {}, Model::power), std::invalid_argument);
  CHECK_THROWS_AS(scaling_study(job, {1e-2}, {}, Model::ln_rho), std::invalid_argument);
  CHECK_THROWS_AS(fit(Model::power, {{1e-2, 0, 1.0}, {1e-3, 0, 2.0}}), std::invalid_argument);
  CHECK(model_from_string("ln_rho_log") == Model::ln_rho_log);
  CHECK_THROWS_AS(model_from_string("cubic"), std::invalid_argument);
}
