#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "bessel_table.hpp"
#include "cdgreen/specfun.hpp"
#include "doctest.h"

using namespace cdg::specfun;

namespace {

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Hankel asymptotic series for e^z K_nu(z), truncated at the smallest term.
double asymptotic_scaled(int nu, double z) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = term * (mu - odd * odd) / (k * 8.0 * z);
    if (std::abs(next) > std::abs(term)) break;
    term = next;
    sum += term;
  }
  return std::sqrt(std::numbers::pi / (2.0 * z)) * sum;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  return g;
}

}  // namespace

TEST_CASE("reference table: K0, K1 and scaled variants within 1e-12") {
  const auto rows = cdg::testing::load_bessel_table(CDGREEN_TEST_DATA_DIR "/bessel_reference.csv");
  REQUIRE(rows.size() == 200);
  double worst = 0.0;
  for (const auto& r : rows) {
    worst = std::max({worst, rel_err(bessel_k0(r.s), r.k0), rel_err(bessel_k1(r.s), r.k1),
                      rel_err(bessel_k0_scaled(r.s), r.k0 * std::exp(r.s)),
                      rel_err(bessel_k1_scaled(r.s), r.k1 * std::exp(r.s))});
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("frozen point values") {
  CHECK(rel_err(bessel_k0(1.0), 0.421024438240708) <= 1e-13);
  CHECK(rel_err(bessel_k1(1.0), 0.601907230197235) <= 1e-13);
  CHECK(rel_err(bessel_k0(0.5), 0.9244190712276659) <= 1e-13);
}

TEST_CASE("small-argument behaviour") {
  const double asym = -std::log(5e-9) - std::numbers::egamma;
  CHECK(std::abs(bessel_k0(1e-8) - asym) <= 1e-3);
  CHECK(std::abs(1e-6 * bessel_k1(1e-6) - 1.0) <= 1e-6);
}

TEST_CASE("large-argument behaviour against the Hankel series") {
  CHECK(rel_err(bessel_k0(100.0), bessel_k0_scaled(100.0) * std::exp(-100.0)) <= 1e-14);
  CHECK(rel_err(bessel_k0_scaled(100.0), asymptotic_scaled(0, 100.0)) <= 1e-12);
  CHECK(rel_err(bessel_k1_scaled(100.0), asymptotic_scaled(1, 100.0)) <= 1e-12);
  CHECK(rel_err(bessel_k1_scaled(1e6), std::sqrt(std::numbers::pi / 2e6)) <= 1e-5);
  CHECK(rel_err(bessel_k0_scaled(5.0) * std::exp(-5.0), bessel_k0(5.0)) <= 1e-13);

  const double ratio = bessel_k0_scaled(1e4) / bessel_k1_scaled(1e4);
  CHECK(ratio >= 1.0 - 1e-4);
  CHECK(ratio <= 1.0);
}

TEST_CASE("scaled values stay finite far past the underflow point") {
  for (double s : {710.0, 1e3, 1e5, 1e8}) {
    const double v0 = bessel_k0_scaled(s);
    const double v1 = bessel_k1_scaled(s);
    CHECK(std::isfinite(v0));
    CHECK(v0 > 0.0);
    CHECK(v1 > v0);
  }
  CHECK(bessel_k0(800.0) == 0.0);
  CHECK(bessel_k1(800.0) == 0.0);
}

TEST_CASE("domain errors") {
  for (double s : {0.0, -1.0, std::numeric_limits<double>::quiet_NaN(),
                   std::numeric_limits<double>::infinity()}) {
    CHECK_THROWS_AS(bessel_k0(s), std::domain_error);
    CHECK_THROWS_AS(bessel_k1_scaled(s), std::domain_error);
  }
}

TEST_CASE("positivity, ordering and monotonicity") {
  const auto grid = log_grid(1e-8, 700.0, 400);
  double prev0 = std::numeric_limits<double>::infinity();
  double prev1 = prev0;
  for (double s : grid) {
    const double k0 = bessel_k0(s);
    const double k1 = bessel_k1(s);
    CHECK(k0 > 0.0);
    CHECK(k1 > k0);
    CHECK(k0 < prev0);
    CHECK(k1 < prev1);
    prev0 = k0;
    prev1 = k1;
  }
  const BesselEval e = eval_k0(3.0);
  CHECK(e.scaled_value == doctest::Approx(e.value * std::exp(3.0)).epsilon(1e-14));
}

TEST_CASE("derivative identities against central differences") {
  {
    const double s = 2.0, h = 1e-5;
    const double fd = (bessel_k0(s + h) - bessel_k0(s - h)) / (2 * h);
    CHECK(rel_err(fd, -bessel_k1(s)) <= 1e-8);
  }
  double worst = 0.0;
  for (double s : log_grid(1e-3, 50.0, 60)) {
    const double h = 1e-4 * std::min(s, 1.0);
    const double d0 = (bessel_k0(s + h) - bessel_k0(s - h)) / (2 * h);
    const double d1 = (bessel_k1(s + h) - bessel_k1(s - h)) / (2 * h);
    worst = std::max(worst, rel_err(d0, -bessel_k1(s)));
    worst = std::max(worst, rel_err(d1, -bessel_k0(s) - bessel_k1(s) / s));
  }
  CHECK(worst <= 1e-7);
}

TEST_CASE("bound s e^{s/2} K_{0,1}(s) <= 2") {
  double peak = 0.0;
  for (double s : log_grid(0.01, 100.0, 500)) {
    peak = std::max(peak, s * std::exp(0.5 * s) * std::max(bessel_k0(s), bessel_k1(s)));
  }
  CHECK(std::isfinite(peak));
  CHECK(peak <= 2.0);
}

TEST_CASE("series and continued fraction agree across the split") {
  const double below = std::nextafter(2.0, 0.0);
  const double above = std::nextafter(2.0, 3.0);
  CHECK(rel_err(bessel_k0(below), bessel_k0(above)) <= 1e-14);
  CHECK(rel_err(bessel_k1(below), bessel_k1(above)) <= 1e-14);
}
