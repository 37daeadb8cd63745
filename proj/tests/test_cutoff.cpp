#include <cmath>

#include "cdgreen/cutoff.hpp"
#include "doctest.h"
#include "fd_oracle.hpp"

using namespace cdg;
using cdg::testing::central_diff;

TEST_CASE("plateaus and support") {
  for (double t : {0.0, 0.3, 2.0 / 3.0}) {
    CHECK(cutoff(CutoffKind::omega0, t) == 1.0);
    CHECK(cutoff(CutoffKind::omega0, t, 1) == 0.0);
    CHECK(cutoff(CutoffKind::omega0, t, 2) == 0.0);
  }
  for (double t : {5.0 / 6.0, 0.9, 1.0}) {
    CHECK(cutoff(CutoffKind::omega0, t) == 0.0);
    CHECK(cutoff_jet(CutoffKind::omega0, t).zero());
  }
  CHECK(cutoff(CutoffKind::omega0, 0.75) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(cutoff(CutoffKind::omega1, 0.0) == 0.0);
  CHECK(cutoff(CutoffKind::omega1, 1.0) == 1.0);
}

TEST_CASE("monotone, bounded and mirrored") {
  for (int i = 0; i <= 600; ++i) {
    const double t = i / 600.0;
    const double w = cutoff(CutoffKind::omega0, t);
    CHECK(w >= 0.0);
    CHECK(w <= 1.0);
    CHECK(cutoff(CutoffKind::omega0, t, 1) <= 0.0);
    CHECK(cutoff(CutoffKind::omega1, 1.0 - t) == w);
    CHECK(cutoff(CutoffKind::omega1, 1.0 - t, 1) == -cutoff(CutoffKind::omega0, t, 1));
  }
}

TEST_CASE("derivatives against differences, including across the knots") {
  const double h = 1e-6;
  for (CutoffKind k : {CutoffKind::omega0, CutoffKind::omega1}) {
    for (double t = 0.01; t < 0.99; t += 0.0137) {
      const double d1 = central_diff([&](double s) { return cutoff(k, s); }, t, h);
      const double d2 = central_diff([&](double s) { return cutoff(k, s, 1); }, t, h);
      CHECK(std::abs(d1 - cutoff(k, t, 1)) <= 1e-6);
      CHECK(std::abs(d2 - cutoff(k, t, 2)) <= 1e-4);
    }
  }
  // C^2 at the knots: both one-sided limits vanish
  for (double t : {2.0 / 3.0, 5.0 / 6.0}) {
    CHECK(std::abs(cutoff(CutoffKind::omega0, t + 1e-9, 2)) <= 1e-4);
    CHECK(std::abs(cutoff(CutoffKind::omega0, t - 1e-9, 2)) <= 1e-4);
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(cutoff(CutoffKind::omega0, -1e-12), std::domain_error);
  CHECK_THROWS_AS(cutoff(CutoffKind::omega1, 1.5), std::domain_error);
  CHECK_THROWS_AS(cutoff(CutoffKind::omega0, NAN), std::domain_error);
  CHECK_THROWS_AS(cutoff(CutoffKind::omega0, 0.5, 3), std::domain_error);
}
