#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "cdgreen/fundamental.hpp"
#include "doctest.h"
#include "fd_oracle.hpp"

using namespace cdg;
using cdg::testing::central_diff;
using cdg::testing::close_rel;

namespace {

struct Sample {
  double q, eps;
  Point singular, field;
};

// Points at hat-distance r in [r_lo, r_hi] (log-uniform) around a source.
std::vector<Sample> random_samples(int n, double r_lo, double r_hi, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Sample> out;
  for (double q : {0.5, 1.0}) {
    for (double eps : {0.1, 1e-3}) {
      for (int i = 0; i < n; ++i) {
        const double r = r_lo * std::pow(r_hi / r_lo, unit(rng));
        const double th = 2.0 * std::numbers::pi * unit(rng);
        const Point s{0.2 + 0.6 * unit(rng), unit(rng)};
        out.push_back({q, eps, s, {s.x + eps * r * std::cos(th), s.y + eps * r * std::sin(th)}});
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("value at a frozen point") {
  const FrozenParams p({0.0, 0.0}, 0.5, 0.1);
  // K0(0.5) / (2 pi 0.1), from a 30-digit evaluation
  CHECK(eval_g(p, {0.0, 0.1}, DerivKind::value) ==
        doctest::Approx(1.4712586467430189).epsilon(1e-12));
  CHECK(eval_g(p, {0.0, 0.37}, DerivKind::value) == eval_g(p, {0.0, -0.37}, DerivKind::value));
  CHECK(eval_g(p, {0.3, 0.0}, DerivKind::d_eta) == 0.0);
  CHECK(eval_g(p, {-0.3, 0.0}, DerivKind::d2_xi_eta) == 0.0);
}

TEST_CASE("hat coordinates") {
  const FrozenParams p({0.25, 0.5}, 1.0, 0.01);
  const HatCoords h = hat_coords(p, {0.27, 0.47});
  CHECK(h.xi_hat == doctest::Approx(2.0));
  CHECK(h.eta_hat == doctest::Approx(-3.0));
  CHECK(h.r_hat >= std::max(std::abs(h.xi_hat), std::abs(h.eta_hat)));
  CHECK(hat_coords(p, {0.25, 0.5}).r_hat == 0.0);
}

TEST_CASE("second xi-derivative against a second difference of the value") {
  const double eps = 0.1;
  const FrozenParams p({0.0, 0.0}, 0.5, eps);
  const double h = 1e-5 * eps;
  const auto g = [&](double xi) { return eval_g(p, {xi, eps}, DerivKind::value); };
  const double fd = (g(eps + h) - 2.0 * g(eps) + g(eps - h)) / (h * h);
  CHECK(close_rel(eval_g(p, {eps, eps}, DerivKind::d2_xi_xi), fd, 1e-5, 0.0));
}

TEST_CASE("every derivative kind against central differences") {
  int checked = 0;
  for (const Sample& s : random_samples(100, 0.1, 20.0, 17)) {
    const FrozenParams p(s.singular, s.q, s.eps);
    const double h = 1e-6 * s.eps;
    const Point f = s.field;
    auto at = [&](DerivKind k, Point pt) { return eval_g(p, pt, k); };
    const double g0 = std::abs(at(DerivKind::value, f));
    const double floor1 = 1e-3 * g0 / s.eps;
    const double floor2 = 1e-3 * g0 / (s.eps * s.eps);

    auto in_xi = [&](DerivKind k) {
      return central_diff([&](double t) { return at(k, {t, f.y}); }, f.x, h);
    };
    auto in_eta = [&](DerivKind k) {
      return central_diff([&](double t) { return at(k, {f.x, t}); }, f.y, h);
    };
    auto in_q = [&](DerivKind k) {
      return central_diff(
          [&](double t) { return eval_g(FrozenParams(s.singular, t, s.eps), f, k); }, s.q,
          1e-6 * s.q);
    };
    auto in_x = [&]() {
      return central_diff(
          [&](double t) {
            return eval_g(FrozenParams({t, s.singular.y}, s.q, s.eps), f, DerivKind::value);
          },
          s.singular.x, h);
    };
    auto in_y = [&]() {
      return central_diff(
          [&](double t) {
            return eval_g(FrozenParams({s.singular.x, t}, s.q, s.eps), f, DerivKind::value);
          },
          s.singular.y, h);
    };

    CHECK(close_rel(at(DerivKind::d_xi, f), in_xi(DerivKind::value), 1e-5, floor1));
    CHECK(close_rel(at(DerivKind::d_eta, f), in_eta(DerivKind::value), 1e-5, floor1));
    CHECK(close_rel(at(DerivKind::d_q, f), in_q(DerivKind::value), 1e-5, 1e-3 * g0));
    CHECK(close_rel(at(DerivKind::d2_xi_xi, f), in_xi(DerivKind::d_xi), 1e-5, floor2));
    CHECK(close_rel(at(DerivKind::d2_xi_eta, f), in_eta(DerivKind::d_xi), 1e-5, floor2));
    CHECK(close_rel(at(DerivKind::d2_eta_eta, f), in_eta(DerivKind::d_eta), 1e-5, floor2));
    CHECK(close_rel(at(DerivKind::d2_xi_q, f), in_q(DerivKind::d_xi), 1e-5, floor1));
    CHECK(close_rel(at(DerivKind::d_x, f), in_x(), 1e-5, floor1));
    CHECK(close_rel(at(DerivKind::d_y, f), in_y(), 1e-5, floor1));
    ++checked;
  }
  CHECK(checked == 400);
}

TEST_CASE("frozen adjoint PDE residual vanishes off the source") {
  double worst = 0.0;
  for (const Sample& s : random_samples(100, 0.5, 20.0, 99)) {
    const FrozenParams p(s.singular, s.q, s.eps);
    const double dxx = -s.eps * eval_g(p, s.field, DerivKind::d2_xi_xi);
    const double dyy = -s.eps * eval_g(p, s.field, DerivKind::d2_eta_eta);
    const double conv = 2.0 * s.q * eval_g(p, s.field, DerivKind::d_xi);
    const double dominant = std::max({std::abs(dxx), std::abs(dyy), std::abs(conv)});
    worst = std::max(worst, std::abs(dxx + dyy + conv) / dominant);
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("identities between singular-point and field-point derivatives") {
  for (const Sample& s : random_samples(25, 0.1, 20.0, 5)) {
    const FrozenParams p(s.singular, s.q, s.eps);
    CHECK(eval_g(p, s.field, DerivKind::d_x) == -eval_g(p, s.field, DerivKind::d_xi));
    CHECK(eval_g(p, s.field, DerivKind::d_y) == -eval_g(p, s.field, DerivKind::d_eta));
    const ChainPartials chain{0.3, -0.7};
    CHECK(eval_g(p, s.field, DerivKind::full_D_eta, chain) ==
          doctest::Approx(eval_g(p, s.field, DerivKind::d_eta) +
                          0.15 * eval_g(p, s.field, DerivKind::d_q)));
    CHECK(eval_g(p, s.field, DerivKind::full_D_y, chain) ==
          doctest::Approx(eval_g(p, s.field, DerivKind::d_y) -
                          0.35 * eval_g(p, s.field, DerivKind::d_q)));
    CHECK(eval_g(p, s.field, DerivKind::value) > 0.0);
  }
}

TEST_CASE("upwind decay rate is 2q") {
  for (double q : {0.5, 1.0}) {
    const double eps = 0.01;
    const FrozenParams p({0.5, 0.5}, q, eps);
    // least-squares slope of ln g against xi_hat on [-50, -10]
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (double xh = -50.0; xh <= -10.0; xh += 0.5, ++n) {
      const double lg = std::log(eval_g(p, {0.5 + eps * xh, 0.5}, DerivKind::value));
      sx += xh; sy += lg; sxx += xh * xh; sxy += xh * lg;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(std::abs(slope / (2.0 * q) - 1.0) <= 0.05);
  }
}

TEST_CASE("no overflow far upwind or downstream") {
  const FrozenParams p({0.5, 0.5}, 1.0, 1e-4);
  const double up = eval_g(p, {0.0, 0.5}, DerivKind::d_xi);
  const double down = eval_g(p, {1.0, 0.5}, DerivKind::d2_eta_eta);
  CHECK(std::isfinite(up));
  CHECK(up == 0.0);
  CHECK(std::isfinite(down));
  CHECK(eval_g(p, {1.0, 0.5}, DerivKind::value) > 0.0);
}

TEST_CASE("weights") {
  CHECK(weights(FrozenParams({1.0, 0.0}, 0.7, 0.1)).lambda() == 1.0);
  CHECK(weights(FrozenParams({0.0, 0.0}, 0.7, 0.1)).p() == 1.0);
  const Weights w = weights(FrozenParams({0.5, 0.0}, 0.5, 0.1));
  CHECK(w.log_lambda_minus == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(w.log_lambda_plus == doctest::Approx(15.0).epsilon(1e-15));
  CHECK(w.log_p == doctest::Approx(-5.0).epsilon(1e-15));
  CHECK(w.log_lambda_plus + w.log_lambda_minus == doctest::Approx(20.0).epsilon(1e-15));
}

TEST_CASE("three-dimensional fundamental solution") {
  const FrozenParams3 p{{0.0, 0.0, 0.0}, 0.5, 0.1};
  CHECK(eval_g3(p, {0.0, 0.1, 0.0}) == doctest::Approx(4.8266176315026948).epsilon(1e-13));
  CHECK(eval_g3(p, {0.3, 0.0, 0.0}) ==
        doctest::Approx(1.0 / (4.0 * std::numbers::pi * 0.1 * 0.3)).epsilon(1e-14));
  CHECK(eval_g3(p, {0.2, 0.3, -0.1}) == eval_g3(p, {0.2, -0.1, 0.3}));
  CHECK(eval_g3(p, {-0.2, 0.1, 0.1}) > 0.0);
  CHECK_THROWS_AS(eval_g3(p, {0.0, 0.0, 0.0}), SingularPointError);
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(FrozenParams({0.5, 0.5}, 0.0, 0.1), std::domain_error);
  CHECK_THROWS_AS(FrozenParams({0.5, 0.5}, 1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(FrozenParams({0.5, 0.5}, 1.0, 1.5), std::domain_error);
  CHECK_THROWS_AS(FrozenParams({4.0, 0.5}, 1.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(FrozenParams::with_alpha({0.5, 0.5}, 0.4, 0.5, 1.0), std::domain_error);
  CHECK_NOTHROW(FrozenParams::with_alpha({0.5, 0.5}, 0.5, 0.5, 1.0));
  const FrozenParams p({0.5, 0.5}, 1.0, 0.1);
  CHECK_THROWS_AS(eval_g(p, {0.5, 0.5}, DerivKind::value), SingularPointError);
  CHECK_THROWS_AS(deriv_kind_from_string("d_zeta"), std::invalid_argument);
  CHECK(deriv_kind_from_string("d2_xi_q") == DerivKind::d2_xi_q);
}
