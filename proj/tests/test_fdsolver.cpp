#include <cmath>
#include <numbers>
#include <random>

#include "cdgreen/fdsolver.hpp"
#include "cdgreen/image_green.hpp"
#include "doctest.h"

using namespace cdg;
using namespace cdg::fd;

namespace {

constexpr double kPi = std::numbers::pi;

std::shared_ptr<const CoefficientField> field_of(const CoefficientField& f) {
  return std::make_shared<const CoefficientField>(f);
}

std::shared_ptr<const TensorMesh> uniform(int n) {
  return std::make_shared<const TensorMesh>(TensorMesh::uniform(n));
}

}  // namespace

TEST_CASE("adjoint operator reproduces b on constants away from Dirichlet rows") {
  const auto field = field_of(CoefficientField::smooth());
  const System sys(field, uniform(16), 0.1, BoundaryCondition::dirichlet);
  const Vector r = sys.apply(OperatorKind::adjoint, Vector::Ones(sys.unknowns()));
  for (int i = 2; i <= 14; ++i) {
    for (int j = 2; j <= 14; ++j) {
      const int k = sys.index(i, j);
      CHECK(r[k] == doctest::Approx(field->b(sys.point(k))).epsilon(1e-12));
    }
  }
}

TEST_CASE("manufactured solution converges at first order") {
  const auto field = field_of(CoefficientField::smooth());
  const double eps = 0.5;
  auto u = [](Point p) { return std::sin(kPi * p.x) * std::sin(kPi * p.y); };
  auto f = [&](Point p) {
    const double s = u(p);
    const double ux = kPi * std::cos(kPi * p.x) * std::sin(kPi * p.y);
    return 2.0 * eps * kPi * kPi * s - (field->a_x(p) * s + field->a(p) * ux) + field->b(p) * s;
  };
  double last = INFINITY;
  for (int n : {16, 32, 64}) {
    const System sys(field, uniform(n), eps, BoundaryCondition::dirichlet);
    const Vector res = sys.apply(OperatorKind::primal, sys.sample(u)) - sys.sample(f);
    const double err = res.lpNorm<Eigen::Infinity>();
    CHECK(err < last / 1.7);
    last = err;
  }
}

TEST_CASE("discrete duality") {
  const auto field = field_of(CoefficientField::constant(1.0));
  const System sys(field, uniform(12), 0.05, BoundaryCondition::dirichlet);
  const SparseMatrix primal = sys.fv_matrix();
  const SparseMatrix adjoint_fv = sys.areas().asDiagonal() * sys.fd_matrix(OperatorKind::adjoint);
  const SparseMatrix diff = SparseMatrix(primal.transpose()) - adjoint_fv;
  CHECK(diff.norm() <= 1e-14 * primal.norm());
}

TEST_CASE("solve: zero data, barrier bound and determinism") {
  const auto field = field_of(CoefficientField::constant(1.0));
  const System sys(field, uniform(32), 0.01, BoundaryCondition::dirichlet);
  CHECK(sys.solve(OperatorKind::primal, Vector::Zero(sys.unknowns())).norm() == 0.0);
  const Vector one = sys.solve(OperatorKind::primal, Vector::Ones(sys.unknowns()));
  CHECK(one.maxCoeff() <= 1.0);
  CHECK(sys.last_relative_residual() <= 1e-10);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector f(sys.unknowns());
  for (int k = 0; k < f.size(); ++k) f[k] = dist(rng);
  const Vector u1 = sys.solve(OperatorKind::primal, f);
  const Vector u2 = sys.solve(OperatorKind::primal, f);
  const System again(field, uniform(32), 0.01, BoundaryCondition::dirichlet, false);
  const Vector u3 = again.solve(OperatorKind::primal, f);
  CHECK((u1.array() == u2.array()).all());
  CHECK((u1.array() == u3.array()).all());
}

TEST_CASE("parallel and serial assembly produce identical matrices") {
  const auto field = field_of(CoefficientField::smooth());
  const auto mesh = std::make_shared<const TensorMesh>(TensorMesh::shishkin(64, 1e-3, 0.75));
  const System par(field, mesh, 1e-3, BoundaryCondition::neumann_top_bottom, true);
  const System ser(field, mesh, 1e-3, BoundaryCondition::neumann_top_bottom, false);
  const SparseMatrix d = par.fv_matrix() - ser.fv_matrix();
  CHECK(d.norm() == 0.0);
}

TEST_CASE("discrete maximum principle") {
  const auto field = field_of(CoefficientField::shear());
  const auto mesh = std::make_shared<const TensorMesh>(TensorMesh::shishkin(32, 1e-3, 1.0));
  const System sys(field, mesh, 1e-3, BoundaryCondition::dirichlet);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    Vector f(sys.unknowns());
    for (int k = 0; k < f.size(); ++k) f[k] = dist(rng);
    CHECK(sys.solve(OperatorKind::primal, f).minCoeff() >= 0.0);
    CHECK(sys.solve(OperatorKind::adjoint, f).minCoeff() >= 0.0);
  }
}

TEST_CASE("discrete Green's function: sign, representation and mass") {
  for (BoundaryCondition bc : {BoundaryCondition::dirichlet, BoundaryCondition::neumann_top_bottom}) {
    const auto field = field_of(CoefficientField::smooth());
    for (double eps : {0.05, 0.01, 0.002}) {
      const auto mesh = std::make_shared<const TensorMesh>(TensorMesh::shishkin(64, eps, 0.75));
      const System sys(field, mesh, eps, bc);
      const int p = sys.nearest_unknown({0.4, 0.5});
      const Vector g = sys.discrete_green(p);
      CHECK(g.minCoeff() >= 0.0);

      const Vector f = sys.sample([](Point q) { return std::cos(3.0 * q.x) + q.y * q.y; });
      const Vector u = sys.solve(OperatorKind::primal, f);
      const double represented = (g.array() * f.array() * sys.areas().array()).sum();
      CHECK(represented == doctest::Approx(u[p]).epsilon(1e-8));

      const MassReport m = mass_bound(sys);
      CHECK(m.max_mass <= 1.1 * m.bound);
      CHECK(g.dot(sys.areas()) <= m.max_mass * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("Green's function peaks next to the source and approaches the image approximation") {
  const auto field = field_of(CoefficientField::constant(1.0));
  const double eps = 0.05;
  const Point s{0.5, 0.5};
  const ImageGreenSpec spec(ImageVariant::bar_square, field, eps);
  auto ref = [&](Point q) { return eval_image(spec, s, q, DerivKind::value); };
  double last = INFINITY;
  std::shared_ptr<const NodalField> previous;
  double last_self = INFINITY;
  for (int n : {32, 64, 128}) {
    const auto mesh = uniform(n);
    const System sys(field, mesh, eps, BoundaryCondition::dirichlet);
    const int p = sys.nearest_unknown(s);
    const Vector g = sys.discrete_green(p);
    Eigen::Index at = 0;
    g.maxCoeff(&at);
    const Point peak = sys.point(static_cast<int>(at));
    const double h = 1.0 / n;
    CHECK(peak.x >= s.x - 1e-12);
    CHECK(peak.x <= s.x + h + 1e-12);
    CHECK(std::abs(peak.y - s.y) <= 1e-12);

    const auto nodal = std::make_shared<const NodalField>(sys.to_nodal(g));
    const L1Comparison c = l1_compare([&](Point q) { return nodal->at(q); }, ref, *mesh, &s);
    CHECK(c.relative() < last);
    CHECK(c.relative() < 0.15);
    last = c.relative();
    if (previous) {
      const L1Comparison self = l1_compare([&](Point q) { return previous->at(q); },
                                           [&](Point q) { return nodal->at(q); }, *mesh);
      CHECK(self.relative() < last_self);
      last_self = self.relative();
    }
    previous = nodal;
  }
}

TEST_CASE("a priori sweep") {
  const auto field = field_of(CoefficientField::constant(1.0));
  const DivergenceData zero{[](Point) { return 0.0; }, [](Point) { return 0.0; },
                            [](Point) { return 0.0; }, [](Point) { return 0.0; }};
  for (const AprioriRow& r : apriori_check(field, zero, {1e-2, 1e-3}, MeshKind::shishkin, 32)) {
    CHECK(r.u_max == 0.0);
  }
  const DivergenceData f2{[](Point) { return 0.0; }, [](Point) { return 0.0; },
                          [](Point p) { return std::sin(kPi * p.y); },
                          [](Point p) { return kPi * std::cos(kPi * p.y); }};
  const auto rows = apriori_check(field, f2, {1e-2, 1e-3, 1e-4}, MeshKind::shishkin, 64);
  REQUIRE(rows.size() == 3);
  for (const AprioriRow& r : rows) {
    CHECK(r.F2_max == doctest::Approx(1.0));
    CHECK(r.u_sqrt_eps <= 2.0 * rows.front().u_sqrt_eps);
    CHECK(r.ratio == doctest::Approx(r.u_max / r.bound));
  }
  CHECK_THROWS_AS(apriori_check(field, f2, {}, MeshKind::uniform, 16), std::invalid_argument);
}

TEST_CASE("one-dimensional Green's function variation") {
  for (double a : {1.0, 2.0}) {
    for (double eps : {0.5, 1e-3}) {
      const Gamma1dResult r = gamma_1d_check([a](double) { return a; }, a, eps, 512);
      CHECK(r.bound == 2.0 / a);
      CHECK(r.max_variation <= 1.1 * r.bound);
      CHECK(r.max_variation > 0.0);
    }
  }
  auto var = [](double xi) { return 1.0 + 0.5 * xi * xi; };
  const Gamma1dResult par = gamma_1d_check(var, 1.0, 1e-3, 300, true);
  const Gamma1dResult ser = gamma_1d_check(var, 1.0, 1e-3, 300, false);
  CHECK(par.max_variation == ser.max_variation);
  CHECK(par.argmax_source == ser.argmax_source);
  CHECK(par.max_variation <= 2.2);
  CHECK_THROWS_AS(gamma_1d_check(var, 2.0, 1e-3, 100), std::domain_error);
  CHECK_THROWS_AS(gamma_1d_check(var, 1.0, 1e-3, 1), std::invalid_argument);
}

TEST_CASE("argument errors") {
  const auto field = field_of(CoefficientField::constant(1.0));
  CHECK_THROWS_AS(System(field, uniform(8), 0.0, BoundaryCondition::dirichlet), std::domain_error);
  const System sys(field, uniform(8), 0.1, BoundaryCondition::dirichlet);
  CHECK_THROWS_AS(sys.nearest_unknown({0.0, 0.5}), std::domain_error);
  CHECK_THROWS_AS(sys.discrete_green(-1), std::out_of_range);
  CHECK_THROWS_AS(sys.solve(OperatorKind::primal, Vector::Ones(3)), std::invalid_argument);
  CHECK(boundary_condition_from_string("neumann_top_bottom") == BoundaryCondition::neumann_top_bottom);
  CHECK_THROWS_AS(boundary_condition_from_string("robin"), std::invalid_argument);
}
