// Serial reference against the OpenMP kernels. Arg 0 = serial, 1 = parallel.
#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>

#include "cdgreen/fdsolver.hpp"
#include "cdgreen/image_green.hpp"
#include "cdgreen/quadrature.hpp"

using namespace cdg;

namespace {

std::shared_ptr<const CoefficientField> unit_field() {
  static const auto f = std::make_shared<const CoefficientField>(CoefficientField::constant(1.0));
  return f;
}

void BM_QuadratureNorm(benchmark::State& state) {
  const ImageGreenSpec spec(ImageVariant::bar_square, unit_field(), 1e-3);
  const quad::Integrand f = quad::image_norm_integrand(spec, {0.5, 0.5}, {DerivKind::d_eta});
  quad::Options o;
  o.parallel = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(quad::integrate(f, quad::Region::unit_square(), o).value);
}
BENCHMARK(BM_QuadratureNorm)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Assembly(benchmark::State& state) {
  const auto field = std::make_shared<const CoefficientField>(CoefficientField::smooth());
  const auto mesh = std::make_shared<const fd::TensorMesh>(fd::TensorMesh::shishkin(256, 1e-3, 0.75));
  for (auto _ : state) {
    const fd::System sys(field, mesh, 1e-3, fd::BoundaryCondition::dirichlet, state.range(0) != 0);
    benchmark::DoNotOptimize(sys.fv_matrix().nonZeros());
  }
}
BENCHMARK(BM_Assembly)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_L1Compare(benchmark::State& state) {
  const fd::TensorMesh mesh = fd::TensorMesh::uniform(256);
  const Point s{0.5, 0.5};
  const ImageGreenSpec spec(ImageVariant::bar_square, unit_field(), 0.05);
  auto ref = [&](Point p) { return eval_image(spec, s, p, DerivKind::value); };
  auto other = [&](Point p) { return std::exp(-std::abs(p.x - 0.5) - std::abs(p.y - 0.5)); };
  for (auto _ : state) {
    benchmark::DoNotOptimize(fd::l1_compare(other, ref, mesh, &s, state.range(0) != 0).diff);
  }
}
BENCHMARK(BM_L1Compare)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Gamma1d(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        fd::gamma_1d_check([](double) { return 1.0; }, 1.0, 1e-3, 2048, state.range(0) != 0).max_variation);
  }
}
BENCHMARK(BM_Gamma1d)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
