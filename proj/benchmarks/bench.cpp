#include "srkit/expr.hpp"
#include "srkit/frame.hpp"
#include "srkit/grushin.hpp"
#include "srkit/nilpotent.hpp"
#include "srkit/obstruction.hpp"

#include <benchmark/benchmark.h>

using namespace srkit;

namespace {

SRFrame engel() {
  return SRFrame("engel", {parse_vector_field("d1", 4), parse_vector_field("d2 + z1*d3 + (1/2)*z1^2*d4", 4)});
}

SRFrame heisenberg() {
  return SRFrame("heisenberg", {parse_vector_field("dx - (1/2)*y*dz", 3), parse_vector_field("dy + (1/2)*x*dz", 3)});
}

void BM_PolynomialProduct(benchmark::State& state) {
  auto a = parse_polynomial("(1 + x + y + z)^6", 3);
  auto b = parse_polynomial("(x - 2*y + 3*z)^5", 3);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_PolynomialProduct);

void BM_LieBracket(benchmark::State& state) {
  auto x = parse_vector_field("x^3*y*dx + (y^2 - z)*dy + x*y*z*dz", 3);
  auto y = parse_vector_field("(x + z^2)*dx - x*y^2*dz", 3);
  for (auto _ : state) benchmark::DoNotOptimize(lie_bracket(x, y));
}
BENCHMARK(BM_LieBracket);

void BM_FiltrationEngel(benchmark::State& state) {
  auto f = engel();
  Point origin(4, Rational(0));
  for (auto _ : state) benchmark::DoNotOptimize(filtration_at(f, origin, 4));
}
BENCHMARK(BM_FiltrationEngel);

void BM_StratifiedEngel(benchmark::State& state) {
  auto f = engel();
  WeightVector w({1, 1, 2, 3});
  for (auto _ : state) benchmark::DoNotOptimize(stratified_algebra(nilpotent_approximation(f, w), w));
}
BENCHMARK(BM_StratifiedEngel);

void BM_VerdictHeisenberg(benchmark::State& state) {
  auto f = heisenberg();
  auto m = Density::lebesgue(3);
  Point origin(3, Rational(0));
  WeightVector w({1, 1, 2});
  for (auto _ : state) benchmark::DoNotOptimize(no_be_verdict(f, m, origin, w));
}
BENCHMARK(BM_VerdictHeisenberg);

void BM_GeodesicShoot(benchmark::State& state) {
  const double steps = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(grushin::geodesic_shoot({1, 0}, {0, 1}, 2, 2 / steps));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GeodesicShoot)->Arg(512)->Arg(2048)->Arg(8192);

void BM_GrushinDistance(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(grushin::distance_numeric({2, 0}, {2, 1}));
}
BENCHMARK(BM_GrushinDistance)->Unit(benchmark::kMillisecond);

void BM_MidpointBox(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(grushin::midpoint_box(10, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_MidpointBox)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
