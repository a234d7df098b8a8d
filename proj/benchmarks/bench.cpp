#include <benchmark/benchmark.h>

#include "toposkit/catalog.hpp"
#include "toposkit/classifier.hpp"
#include "toposkit/corpus.hpp"
#include "toposkit/etcs.hpp"
#include "toposkit/geom.hpp"
#include "toposkit/sites.hpp"
#include "toposkit/spaces.hpp"

using namespace toposkit;

namespace {

void BM_Sieves(benchmark::State& state) {
  auto c = catalog::chain(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    for (int a = 0; a < c->object_count(); ++a) benchmark::DoNotOptimize(sieves_on(*c, a));
  }
}
BENCHMARK(BM_Sieves)->DenseRange(2, 5);

void BM_Omega(benchmark::State& state) {
  auto c = catalog::commutative_square();
  for (auto _ : state) benchmark::DoNotOptimize(omega(c));
}
BENCHMARK(BM_Omega);

void BM_Topologies(benchmark::State& state) {
  auto om = shared_omega(catalog::chain(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_topologies(om));
}
BENCHMARK(BM_Topologies)->DenseRange(2, 4);

void BM_LTOperators(benchmark::State& state) {
  auto om = shared_omega(catalog::walking_arrow());
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_lt_operators(om));
}
BENCHMARK(BM_LTOperators);

void BM_VerifyClassifier(benchmark::State& state) {
  auto c = catalog::walking_arrow();
  auto corpus = standard_corpus(c, 3);
  for (auto _ : state) benchmark::DoNotOptimize(verify_classifier(c, corpus));
}
BENCHMARK(BM_VerifyClassifier)->Unit(benchmark::kMillisecond);

void BM_Sheafify(benchmark::State& state) {
  auto x = sierpinski_space();
  auto frame = open_frame(x);
  auto t = canonical_topology(x, frame.category);
  auto corpus = standard_corpus(frame.category, 3);
  for (auto _ : state) {
    for (const auto& p : corpus) benchmark::DoNotOptimize(sheafify(p, t));
  }
}
BENCHMARK(BM_Sheafify)->Unit(benchmark::kMillisecond);

void BM_EnumerateSpaces(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_spaces(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_EnumerateSpaces)->DenseRange(2, 4);

void BM_RecoverLocale(benchmark::State& state) {
  auto x = discrete_space(3);
  for (auto _ : state) benchmark::DoNotOptimize(recover_locale(x));
}
BENCHMARK(BM_RecoverLocale)->Unit(benchmark::kMillisecond);

void BM_Points(benchmark::State& state) {
  auto c = catalog::commutative_square();
  for (auto _ : state) benchmark::DoNotOptimize(points(c, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Points)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_AdjointTriple(benchmark::State& state) {
  auto c = catalog::walking_arrow();
  auto f = identity_functor(c);
  auto corpus = standard_corpus(c, 3);
  for (auto _ : state) {
    auto triple = adjoint_triple(f);
    for (const auto& p : corpus) benchmark::DoNotOptimize(triple.lower(p));
  }
}
BENCHMARK(BM_AdjointTriple)->Unit(benchmark::kMillisecond);

void BM_WellPointed(benchmark::State& state) {
  auto t = full_corpus(catalog::terminal_category(), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(check_well_pointed(t));
}
BENCHMARK(BM_WellPointed)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
