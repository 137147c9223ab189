#include <random>

#include <benchmark/benchmark.h>

#include "aaipp/ipp.hpp"

using namespace aaipp;

namespace {

fem::FeSpace cavity_space(int n) {
  return fem::build_space(mesh::tag_cavity_boundary(mesh::barycentric_refine(mesh::structured_unit_square(n))));
}

std::vector<double> random_field(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

void BM_AssembleStiffness(benchmark::State& state) {
  const auto s = cavity_space(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fem::assemble_stiffness(s));
  state.counters["dofs"] = s.num_vector();
}
BENCHMARK(BM_AssembleStiffness)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_AssembleConvection(benchmark::State& state) {
  const auto s = cavity_space(static_cast<int>(state.range(0)));
  const auto w = random_field(static_cast<std::size_t>(s.num_vector()), 1);
  auto target = s.vector_pattern();
  for (auto _ : state) {
    fem::add_convection(s, w, 1.0, target);
    benchmark::ClobberMemory();
  }
  state.counters["dofs"] = s.num_vector();
}
BENCHMARK(BM_AssembleConvection)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_LuFactor(benchmark::State& state) {
  const auto s = cavity_space(static_cast<int>(state.range(0)));
  auto k = fem::assemble_stiffness(s);
  k.add_scaled(1.0, fem::assemble_graddiv(s));
  fem::add_convection(s, random_field(static_cast<std::size_t>(s.num_vector()), 2), 1.0, k);
  std::vector<double> b(static_cast<std::size_t>(s.num_vector()), 1.0);
  fem::apply_dirichlet_in_place(k, b, fem::cavity_dirichlet(s));
  linalg::SparseLu lu(k);
  for (auto _ : state) {
    lu.refactor(k);
    benchmark::DoNotOptimize(lu.solve(b));
  }
  state.counters["dofs"] = s.num_vector();
}
BENCHMARK(BM_LuFactor)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_AndersonStep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const int depth = static_cast<int>(state.range(1));
  const auto c = random_field(n, 3);
  anderson::AndersonAccelerator aa(std::vector<double>(n, 0.0), anderson::AndersonConfig{depth});
  std::vector<double> g(n);
  for (auto _ : state) {
    const auto& x = aa.current();
    for (std::size_t i = 0; i < n; ++i) g[i] = 0.9 * x[(i + 1) % n] + c[i];
    benchmark::DoNotOptimize(aa.step(g));
  }
}
BENCHMARK(BM_AndersonStep)->Args({100000, 2})->Args({100000, 10})->Unit(benchmark::kMicrosecond);

void BM_PenaltyPicardStep(benchmark::State& state) {
  const auto s = cavity_space(static_cast<int>(state.range(0)));
  ipp::ProblemConfig cfg;
  cfg.nu = 1e-3;
  cfg.bc = fem::cavity_dirichlet(s);
  const auto ops = ipp::assemble_operators(s, cfg);
  ipp::PenaltyPicardMap g(cfg, ops);
  auto st = ipp::IppState::initial(fem::boundary_lift(s, cfg.bc), ops);
  for (auto _ : state) st = g(st);
  state.counters["dofs"] = s.num_vector();
}
BENCHMARK(BM_PenaltyPicardStep)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
