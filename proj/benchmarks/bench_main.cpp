#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "qdot/coupling.hpp"
#include "qdot/dynamics.hpp"
#include "qdot/entanglement.hpp"
#include "qdot/exact_ed.hpp"

using namespace qdot;

static void BM_TwoLevelPropagation(benchmark::State& state) {
  const model::TwoLevelH h{0.3, -0.2, 1.7};
  const auto start = dynamics::QState::computational(1, 0);
  double t = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dynamics::evolve_two_level(start, h, t));
    t += 0.1;
  }
}
BENCHMARK(BM_TwoLevelPropagation);

static void BM_EvolveNQubit(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  coupling::CouplingMatrix vm;
  vm.v_ueV = Eigen::MatrixXd::Constant(n, n, 0.1);
  vm.v_ueV.diagonal().setZero();
  const std::vector<double> eps(n, 0.0), gam(n, 1.0);
  const Eigen::MatrixXd h = coupling::build_array_h(eps, gam, vm);
  const auto start = dynamics::QState::computational(n, 0);
  for (auto _ : state)
    benchmark::DoNotOptimize(dynamics::evolve_nqubit(start, h, 1.0));
  state.SetComplexityN(1 << n);
}
BENCHMARK(BM_EvolveNQubit)->DenseRange(2, 10, 2)->Complexity();

static void BM_PropagatorReuse(benchmark::State& state) {
  const Eigen::Matrix4d h = coupling::two_qubit_energy_basis(1.0, 1.0, 0.2);
  const dynamics::Propagator prop(h);
  const auto start = dynamics::QState::computational(2, 2);
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(prop.apply(start, t));
    t += 0.05;
  }
}
BENCHMARK(BM_PropagatorReuse);

static void BM_Concurrence(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> gauss;
  Eigen::VectorXcd psi(4);
  for (int i = 0; i < 4; ++i) psi(i) = std::complex<double>(gauss(rng), gauss(rng));
  psi /= psi.norm();
  const auto s = dynamics::QState::from_amplitudes(2, psi);
  for (auto _ : state) benchmark::DoNotOptimize(entangle::concurrence_pure(s));
}
BENCHMARK(BM_Concurrence);

static void BM_CouplingMatrix(benchmark::State& state) {
  coupling::ArrayGeometry g;
  g.n_dots = static_cast<int>(state.range(0));
  g.spacing_nm = 300.0;
  g.side_nm = 100.0;
  g.image_distance_nm = 20.0;
  g.permittivity = 12.9;
  for (auto _ : state)
    benchmark::DoNotOptimize(coupling::coupling_matrix(g, coupling::CouplingModel::Exact));
}
BENCHMARK(BM_CouplingMatrix)->Arg(8)->Arg(32);

static void BM_CoulombTable(benchmark::State& state) {
  const int cutoff = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(ed::CoulombTensor::build(cutoff, 32));
}
BENCHMARK(BM_CoulombTable)->Arg(4)->Arg(8);

static void BM_BuildEDMatrix(benchmark::State& state) {
  const int cutoff = static_cast<int>(state.range(0));
  const auto tensor = ed::CoulombTensor::build(cutoff, 32);
  ed::EDConfig cfg;
  cfg.L_over_a = 10.0;
  cfg.sp_cutoff = cutoff;
  cfg.quadrature_order = 32;
  for (auto _ : state) benchmark::DoNotOptimize(ed::build_h(cfg, tensor));
}
BENCHMARK(BM_BuildEDMatrix)->Arg(4)->Arg(6);

BENCHMARK_MAIN();
