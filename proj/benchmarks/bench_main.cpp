#include <benchmark/benchmark.h>

#include "steklab/fem.hpp"
#include "steklab/nodal.hpp"
#include "steklab/orbit.hpp"
#include "steklab/steklov.hpp"

using namespace steklab;

namespace {

Resolution resolution_of(const benchmark::State& state) {
  const int axial = static_cast<int>(state.range(0));
  return {axial, 4 * axial};
}

void BM_BuildMesh(benchmark::State& state) {
  const auto surface = catalog("critical-catenoid");
  for (auto _ : state) benchmark::DoNotOptimize(build_symmetric_mesh(surface, resolution_of(state)));
}
BENCHMARK(BM_BuildMesh)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_AssembleStiffness(benchmark::State& state) {
  const auto sm = build_symmetric_mesh(catalog("critical-catenoid"), resolution_of(state));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_stiffness(sm.mesh));
}
BENCHMARK(BM_AssembleStiffness)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_DtnOperator(benchmark::State& state) {
  const auto sm = build_symmetric_mesh(catalog("critical-catenoid"), resolution_of(state));
  const auto k = assemble_stiffness(sm.mesh);
  const auto boundary = sm.mesh.boundary_vertices();
  for (auto _ : state) benchmark::DoNotOptimize(dtn_operator(k, boundary));
}
BENCHMARK(BM_DtnOperator)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_Spectrum(benchmark::State& state) {
  const auto sm = build_symmetric_mesh(catalog("critical-catenoid"), resolution_of(state));
  for (auto _ : state) benchmark::DoNotOptimize(steklov_spectrum(sm.mesh, 8));
}
BENCHMARK(BM_Spectrum)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_NodalDomains(benchmark::State& state) {
  const auto sm = build_symmetric_mesh(catalog("critical-catenoid"), resolution_of(state));
  Eigen::VectorXd u(sm.mesh.vertex_count());
  for (int v = 0; v < sm.mesh.vertex_count(); ++v) u[v] = sm.mesh.vertices[v].x();
  for (auto _ : state) benchmark::DoNotOptimize(nodal_domains(sm.mesh, u));
}
BENCHMARK(BM_NodalDomains)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

void BM_OrbitCount(benchmark::State& state) {
  OrbitPattern pattern;
  pattern.ending_edge = ArcLabel::E1;
  for (auto _ : state) benchmark::DoNotOptimize(orbit_nodal_count(pattern));
}
BENCHMARK(BM_OrbitCount);

}  // namespace

BENCHMARK_MAIN();
