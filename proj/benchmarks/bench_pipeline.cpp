#include <benchmark/benchmark.h>

#include <map>

#include "potlab/field.hpp"
#include "potlab/levelset.hpp"
#include "potlab/monotone.hpp"
#include "potlab/shapes.hpp"
#include "potlab/solver.hpp"

using namespace potlab;

namespace {

const PotentialField& ellipsoid_field(int refinement) {
  static std::map<int, PotentialField> cache;
  auto it = cache.find(refinement);
  if (it == cache.end()) {
    const TriMesh mesh = make_shape(Ellipsoid{2.0, 1.0, 1.0}, refinement);
    it = cache.emplace(refinement, PotentialField(solve_density(mesh))).first;
  }
  return it->second;
}

void BM_Assemble(benchmark::State& state) {
  const TriMesh mesh = make_shape(Ellipsoid{2.0, 1.0, 1.0}, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_single_layer(mesh, {}));
  state.counters["faces"] = static_cast<double>(mesh.face_count());
}
BENCHMARK(BM_Assemble)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Solve(benchmark::State& state) {
  const TriMesh mesh = make_shape(Ellipsoid{2.0, 1.0, 1.0}, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_density(mesh));
  state.counters["faces"] = static_cast<double>(mesh.face_count());
}
BENCHMARK(BM_Solve)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_EvaluateHessian(benchmark::State& state) {
  const PotentialField& field = ellipsoid_field(4);
  // Near (1.2) and far (6) points relative to the semi-axis 2.
  const Vec3 x(state.range(0) == 0 ? 2.4 : 12.0, 0.3, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(field.evaluate(x, Derivatives::hessian));
}
BENCHMARK(BM_EvaluateHessian)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_ExtractLevel(benchmark::State& state) {
  const PotentialField& field = ellipsoid_field(3);
  LevelOptions options;
  options.resolution = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(extract_level(field, 0.5, options));
}
BENCHMARK(BM_ExtractLevel)->Arg(48)->Arg(96)->Unit(benchmark::kMillisecond);

void BM_Profile(benchmark::State& state) {
  const PotentialField& field = ellipsoid_field(3);
  ProfileOptions options;
  options.level.resolution = 48;
  for (auto _ : state) benchmark::DoNotOptimize(build_profiles(field, {1.5, 2.0, 3.0}, {0.2, 0.4, 0.6, 0.8}, options));
}
BENCHMARK(BM_Profile)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
