#include <benchmark/benchmark.h>

#include "sheafcalc/connection.hpp"
#include "sheafcalc/linalg.hpp"
#include "sheafcalc/random_gen.hpp"

using namespace sheafcalc;

namespace {

UndirectedGraph complete_graph(std::size_t n) {
  std::vector<VertexId> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
  std::vector<UndirectedEdgeSpec> edges;
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      edges.push_back({"e" + std::to_string(k++), names[i], names[j]});
  return UndirectedGraph::build(names, edges);
}

void BM_SheafLaplacianExact(benchmark::State& state) {
  Rng rng = seeded_rng(1);
  const Digraph g = orient(complete_graph(static_cast<std::size_t>(state.range(0))));
  const CellSheaf f = random_sheaf(rng, g, Convention::VertexToEdge, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sheaf_laplacian_LF<Rational>(f).matrix);
  }
}
BENCHMARK(BM_SheafLaplacianExact)->Arg(6)->Arg(10)->Arg(14);

void BM_CohomologyRank(benchmark::State& state) {
  Rng rng = seeded_rng(2);
  const Digraph g = orient(complete_graph(static_cast<std::size_t>(state.range(0))));
  const CellSheaf f = random_sheaf(rng, g, Convention::VertexToEdge, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cohomology_dims(f).h0);
  }
}
BENCHMARK(BM_CohomologyRank)->Arg(6)->Arg(10)->Arg(14);

void BM_InnerFormLaplacian(benchmark::State& state) {
  const Digraph carrier = with_loop_policy(
      to_bidirected(complete_graph(static_cast<std::size_t>(state.range(0)))),
      LoopPolicy::OnePerVertex);
  const Fodc fodc = fodc_from_digraph(carrier);
  const Metric metric = ones_metric(fodc);
  for (auto _ : state) {
    benchmark::DoNotOptimize(graph_laplacians<Rational>(fodc, metric).delta_theta);
  }
}
BENCHMARK(BM_InnerFormLaplacian)->Arg(8)->Arg(12);

void BM_BochnerFloat(benchmark::State& state) {
  Rng rng = seeded_rng(3);
  const UndirectedGraph base = complete_graph(static_cast<std::size_t>(state.range(0)));
  const CellSheaf bundle = random_pushed_bundle(rng, base, 3, OrthogonalKind::FloatRotation);
  const Digraph carrier = with_loop_policy(bundle.graph(), LoopPolicy::OnePerVertex);
  const Fodc fodc = fodc_from_digraph(carrier);
  Transport adj = transport_from_sheaf(bundle, TransportMode::Adjoint);
  adj.carrier = carrier;
  const ConnectionForms forms = connection_from_transport(fodc, adj);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bochner_laplacian<double>(fodc, forms).matrix);
  }
}
BENCHMARK(BM_BochnerFloat)->Arg(6)->Arg(10);

void BM_TheoremVerifier(benchmark::State& state) {
  Rng rng = seeded_rng(4);
  const UndirectedGraph base = complete_graph(static_cast<std::size_t>(state.range(0)));
  const CellSheaf bundle = random_pushed_bundle(rng, base, 2, OrthogonalKind::FloatRotation);
  for (auto _ : state) {
    benchmark::DoNotOptimize(verify_theorem5(bundle, Backend::Float, 1e-9).pass);
  }
}
BENCHMARK(BM_TheoremVerifier)->Arg(5)->Arg(8);

void BM_EtaleCover(benchmark::State& state) {
  Rng rng = seeded_rng(5);
  const Digraph g = random_multigraph(rng, static_cast<std::size_t>(state.range(0)), 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(etale_directed_cover(g).components.size());
  }
}
BENCHMARK(BM_EtaleCover)->Arg(8)->Arg(16);

void BM_Spectrum(benchmark::State& state) {
  const UndirectedGraph g = complete_graph(static_cast<std::size_t>(state.range(0)));
  const RealMatrix lap = matrix_cast<double>(classical_laplacian(g));
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectrum(lap).size());
  }
}
BENCHMARK(BM_Spectrum)->Arg(16)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
