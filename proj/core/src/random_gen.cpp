#include "sheafcalc/random_gen.hpp"

#include <cmath>

namespace sheafcalc {

std::size_t pick(Rng& rng, std::size_t n) { return n == 0 ? 0 : rng() % n; }

Rational random_rational(Rng& rng) {
  const long num = static_cast<long>(pick(rng, 9)) - 4;
  const long den = static_cast<long>(pick(rng, 3)) + 1;
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational random_nonzero_rational(Rng& rng) {
  Rational r = random_rational(rng);
  while (r == 0) r = random_rational(rng);
  return r;
}

std::vector<Rational> random_function(Rng& rng, std::size_t n) {
  std::vector<Rational> f(n);
  for (auto& v : f) v = random_rational(rng);
  return f;
}

namespace {

std::vector<VertexId> vertex_names(std::size_t n) {
  std::vector<VertexId> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
  return names;
}

}  // namespace

UndirectedGraph random_undirected_simple(Rng& rng, std::size_t max_vertices) {
  const std::size_t n = 2 + pick(rng, max_vertices - 1);
  const auto names = vertex_names(n);
  std::vector<UndirectedEdgeSpec> edges;
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (pick(rng, 5) < 2) edges.push_back({"e" + std::to_string(k++), names[i], names[j]});
  return UndirectedGraph::build(names, edges);
}

Digraph random_simple_digraph(Rng& rng, std::size_t max_vertices) {
  const std::size_t n = 2 + pick(rng, max_vertices - 1);
  const auto names = vertex_names(n);
  std::vector<EdgeSpec> edges;
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (pick(rng, 5) < 2) edges.push_back({"e" + std::to_string(k++), names[i], names[j]});
    }
  return Digraph::build(names, edges, LoopPolicy::OnePerVertex);
}

Digraph random_multigraph(Rng& rng, std::size_t max_vertices, std::size_t max_multiplicity) {
  const std::size_t n = 2 + pick(rng, max_vertices - 1);
  const auto names = vertex_names(n);
  std::vector<EdgeSpec> edges;
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (pick(rng, 5) < 2) {
        const std::size_t copies = 1 + pick(rng, max_multiplicity);
        for (std::size_t c = 0; c < copies; ++c)
          edges.push_back({"e" + std::to_string(k++), names[i], names[j]});
      }
    }
  // At least one parallel pair so the cover is non-trivial.
  if (edges.empty()) {
    edges.push_back({"e0", names[0], names[1]});
    edges.push_back({"e1", names[0], names[1]});
  }
  return Digraph::build(names, edges, LoopPolicy::OnePerVertex);
}

CellSheaf random_sheaf(Rng& rng, const Digraph& graph, Convention convention, int max_dim) {
  std::vector<int> vdims(graph.vertex_count());
  std::vector<int> edims(graph.edge_count());
  for (auto& d : vdims) d = static_cast<int>(pick(rng, static_cast<std::size_t>(max_dim) + 1));
  for (auto& d : edims) d = static_cast<int>(pick(rng, static_cast<std::size_t>(max_dim) + 1));

  std::vector<IncidenceMapSpec> maps;
  for (std::size_t e = 0; e < graph.edge_count(); ++e) {
    const auto& spec = graph.edge(e);
    auto make = [&](std::size_t v) {
      const std::size_t rows = convention == Convention::VertexToEdge
                                   ? static_cast<std::size_t>(edims[e])
                                   : static_cast<std::size_t>(vdims[v]);
      const std::size_t cols = convention == Convention::VertexToEdge
                                   ? static_cast<std::size_t>(vdims[v])
                                   : static_cast<std::size_t>(edims[e]);
      RatMatrix m(rows, cols);
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = random_rational(rng);
      return m;
    };
    maps.push_back({spec.id, spec.tail, make(graph.tail_index(e))});
    if (!graph.is_loop(e)) maps.push_back({spec.id, spec.head, make(graph.head_index(e))});
  }
  return CellSheaf::build(graph, convention, vdims, edims, maps);
}

RatMatrix random_invertible(Rng& rng, std::size_t n) {
  RatMatrix lower = RatMatrix::identity(n);
  RatMatrix upper = RatMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i > j) lower(i, j) = random_rational(rng);
      if (i < j) upper(i, j) = random_rational(rng);
    }
  for (std::size_t i = 0; i < n; ++i)
    upper(i, i) = pick(rng, 2) == 0 ? Rational(1) : Rational(-1);
  return lower * upper;
}

RatMatrix random_signed_permutation(Rng& rng, std::size_t n) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[pick(rng, i)]);
  RatMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    m(i, perm[i]) = pick(rng, 2) == 0 ? Rational(1) : Rational(-1);
  return m;
}

RatMatrix random_orthogonal_double(Rng& rng, std::size_t n) {
  RealMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = pick(rng, 2) == 0 ? 1.0 : -1.0;
  // Product of Givens rotations with random angles.
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = p + 1; q < n; ++q) {
      const double angle =
          2.0 * 3.14159265358979323846 * (static_cast<double>(rng() >> 11) / 9007199254740992.0);
      const double c = std::cos(angle), s = std::sin(angle);
      for (std::size_t j = 0; j < n; ++j) {
        const double a = m(p, j), b = m(q, j);
        m(p, j) = c * a - s * b;
        m(q, j) = s * a + c * b;
      }
    }
  return matrix_from_double(m);
}

CellSheaf random_pushed_bundle(Rng& rng, const UndirectedGraph& base, int rank,
                               OrthogonalKind kind) {
  const Digraph oriented = orient(base);
  const std::size_t n = static_cast<std::size_t>(rank);
  auto make = [&] {
    return kind == OrthogonalKind::SignedPermutation ? random_signed_permutation(rng, n)
                                                     : random_orthogonal_double(rng, n);
  };
  std::vector<IncidenceMapSpec> maps;
  for (std::size_t e = 0; e < oriented.edge_count(); ++e) {
    const auto& spec = oriented.edge(e);
    maps.push_back({spec.id, spec.tail, make()});
    if (!oriented.is_loop(e)) maps.push_back({spec.id, spec.head, make()});
  }
  const CellSheaf on_base = CellSheaf::build(
      oriented, Convention::VertexToEdge, std::vector<int>(oriented.vertex_count(), rank),
      std::vector<int>(oriented.edge_count(), rank), maps);
  return duplicate_onto_bidirected(on_base);
}

}  // namespace sheafcalc
