#include "sheafcalc/sheaf.hpp"

#include <algorithm>

#include "sheafcalc/cech.hpp"
#include "sheafcalc/linalg.hpp"

namespace sheafcalc {

namespace {

void check_shape(Convention convention, const RatMatrix& m, int vdim, int edim,
                 const EdgeId& edge, const VertexId& vertex) {
  const std::size_t want_rows = convention == Convention::VertexToEdge
                                    ? static_cast<std::size_t>(edim)
                                    : static_cast<std::size_t>(vdim);
  const std::size_t want_cols = convention == Convention::VertexToEdge
                                    ? static_cast<std::size_t>(vdim)
                                    : static_cast<std::size_t>(edim);
  if (m.rows() != want_rows || m.cols() != want_cols)
    fail(ErrorCode::ShapeMismatch,
         "map (" + edge + ", " + vertex + ") is " + std::to_string(m.rows()) + "x" +
             std::to_string(m.cols()) + ", expected " + std::to_string(want_rows) + "x" +
             std::to_string(want_cols));
}

}  // namespace

CellSheaf CellSheaf::build(Digraph graph, Convention convention,
                           std::vector<int> vertex_dims, std::vector<int> edge_dims,
                           const std::vector<IncidenceMapSpec>& maps) {
  CellSheaf sheaf;
  sheaf.graph_ = std::move(graph);
  sheaf.convention_ = convention;
  if (vertex_dims.size() != sheaf.graph_.vertex_count() ||
      edge_dims.size() != sheaf.graph_.edge_count())
    fail(ErrorCode::ShapeMismatch, "stalk dimension lists do not match the graph");
  for (int d : vertex_dims)
    if (d < 0) fail(ErrorCode::ShapeMismatch, "negative stalk dimension");
  for (int d : edge_dims)
    if (d < 0) fail(ErrorCode::ShapeMismatch, "negative stalk dimension");
  sheaf.vertex_dims_ = std::move(vertex_dims);
  sheaf.edge_dims_ = std::move(edge_dims);

  const std::size_t ne = sheaf.graph_.edge_count();
  std::vector<bool> have_tail(ne, false), have_head(ne, false);
  sheaf.tail_maps_.resize(ne);
  sheaf.head_maps_.resize(ne);

  for (const auto& spec : maps) {
    const std::size_t e = sheaf.graph_.edge_index(spec.edge);
    const std::size_t v = sheaf.graph_.vertex_index(spec.vertex);
    const bool at_tail = sheaf.graph_.tail_index(e) == v;
    const bool at_head = sheaf.graph_.head_index(e) == v;
    if (!at_tail && !at_head)
      fail(ErrorCode::ExtraMap, "(" + spec.edge + ", " + spec.vertex + ") is not an incidence");
    check_shape(convention, spec.matrix, sheaf.vertex_dims_[v], sheaf.edge_dims_[e],
                spec.edge, spec.vertex);
    if (sheaf.graph_.is_loop(e)) {
      // One map per self-loop.
      if (have_tail[e])
        fail(ErrorCode::ExtraMap, "duplicate map for (" + spec.edge + ", " + spec.vertex + ")");
      have_tail[e] = have_head[e] = true;
      sheaf.tail_maps_[e] = spec.matrix;
      sheaf.head_maps_[e] = spec.matrix;
      continue;
    }
    if (at_tail) {
      if (have_tail[e])
        fail(ErrorCode::ExtraMap, "duplicate map for (" + spec.edge + ", " + spec.vertex + ")");
      have_tail[e] = true;
      sheaf.tail_maps_[e] = spec.matrix;
    } else {
      if (have_head[e])
        fail(ErrorCode::ExtraMap, "duplicate map for (" + spec.edge + ", " + spec.vertex + ")");
      have_head[e] = true;
      sheaf.head_maps_[e] = spec.matrix;
    }
  }

  for (std::size_t e = 0; e < ne; ++e) {
    if (!have_tail[e])
      fail(ErrorCode::MissingIncidenceMap,
           "(" + sheaf.graph_.edge(e).id + ", " + sheaf.graph_.edge(e).tail + ")");
    if (!have_head[e])
      fail(ErrorCode::MissingIncidenceMap,
           "(" + sheaf.graph_.edge(e).id + ", " + sheaf.graph_.edge(e).head + ")");
  }
  return sheaf;
}

const RatMatrix& CellSheaf::map(std::size_t e, std::size_t v) const {
  if (graph_.tail_index(e) == v) return tail_maps_[e];
  if (graph_.head_index(e) == v) return head_maps_[e];
  fail(ErrorCode::ExtraMap, "(" + graph_.edge(e).id + ") is not incident to that vertex");
}

bool CellSheaf::operator==(const CellSheaf& other) const {
  return graph_ == other.graph_ && convention_ == other.convention_ &&
         vertex_dims_ == other.vertex_dims_ && edge_dims_ == other.edge_dims_ &&
         tail_maps_ == other.tail_maps_ && head_maps_ == other.head_maps_;
}

CellSheaf constant_sheaf(const Digraph& graph, Convention convention, int n) {
  if (n < 0) fail(ErrorCode::ShapeMismatch, "negative rank");
  std::vector<IncidenceMapSpec> maps;
  const RatMatrix id = RatMatrix::identity(static_cast<std::size_t>(n));
  for (const auto& e : graph.edges()) {
    maps.push_back({e.id, e.tail, id});
    if (e.tail != e.head) maps.push_back({e.id, e.head, id});
  }
  return CellSheaf::build(graph, convention,
                          std::vector<int>(graph.vertex_count(), n),
                          std::vector<int>(graph.edge_count(), n), maps);
}

bool is_locally_constant(const CellSheaf& sheaf) {
  const auto& g = sheaf.graph();
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    if (!is_invertible(sheaf.map_at_tail(e))) return false;
    if (!g.is_loop(e) && !is_invertible(sheaf.map_at_head(e))) return false;
  }
  return true;
}

CellSheaf dual_sheaf(const CellSheaf& sheaf) {
  const auto& g = sheaf.graph();
  const Convention dual_conv = sheaf.convention() == Convention::VertexToEdge
                                   ? Convention::EdgeToVertex
                                   : Convention::VertexToEdge;
  std::vector<IncidenceMapSpec> maps;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    maps.push_back({g.edge(e).id, g.edge(e).tail, sheaf.map_at_tail(e).transpose()});
    if (!g.is_loop(e))
      maps.push_back({g.edge(e).id, g.edge(e).head, sheaf.map_at_head(e).transpose()});
  }
  return CellSheaf::build(g, dual_conv, sheaf.vertex_dims(), sheaf.edge_dims(), maps);
}

bool is_vector_bundle(const CellSheaf& sheaf) {
  const auto& g = sheaf.graph();
  if (g.vertex_count() == 0) return true;
  const int n = sheaf.vertex_dim(0);
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    if (sheaf.vertex_dim(v) != n) return false;
  for (std::size_t e = 0; e < g.edge_count(); ++e)
    if (sheaf.edge_dim(e) != n) return false;
  return is_locally_constant(sheaf);
}

int bundle_rank(const CellSheaf& sheaf) {
  if (!is_vector_bundle(sheaf))
    fail(ErrorCode::PreconditionFailed, "sheaf is not a vector bundle");
  return sheaf.graph().vertex_count() == 0 ? 0 : sheaf.vertex_dim(0);
}

CellSheaf duplicate_onto_bidirected(const CellSheaf& sheaf) {
  if (sheaf.convention() != Convention::VertexToEdge)
    fail(ErrorCode::PreconditionFailed, "expected a vertex-to-edge sheaf");
  const Digraph& g = sheaf.graph();
  const UndirectedGraph und = underlying_undirected(g);
  const Digraph carrier = to_bidirected(und);

  std::vector<int> edge_dims(carrier.edge_count(), 0);
  std::vector<IncidenceMapSpec> maps;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto& spec = g.edge(e);
    if (g.is_loop(e)) {
      edge_dims[carrier.edge_index(spec.id)] = sheaf.edge_dim(e);
      maps.push_back({spec.id, spec.tail, sheaf.map_at_tail(e)});
      continue;
    }
    for (const char* suffix : {":fwd", ":bwd"}) {
      const EdgeId id = spec.id + suffix;
      edge_dims[carrier.edge_index(id)] = sheaf.edge_dim(e);
      maps.push_back({id, spec.tail, sheaf.map_at_tail(e)});
      maps.push_back({id, spec.head, sheaf.map_at_head(e)});
    }
  }
  return CellSheaf::build(carrier, Convention::VertexToEdge, sheaf.vertex_dims(),
                          edge_dims, maps);
}

namespace {

struct FwdBwdPairing {
  // For each undirected edge: fwd edge index in the bidirected carrier, and
  // the base id. Loops are their own pairing.
  std::vector<std::pair<EdgeId, std::size_t>> fwd_of;  // (base id, fwd index)
  Digraph base;                                        // oriented carrier
};

FwdBwdPairing split_theta_image(const Digraph& carrier) {
  std::vector<UndirectedEdgeSpec> base_edges;
  std::vector<std::pair<EdgeId, std::size_t>> fwd_of;
  std::set<std::size_t> matched;
  auto has_suffix = [](const EdgeId& id, const char* suffix) {
    const std::size_t n = std::string(suffix).size();
    return id.size() > n && id.substr(id.size() - n) == suffix;
  };
  // Base edges follow the position of their :fwd representative (or loop);
  // file order of the :bwd partners is free.
  for (std::size_t e = 0; e < carrier.edge_count(); ++e) {
    const auto& spec = carrier.edge(e);
    if (carrier.is_loop(e)) {
      matched.insert(e);
      base_edges.push_back({spec.id, spec.tail, spec.head});
      fwd_of.push_back({spec.id, e});
      continue;
    }
    if (!has_suffix(spec.id, ":fwd")) continue;
    const EdgeId base = spec.id.substr(0, spec.id.size() - 4);
    const EdgeId bwd = base + ":bwd";
    if (!carrier.has_edge_id(bwd))
      fail(ErrorCode::NotAThetaImage, "missing partner '" + bwd + "'");
    const std::size_t eb = carrier.edge_index(bwd);
    if (carrier.tail_index(eb) != carrier.head_index(e) ||
        carrier.head_index(eb) != carrier.tail_index(e))
      fail(ErrorCode::NotAThetaImage, "'" + bwd + "' does not reverse '" + spec.id + "'");
    matched.insert(e);
    matched.insert(eb);
    base_edges.push_back({base, spec.tail, spec.head});
    fwd_of.push_back({base, e});
  }
  for (std::size_t e = 0; e < carrier.edge_count(); ++e)
    if (!matched.count(e))
      fail(ErrorCode::NotAThetaImage,
           "edge '" + carrier.edge(e).id + "' lacks the fwd/bwd pairing");
  FwdBwdPairing out;
  out.fwd_of = std::move(fwd_of);
  UndirectedGraph und = UndirectedGraph::build(carrier.vertex_ids(), base_edges);
  out.base = orient(und);
  return out;
}

}  // namespace

CellSheaf restrict_from_bidirected(const CellSheaf& sheaf) {
  const Digraph& carrier = sheaf.graph();
  const FwdBwdPairing pairing = split_theta_image(carrier);
  const Digraph& base = pairing.base;

  std::vector<int> edge_dims(base.edge_count(), 0);
  std::vector<IncidenceMapSpec> maps;
  for (std::size_t be = 0; be < base.edge_count(); ++be) {
    const std::size_t fwd = pairing.fwd_of[be].second;
    edge_dims[be] = sheaf.edge_dim(fwd);
    // Attach by the fwd edge's own vertices: the base orientation may have
    // been normalised the other way round.
    const auto& fwd_spec = carrier.edge(fwd);
    maps.push_back({base.edge(be).id, fwd_spec.tail, sheaf.map_at_tail(fwd)});
    if (fwd_spec.tail != fwd_spec.head)
      maps.push_back({base.edge(be).id, fwd_spec.head, sheaf.map_at_head(fwd)});
  }
  return CellSheaf::build(base, sheaf.convention(), sheaf.vertex_dims(), edge_dims, maps);
}

CellSheaf extend_onto_bidirected(const CellSheaf& sheaf) {
  if (sheaf.convention() != Convention::EdgeToVertex)
    fail(ErrorCode::PreconditionFailed, "expected an edge-to-vertex sheaf");
  const Digraph& g = sheaf.graph();
  const UndirectedGraph und = underlying_undirected(g);
  const Digraph carrier = to_bidirected(und);

  std::vector<int> edge_dims(carrier.edge_count(), 0);
  std::vector<IncidenceMapSpec> maps;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto& spec = g.edge(e);
    if (g.is_loop(e)) {
      edge_dims[carrier.edge_index(spec.id)] = sheaf.edge_dim(e);
      maps.push_back({spec.id, spec.tail, sheaf.map_at_tail(e)});
      continue;
    }
    const RatMatrix& to_tail = sheaf.map_at_tail(e);
    const RatMatrix& to_head = sheaf.map_at_head(e);
    const std::size_t m = static_cast<std::size_t>(sheaf.edge_dim(e));

    // gamma stacks both restriction maps; its kernel is what the :bwd stalk
    // quotients away.
    RatMatrix gamma(to_tail.rows() + to_head.rows(), m);
    gamma.set_block(0, 0, to_tail);
    gamma.set_block(to_tail.rows(), 0, to_head);
    RatMatrix reduced = gamma;
    const std::vector<std::size_t> pivots = rref_in_place(reduced);
    const std::size_t q = pivots.size();  // dim of the quotient

    // Section of the quotient: representatives in the span of the pivot
    // coordinates. The induced maps are the originals composed with it.
    RatMatrix section(m, q);
    for (std::size_t j = 0; j < q; ++j) section(pivots[j], j) = Rational(1);

    const EdgeId fwd = spec.id + ":fwd";
    const EdgeId bwd = spec.id + ":bwd";
    edge_dims[carrier.edge_index(fwd)] = static_cast<int>(m);
    edge_dims[carrier.edge_index(bwd)] = static_cast<int>(q);
    maps.push_back({fwd, spec.tail, to_tail});
    maps.push_back({fwd, spec.head, to_head});
    maps.push_back({bwd, spec.tail, to_tail * section});
    maps.push_back({bwd, spec.head, to_head * section});
  }
  return CellSheaf::build(carrier, Convention::EdgeToVertex, sheaf.vertex_dims(),
                          edge_dims, maps);
}

GlobalSections global_sections(const CellSheaf& sheaf) {
  const CochainComplex complex = cochain_complex(sheaf);
  GlobalSections out;
  out.basis = kernel_basis(complex.d);
  out.dim = static_cast<int>(out.basis.cols());
  return out;
}

}  // namespace sheafcalc
