#include "sheafcalc/graph.hpp"

#include <algorithm>
#include <array>

namespace sheafcalc {

namespace {

constexpr std::size_t kMaxEdges = 100000;

}  // namespace

Digraph Digraph::build(std::vector<VertexId> vertices, std::vector<EdgeSpec> edges,
                       LoopPolicy policy) {
  Digraph g;
  g.policy_ = policy;
  g.vertices_ = std::move(vertices);
  for (std::size_t i = 0; i < g.vertices_.size(); ++i) {
    if (g.vertices_[i].empty()) fail(ErrorCode::ParseError, "empty vertex id");
    if (!g.vertex_index_.emplace(g.vertices_[i], i).second)
      fail(ErrorCode::DuplicateId, "vertex '" + g.vertices_[i] + "'");
  }

  if (policy == LoopPolicy::OnePerVertex) {
    // One self-loop per vertex is a calculus-side device: user loops beyond
    // it are rejected, missing ones are synthesised below.
    std::set<VertexId> looped;
    for (const auto& e : edges) {
      if (e.tail == e.head && !looped.insert(e.tail).second)
        fail(ErrorCode::ExtraSelfLoop, "second self-loop at '" + e.tail + "'");
    }
    for (const auto& v : g.vertices_)
      if (!looped.count(v)) edges.push_back({"loop:" + v, v, v});
  }

  if (edges.size() > kMaxEdges)
    fail(ErrorCode::CapacityExceeded, "edge count exceeds 100000");

  g.edges_ = std::move(edges);
  for (std::size_t i = 0; i < g.edges_.size(); ++i) {
    const auto& e = g.edges_[i];
    if (e.id.empty()) fail(ErrorCode::ParseError, "empty edge id");
    if (!g.edge_index_.emplace(e.id, i).second)
      fail(ErrorCode::DuplicateId, "edge '" + e.id + "'");
    auto tail = g.vertex_index_.find(e.tail);
    auto head = g.vertex_index_.find(e.head);
    if (tail == g.vertex_index_.end())
      fail(ErrorCode::UnknownVertex, "edge '" + e.id + "' tail '" + e.tail + "'");
    if (head == g.vertex_index_.end())
      fail(ErrorCode::UnknownVertex, "edge '" + e.id + "' head '" + e.head + "'");
    g.edge_tail_.push_back(tail->second);
    g.edge_head_.push_back(head->second);
    g.arcs_.insert({tail->second, head->second});
    if (tail->second != head->second) g.non_loop_edges_.push_back(i);
  }
  return g;
}

std::size_t Digraph::vertex_index(const VertexId& v) const {
  auto it = vertex_index_.find(v);
  if (it == vertex_index_.end()) fail(ErrorCode::UnknownVertex, "'" + v + "'");
  return it->second;
}

std::size_t Digraph::edge_index(const EdgeId& e) const {
  auto it = edge_index_.find(e);
  if (it == edge_index_.end()) fail(ErrorCode::UnknownEdge, "'" + e + "'");
  return it->second;
}

bool Digraph::has_arc(std::size_t tail, std::size_t head) const {
  return arcs_.count({tail, head}) > 0;
}

bool Digraph::is_simple_with_loops() const {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::vector<bool> has_loop(vertex_count(), false);
  for (std::size_t e = 0; e < edge_count(); ++e) {
    if (!seen.insert({edge_tail_[e], edge_head_[e]}).second) return false;
    if (is_loop(e)) has_loop[edge_tail_[e]] = true;
  }
  return std::all_of(has_loop.begin(), has_loop.end(), [](bool b) { return b; });
}

std::size_t Digraph::component_count() const {
  std::vector<std::size_t> parent(vertex_count());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t e = 0; e < edge_count(); ++e)
    parent[find(edge_tail_[e])] = find(edge_head_[e]);
  std::set<std::size_t> roots;
  for (std::size_t i = 0; i < parent.size(); ++i) roots.insert(find(i));
  return roots.size();
}

bool Digraph::operator==(const Digraph& other) const {
  if (vertices_ != other.vertices_ || edges_.size() != other.edges_.size())
    return false;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (edges_[e].id != other.edges_[e].id || edges_[e].tail != other.edges_[e].tail ||
        edges_[e].head != other.edges_[e].head)
      return false;
  }
  return true;
}

UndirectedGraph UndirectedGraph::build(std::vector<VertexId> vertices,
                                       std::vector<UndirectedEdgeSpec> edges) {
  UndirectedGraph g;
  g.vertices_ = std::move(vertices);
  for (std::size_t i = 0; i < g.vertices_.size(); ++i) {
    if (g.vertices_[i].empty()) fail(ErrorCode::ParseError, "empty vertex id");
    if (!g.vertex_index_.emplace(g.vertices_[i], i).second)
      fail(ErrorCode::DuplicateId, "vertex '" + g.vertices_[i] + "'");
  }
  if (edges.size() > 100000) fail(ErrorCode::CapacityExceeded, "edge count exceeds 100000");
  std::set<EdgeId> ids;
  for (auto& e : edges) {
    if (e.id.empty()) fail(ErrorCode::ParseError, "empty edge id");
    if (!ids.insert(e.id).second) fail(ErrorCode::DuplicateId, "edge '" + e.id + "'");
    auto a = g.vertex_index_.find(e.a);
    auto b = g.vertex_index_.find(e.b);
    if (a == g.vertex_index_.end())
      fail(ErrorCode::UnknownVertex, "edge '" + e.id + "' endpoint '" + e.a + "'");
    if (b == g.vertex_index_.end())
      fail(ErrorCode::UnknownVertex, "edge '" + e.id + "' endpoint '" + e.b + "'");
    if (a->second > b->second) std::swap(e.a, e.b);
  }
  g.edges_ = std::move(edges);
  return g;
}

std::size_t UndirectedGraph::vertex_index(const VertexId& v) const {
  auto it = vertex_index_.find(v);
  if (it == vertex_index_.end()) fail(ErrorCode::UnknownVertex, "'" + v + "'");
  return it->second;
}

bool UndirectedGraph::is_loop(std::size_t e) const {
  return edges_[e].a == edges_[e].b;
}

Digraph to_bidirected(const UndirectedGraph& g) {
  std::vector<EdgeSpec> edges;
  edges.reserve(2 * g.edge_count());
  for (const auto& e : g.edges()) {
    if (e.a == e.b) {
      edges.push_back({e.id, e.a, e.b});
    } else {
      edges.push_back({e.id + ":fwd", e.a, e.b});
      edges.push_back({e.id + ":bwd", e.b, e.a});
    }
  }
  return Digraph::build(g.vertex_ids(), std::move(edges), LoopPolicy::None);
}

Digraph orient(const UndirectedGraph& g) {
  std::vector<EdgeSpec> edges;
  edges.reserve(g.edge_count());
  for (const auto& e : g.edges()) edges.push_back({e.id, e.a, e.b});
  return Digraph::build(g.vertex_ids(), std::move(edges), LoopPolicy::None);
}

UndirectedGraph underlying_undirected(const Digraph& g) {
  std::vector<UndirectedEdgeSpec> edges;
  edges.reserve(g.edge_count());
  for (const auto& e : g.edges()) edges.push_back({e.id, e.tail, e.head});
  return UndirectedGraph::build(g.vertex_ids(), std::move(edges));
}

Digraph with_loop_policy(const Digraph& g, LoopPolicy policy) {
  std::vector<EdgeSpec> edges(g.edges().begin(), g.edges().end());
  return Digraph::build(g.vertex_ids(), std::move(edges), policy);
}

bool is_bidirected(const Digraph& g) {
  std::map<std::pair<std::size_t, std::size_t>, long> count;
  for (std::size_t e : g.non_loop_edges())
    ++count[{g.tail_index(e), g.head_index(e)}];
  for (const auto& [arc, n] : count) {
    auto rev = count.find({arc.second, arc.first});
    if (rev == count.end() || rev->second != n) return false;
  }
  return true;
}

namespace {

IncidencePoset incidence_poset_impl(const std::vector<VertexId>& vertices,
                                    const std::vector<std::pair<EdgeId, std::set<VertexId>>>& incident) {
  IncidencePoset poset;
  poset.elements.insert(poset.elements.end(), vertices.begin(), vertices.end());
  for (const auto& [id, ends] : incident) {
    poset.elements.push_back(id);
    for (const auto& v : ends) poset.relations.emplace_back(v, id);
  }
  std::sort(poset.relations.begin(), poset.relations.end());
  return poset;
}

}  // namespace

IncidencePoset incidence_poset(const Digraph& g) {
  std::vector<std::pair<EdgeId, std::set<VertexId>>> incident;
  for (const auto& e : g.edges()) incident.push_back({e.id, {e.tail, e.head}});
  return incidence_poset_impl(g.vertex_ids(), incident);
}

IncidencePoset incidence_poset(const UndirectedGraph& g) {
  std::vector<std::pair<EdgeId, std::set<VertexId>>> incident;
  for (const auto& e : g.edges()) incident.push_back({e.id, {e.a, e.b}});
  return incidence_poset_impl(g.vertex_ids(), incident);
}

MorphismLabels classify_morphism(const GraphMorphism& f, const Digraph& source,
                                 const Digraph& target) {
  for (const auto& v : source.vertex_ids()) {
    auto it = f.vertex_map.find(v);
    if (it == f.vertex_map.end() || !target.has_vertex(it->second))
      fail(ErrorCode::InvalidMorphism, "vertex map undefined at '" + v + "'");
  }
  for (const auto& e : source.edges()) {
    auto it = f.edge_map.find(e.id);
    if (it == f.edge_map.end() || !target.has_edge_id(it->second))
      fail(ErrorCode::InvalidMorphism, "edge map undefined at '" + e.id + "'");
    const auto& image = target.edge(target.edge_index(it->second));
    if (f.vertex_map.at(e.tail) != image.tail || f.vertex_map.at(e.head) != image.head)
      fail(ErrorCode::InvalidMorphism, "head/tail square fails at '" + e.id + "'");
  }

  MorphismLabels labels;

  std::set<VertexId> vertex_images;
  std::set<EdgeId> edge_images;
  bool v_injective = true, e_injective = true;
  for (const auto& v : source.vertex_ids())
    if (!vertex_images.insert(f.vertex_map.at(v)).second) v_injective = false;
  for (const auto& e : source.edges())
    if (!edge_images.insert(f.edge_map.at(e.id)).second) e_injective = false;
  labels.embedding = v_injective && e_injective;

  // Per-vertex fibre maps: edges with head (resp. tail) v against edges with
  // head (resp. tail) f(v).
  bool fibres_injective = true, fibres_bijective = true;
  for (std::size_t v = 0; v < source.vertex_count(); ++v) {
    const VertexId& fv = f.vertex_map.at(source.vertex_ids()[v]);
    const std::size_t tv = target.vertex_index(fv);
    for (const bool by_head : {true, false}) {
      std::set<EdgeId> image;
      std::size_t fibre_size = 0;
      for (std::size_t e = 0; e < source.edge_count(); ++e) {
        const std::size_t end = by_head ? source.head_index(e) : source.tail_index(e);
        if (end != v) continue;
        ++fibre_size;
        image.insert(f.edge_map.at(source.edge(e).id));
      }
      if (image.size() != fibre_size) fibres_injective = false;
      std::size_t target_fibre = 0;
      for (std::size_t e = 0; e < target.edge_count(); ++e) {
        const std::size_t end = by_head ? target.head_index(e) : target.tail_index(e);
        if (end == tv) ++target_fibre;
      }
      if (image.size() != target_fibre) fibres_bijective = false;
    }
  }
  labels.etale = fibres_injective;
  labels.covering = fibres_injective && fibres_bijective;
  return labels;
}

std::vector<TriangularClique> triangular_cliques(const Digraph& g) {
  std::vector<TriangularClique> cliques;
  const std::size_t n = g.vertex_count();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      if (y == x || !g.has_arc(x, y)) continue;
      for (std::size_t z = 0; z < n; ++z) {
        if (z == y) continue;
        if (g.has_arc(y, z) && g.has_arc(x, z))
          cliques.push_back({g.vertex_ids()[x], g.vertex_ids()[y], g.vertex_ids()[z]});
      }
    }
  // Lexicographic in vertex indices already holds by construction order, but
  // ids may not sort the same way; order by index triple explicitly.
  std::sort(cliques.begin(), cliques.end(),
            [&](const TriangularClique& a, const TriangularClique& b) {
              auto ka = std::array<std::size_t, 3>{g.vertex_index(a.x), g.vertex_index(a.y),
                                                   g.vertex_index(a.z)};
              auto kb = std::array<std::size_t, 3>{g.vertex_index(b.x), g.vertex_index(b.y),
                                                   g.vertex_index(b.z)};
              return ka < kb;
            });
  return cliques;
}

EtaleDirectedCover etale_directed_cover(const Digraph& g, CoverStrategy strategy) {
  if (g.loop_policy() != LoopPolicy::OnePerVertex)
    fail(ErrorCode::PreconditionFailed, "cover requires the one-loop-per-vertex policy");

  // Colour parallel edges by their multiplicity index within the ordered
  // pair; component k receives colour k. Component 0 always carries the full
  // vertex set so the cover stays surjective.
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> multiplicity;
  std::vector<std::size_t> colour(g.edge_count(), 0);
  std::size_t colours = 1;
  for (std::size_t e : g.non_loop_edges()) {
    const auto key = std::make_pair(g.tail_index(e), g.head_index(e));
    colour[e] = multiplicity[key]++;
    colours = std::max(colours, colour[e] + 1);
  }
  if (strategy == CoverStrategy::GreedyReversed) {
    for (std::size_t e : g.non_loop_edges()) {
      const auto key = std::make_pair(g.tail_index(e), g.head_index(e));
      colour[e] = multiplicity[key] - 1 - colour[e];
    }
  }

  EtaleDirectedCover cover;
  auto lifted = [&](const VertexId& v, std::size_t k) { return v + "~" + std::to_string(k); };

  std::vector<std::vector<VertexId>> comp_vertices(colours);
  std::vector<std::vector<EdgeSpec>> comp_edges(colours);
  std::vector<std::set<VertexId>> used(colours);

  for (const auto& v : g.vertex_ids()) {
    comp_vertices[0].push_back(lifted(v, 0));
    used[0].insert(v);
    cover.phi.vertex_map[lifted(v, 0)] = v;
  }
  for (std::size_t e : g.non_loop_edges()) {
    const std::size_t k = colour[e];
    const auto& spec = g.edge(e);
    for (const auto& v : {spec.tail, spec.head}) {
      if (used[k].insert(v).second && k != 0) {
        comp_vertices[k].push_back(lifted(v, k));
        cover.phi.vertex_map[lifted(v, k)] = v;
      }
    }
    comp_edges[k].push_back({spec.id, lifted(spec.tail, k), lifted(spec.head, k)});
    cover.phi.edge_map[spec.id] = spec.id;
  }

  std::vector<VertexId> all_vertices;
  std::vector<EdgeSpec> all_edges;
  for (std::size_t k = 0; k < colours; ++k) {
    cover.components.push_back(
        Digraph::build(comp_vertices[k], comp_edges[k], LoopPolicy::OnePerVertex));
    const Digraph& comp = cover.components.back();
    all_vertices.insert(all_vertices.end(), comp.vertex_ids().begin(),
                        comp.vertex_ids().end());
    all_edges.insert(all_edges.end(), comp.edges().begin(), comp.edges().end());
  }
  // Synthesised loops map to the base loop at the same vertex.
  cover.total = Digraph::build(all_vertices, all_edges, LoopPolicy::None);
  for (std::size_t e = 0; e < cover.total.edge_count(); ++e) {
    const auto& spec = cover.total.edge(e);
    if (spec.tail != spec.head) continue;
    const VertexId& base_vertex = cover.phi.vertex_map.at(spec.tail);
    for (std::size_t be = 0; be < g.edge_count(); ++be) {
      if (g.is_loop(be) && g.edge(be).tail == base_vertex) {
        cover.phi.edge_map[spec.id] = g.edge(be).id;
        break;
      }
    }
  }
  return cover;
}

bool is_etale_directed_cover(const Digraph& g, const EtaleDirectedCover& cover) {
  for (const auto& comp : cover.components)
    if (!comp.is_simple_with_loops()) return false;
  MorphismLabels labels;
  try {
    labels = classify_morphism(cover.phi, cover.total, g);
  } catch (const Error&) {
    return false;
  }
  if (!labels.etale) return false;
  // Edge map bijective on non-loops.
  std::set<EdgeId> images;
  for (std::size_t e : cover.total.non_loop_edges()) {
    const EdgeId& image = cover.phi.edge_map.at(cover.total.edge(e).id);
    const std::size_t base = g.edge_index(image);
    if (g.is_loop(base)) return false;
    if (!images.insert(image).second) return false;
  }
  return images.size() == g.non_loop_edges().size();
}

}  // namespace sheafcalc
