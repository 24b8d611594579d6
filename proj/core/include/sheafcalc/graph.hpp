#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sheafcalc/errors.hpp"

namespace sheafcalc {

using VertexId = std::string;
using EdgeId = std::string;

enum class LoopPolicy { None, OnePerVertex };

struct EdgeSpec {
  EdgeId id;
  VertexId tail;
  VertexId head;
};

/// Finite directed multigraph with explicit edge identities. Vertices and
/// edges keep their insertion order; that order is the well-order every
/// block layout downstream derives from. Immutable after build().
class Digraph {
 public:
  static Digraph build(std::vector<VertexId> vertices, std::vector<EdgeSpec> edges,
                       LoopPolicy policy);

  LoopPolicy loop_policy() const { return policy_; }

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const std::vector<VertexId>& vertex_ids() const { return vertices_; }
  const std::vector<EdgeSpec>& edges() const { return edges_; }
  const EdgeSpec& edge(std::size_t e) const { return edges_[e]; }

  std::size_t vertex_index(const VertexId& v) const;
  std::size_t edge_index(const EdgeId& e) const;
  bool has_vertex(const VertexId& v) const { return vertex_index_.count(v) > 0; }
  bool has_edge_id(const EdgeId& e) const { return edge_index_.count(e) > 0; }

  std::size_t tail_index(std::size_t e) const { return edge_tail_[e]; }
  std::size_t head_index(std::size_t e) const { return edge_head_[e]; }
  bool is_loop(std::size_t e) const { return edge_tail_[e] == edge_head_[e]; }

  const std::vector<std::size_t>& non_loop_edges() const { return non_loop_edges_; }

  /// True iff there is an edge tail -> head (loops included).
  bool has_arc(std::size_t tail, std::size_t head) const;

  /// At most one edge per ordered pair of distinct vertices and exactly one
  /// self-loop per vertex: the carrier class for differential calculi.
  bool is_simple_with_loops() const;

  std::size_t component_count() const;

  bool operator==(const Digraph& other) const;

 private:
  std::vector<VertexId> vertices_;
  std::vector<EdgeSpec> edges_;
  std::vector<std::size_t> edge_tail_;
  std::vector<std::size_t> edge_head_;
  std::vector<std::size_t> non_loop_edges_;
  std::map<VertexId, std::size_t> vertex_index_;
  std::map<EdgeId, std::size_t> edge_index_;
  std::set<std::pair<std::size_t, std::size_t>> arcs_;
  LoopPolicy policy_ = LoopPolicy::None;
};

struct UndirectedEdgeSpec {
  EdgeId id;
  VertexId a;
  VertexId b;
};

/// Finite undirected multigraph; endpoints are stored with a <= b in vertex
/// order.
class UndirectedGraph {
 public:
  static UndirectedGraph build(std::vector<VertexId> vertices,
                               std::vector<UndirectedEdgeSpec> edges);

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<VertexId>& vertex_ids() const { return vertices_; }
  const std::vector<UndirectedEdgeSpec>& edges() const { return edges_; }
  std::size_t vertex_index(const VertexId& v) const;
  bool is_loop(std::size_t e) const;

 private:
  std::vector<VertexId> vertices_;
  std::vector<UndirectedEdgeSpec> edges_;
  std::map<VertexId, std::size_t> vertex_index_;
};

/// Doubles every non-loop edge e into e:fwd / e:bwd; an undirected loop
/// becomes a single directed loop keeping its id. Vertices unchanged.
Digraph to_bidirected(const UndirectedGraph& g);

/// Orients each undirected edge by its stored endpoint order (a -> b). Used
/// to carry sheaves on undirected graphs.
Digraph orient(const UndirectedGraph& g);

/// Forgets direction; endpoints are normalised to vertex order.
UndirectedGraph underlying_undirected(const Digraph& g);

/// Rebuilds the same graph under another loop policy (synthesising or
/// checking self-loops as required).
Digraph with_loop_policy(const Digraph& g, LoopPolicy policy);

/// True iff the non-loop edges pair off into mutually inverse couples with
/// multiplicity respected, i.e. the graph is the double of an undirected one.
bool is_bidirected(const Digraph& g);

/// Height-one poset: vertices and edges with v <= e iff v is an endpoint.
struct IncidencePoset {
  std::vector<std::string> elements;
  /// Non-reflexive pairs (vertex id, edge id), sorted.
  std::vector<std::pair<std::string, std::string>> relations;

  bool operator==(const IncidencePoset& other) const {
    return elements == other.elements && relations == other.relations;
  }
};

IncidencePoset incidence_poset(const Digraph& g);
IncidencePoset incidence_poset(const UndirectedGraph& g);

struct GraphMorphism {
  std::map<VertexId, VertexId> vertex_map;
  std::map<EdgeId, EdgeId> edge_map;
};

struct MorphismLabels {
  bool embedding = false;
  bool etale = false;
  bool covering = false;

  bool general() const { return !embedding && !etale && !covering; }
};

/// Classifies a digraph morphism. Embedding: both component maps injective.
/// Etale: the induced maps on per-vertex head/tail fibres are injective.
/// Covering: those fibre maps are bijective. Throws InvalidMorphism when the
/// head/tail squares do not commute.
MorphismLabels classify_morphism(const GraphMorphism& f, const Digraph& source,
                                 const Digraph& target);

/// Ordered vertex triple (x, y, z), x != y, y != z, x == z allowed, with
/// edges x->y, y->z, x->z all present (the x->z edge being the self-loop
/// when x == z).
struct TriangularClique {
  VertexId x, y, z;

  bool operator==(const TriangularClique& o) const {
    return x == o.x && y == o.y && z == o.z;
  }
  bool operator<(const TriangularClique& o) const {
    if (x != o.x) return x < o.x;
    if (y != o.y) return y < o.y;
    return z < o.z;
  }
};

/// All triangular cliques, sorted lexicographically by vertex order.
std::vector<TriangularClique> triangular_cliques(const Digraph& g);

/// An etale directed cover: disjoint simple components covering a multigraph
/// bijectively on non-loop edges. Cover edges keep the base edge ids, so the
/// canonical edge bijection between covers is the identity on ids.
struct EtaleDirectedCover {
  std::vector<Digraph> components;
  Digraph total;  // disjoint union of the components
  GraphMorphism phi;
};

enum class CoverStrategy {
  Greedy,          // parallel edges coloured in input order
  GreedyReversed,  // parallel edges coloured in reverse input order
};

/// Deterministic etale directed cover of a multigraph with one self-loop per
/// vertex. The k-th parallel copy of an ordered pair goes to component k.
EtaleDirectedCover etale_directed_cover(const Digraph& g,
                                        CoverStrategy strategy = CoverStrategy::Greedy);

/// Validates the cover contract: simple components, commuting etale morphism,
/// edge map bijective on non-loops.
bool is_etale_directed_cover(const Digraph& g, const EtaleDirectedCover& cover);

}  // namespace sheafcalc
