#pragma once

#include <map>
#include <string>
#include <vector>

#include "sheafcalc/graph.hpp"
#include "sheafcalc/matrix.hpp"

namespace sheafcalc {

/// Direction of the restriction maps.
/// VertexToEdge: maps F(v) -> F(e) along incidences (open-star side).
/// EdgeToVertex: maps F(e) -> F(v) (closed-edge side).
enum class Convention { VertexToEdge, EdgeToVertex };

inline const char* convention_name(Convention c) {
  return c == Convention::VertexToEdge ? "vertex_to_edge" : "edge_to_vertex";
}

struct IncidenceMapSpec {
  EdgeId edge;
  VertexId vertex;
  RatMatrix matrix;
};

/// Stalk dimensions per cell plus one restriction matrix per incidence pair
/// (a self-loop has a single incidence). Stalks carry no basis data beyond
/// their dimension; the standard basis is canonical everywhere.
class CellSheaf {
 public:
  static CellSheaf build(Digraph graph, Convention convention,
                         std::vector<int> vertex_dims, std::vector<int> edge_dims,
                         const std::vector<IncidenceMapSpec>& maps);

  const Digraph& graph() const { return graph_; }
  Convention convention() const { return convention_; }

  int vertex_dim(std::size_t v) const { return vertex_dims_[v]; }
  int edge_dim(std::size_t e) const { return edge_dims_[e]; }
  const std::vector<int>& vertex_dims() const { return vertex_dims_; }
  const std::vector<int>& edge_dims() const { return edge_dims_; }

  /// Restriction matrix for (edge, incident vertex).
  const RatMatrix& map(std::size_t e, std::size_t v) const;
  const RatMatrix& map_at_tail(std::size_t e) const { return tail_maps_[e]; }
  const RatMatrix& map_at_head(std::size_t e) const { return head_maps_[e]; }

  bool operator==(const CellSheaf& other) const;

 private:
  Digraph graph_;
  Convention convention_ = Convention::VertexToEdge;
  std::vector<int> vertex_dims_;
  std::vector<int> edge_dims_;
  std::vector<RatMatrix> tail_maps_;  // for loops tail and head coincide
  std::vector<RatMatrix> head_maps_;
};

/// All stalks K^n, all restriction maps the identity.
CellSheaf constant_sheaf(const Digraph& graph, Convention convention, int n);

/// True iff every restriction matrix is a square isomorphism (exact rank).
bool is_locally_constant(const CellSheaf& sheaf);

/// Flips the convention and transposes every restriction matrix (the matrix
/// of Hom(-, K) in dual bases). An involution on the nose.
CellSheaf dual_sheaf(const CellSheaf& sheaf);

/// Equal stalk dimensions everywhere and invertible restriction maps.
bool is_vector_bundle(const CellSheaf& sheaf);

/// Rank of a vector bundle sheaf; throws PreconditionFailed otherwise.
int bundle_rank(const CellSheaf& sheaf);

/// Pushes a vertex-to-edge sheaf on an oriented undirected carrier onto the
/// bidirected double: each edge stalk and its maps are duplicated onto
/// id:fwd / id:bwd, loops carried once.
CellSheaf duplicate_onto_bidirected(const CellSheaf& sheaf);

/// Section of duplicate_onto_bidirected: pulls a sheaf on a bidirected
/// carrier back to the oriented undirected one, keeping the :fwd data.
/// Throws NotAThetaImage when ids lack the fwd/bwd pairing.
CellSheaf restrict_from_bidirected(const CellSheaf& sheaf);

/// Pushes an edge-to-vertex sheaf onto the bidirected double. The :fwd stalk
/// keeps F(e); the :bwd stalk is the quotient F(e)/ker(gamma) where
/// gamma(x) = (F_{v<=e} x, F_{w<=e} x), with the quotient basis chosen as the
/// pivot-column complement of ker(gamma). Restriction maps descend.
CellSheaf extend_onto_bidirected(const CellSheaf& sheaf);

struct GlobalSections {
  int dim = 0;
  RatMatrix basis;  // columns span the section space
};

/// Kernel of the Cech differential: H^0 for vertex-to-edge sheaves, H_1 for
/// edge-to-vertex ones.
GlobalSections global_sections(const CellSheaf& sheaf);

}  // namespace sheafcalc
