#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sheafcalc/graph.hpp"
#include "sheafcalc/matrix.hpp"

namespace sheafcalc {

/// First-order differential calculus on the function algebra of the base
/// vertices. The one-form module is spanned by the non-loop edges of the
/// covering graph; self-loop generators are excluded because d assigns them
/// zero and every transport fixes them, so they would be dead weight.
///
/// On a simple carrier the cover is the identity; on a multigraph the
/// calculus is defined through an etale directed cover, and the bimodule
/// actions read function values through the covering map.
struct Fodc {
  Digraph base;
  EtaleDirectedCover cover;

  /// One-form basis: ids of the base non-loop edges in input order (cover
  /// edges keep base ids, so this is also the cover basis).
  std::vector<EdgeId> basis;
  std::vector<std::size_t> basis_tail;  // base vertex index of phi(tail)
  std::vector<std::size_t> basis_head;  // base vertex index of phi(head)
  std::map<EdgeId, std::size_t> basis_index;

  std::size_t dim() const { return basis.size(); }
  std::size_t vertex_count() const { return base.vertex_count(); }
};

/// Identity-cover calculus; the carrier must be simple with one loop per
/// vertex.
Fodc fodc_from_digraph(const Digraph& g);

/// Calculus on a multigraph through a given etale directed cover. Throws
/// NotEtaleDirectedCover if the cover contract fails.
Fodc fodc_from_etale_cover(const Digraph& g, const EtaleDirectedCover& cover);

/// The sum-of-edges one-form; d a = theta a - a theta.
template <typename T>
std::vector<T> theta_form(const Fodc& fodc);

/// Differential: the coefficient of an edge x -> y is a(phi y) - a(phi x).
template <typename T>
std::vector<T> d_apply(const Fodc& fodc, const std::vector<T>& a);

/// Differential as a matrix (basis size x vertex count).
template <typename T>
Matrix<T> d_matrix(const Fodc& fodc);

enum class Side { Left, Right };

/// Left action scales by a(phi tail), right action by a(phi head).
template <typename T>
std::vector<T> bimodule_act(const Fodc& fodc, const std::vector<T>& a,
                            const std::vector<T>& omega, Side side);

/// Verifies d a = theta a - a theta coefficientwise, exactly.
bool check_inner(const Fodc& fodc, const std::vector<Rational>& a);

struct PushforwardMaps {
  RatMatrix algebra;  // phi^*: functions on the target -> functions on the source
  RatMatrix forms;    // phi_*: one-forms on the target -> one-forms on the source
};

/// Maps induced by a morphism of simple digraphs: phi^*(a) = a . phi on
/// vertices, phi_*(omega_{x->y}) = sum of the source edges lying over it.
/// Validates the commuting squares.
PushforwardMaps pushforward_morphism(const GraphMorphism& phi, const Digraph& source,
                                     const Digraph& target);

/// Two-forms over a simple carrier: the triangular cliques outside the
/// excluded set S, in canonical clique order.
struct SecondOrderCalc {
  Digraph base;
  std::vector<TriangularClique> all_cliques;
  std::set<std::size_t> excluded;          // indices into all_cliques
  std::vector<std::size_t> basis;          // surviving clique indices
  std::map<std::size_t, std::size_t> basis_pos;

  std::size_t dim() const { return basis.size(); }
};

SecondOrderCalc second_order_calc(const Digraph& g,
                                  const std::vector<TriangularClique>& excluded);

/// omega_{x->y} ^ omega_{w->z} = delta_{y,w} omega_{x->y->z}, extended
/// bilinearly; cliques in S or absent from the carrier map to zero.
template <typename T>
std::vector<T> wedge(const SecondOrderCalc& calc, const Fodc& fodc,
                     const std::vector<T>& w1, const std::vector<T>& w2);

/// d omega_{x->y} = sum_u (omega_{u->x->y} - omega_{x->u->y} + omega_{x->y->u})
/// with absent or excluded cliques dropped.
template <typename T>
std::vector<T> d1_apply(const SecondOrderCalc& calc, const Fodc& fodc,
                        const std::vector<T>& omega);

/// Generalized quantum metric: scalars on endpoint-compatible pairs of basis
/// edges; unspecified pairs are zero.
struct Metric {
  std::map<std::pair<std::size_t, std::size_t>, Rational> lambda;
};

struct MetricEntry {
  EdgeId edge_out;
  EdgeId edge_back;
  Rational value;
};

/// Validates the endpoint-matching deltas: a key (e, f) needs
/// phi(tail e) = phi(head f) and phi(head e) = phi(tail f).
Metric quantum_metric(const Fodc& fodc, const std::vector<MetricEntry>& entries);

/// lambda = 1 on every pair (e, reverse edge of e) that exists; the metric
/// of the classical comparisons.
Metric ones_metric(const Fodc& fodc);

/// Pairing value (w1, w2) as a function on the base vertices.
template <typename T>
std::vector<T> metric_pair(const Fodc& fodc, const Metric& metric,
                           const std::vector<T>& w1, const std::vector<T>& w2);

template <typename T>
struct GraphLaplacians {
  Matrix<T> delta_theta;  // 2 (theta, d a)
  Matrix<T> theta_delta;  // -2 (d a, theta)
};

template <typename T>
GraphLaplacians<T> graph_laplacians(const Fodc& fodc, const Metric& metric);

/// Degree matrix minus adjacency; loops ignored.
RatMatrix classical_laplacian(const UndirectedGraph& g);

}  // namespace sheafcalc
