#pragma once

#include <cstdint>
#include <random>

#include "sheafcalc/graph.hpp"
#include "sheafcalc/sheaf.hpp"

namespace sheafcalc {

using Rng = std::mt19937_64;

inline Rng seeded_rng(std::uint64_t seed) { return Rng(seed * 0x9e3779b97f4a7c15ULL + 1); }

/// Uniform integer in [0, n).
std::size_t pick(Rng& rng, std::size_t n);

/// Small rational with numerator in [-4, 4] and denominator in {1, 2, 3}.
Rational random_rational(Rng& rng);

/// Nonzero variant of random_rational.
Rational random_nonzero_rational(Rng& rng);

std::vector<Rational> random_function(Rng& rng, std::size_t n);

/// Erdos-Renyi simple undirected graph on 2..max_vertices vertices.
UndirectedGraph random_undirected_simple(Rng& rng, std::size_t max_vertices);

/// Random member of the simple-digraph class (one loop per vertex enforced).
Digraph random_simple_digraph(Rng& rng, std::size_t max_vertices);

/// Random directed multigraph with parallel edges, one loop per vertex.
Digraph random_multigraph(Rng& rng, std::size_t max_vertices, std::size_t max_multiplicity);

/// Random sheaf with stalk dimensions in [0, max_dim] and small rational maps.
CellSheaf random_sheaf(Rng& rng, const Digraph& graph, Convention convention, int max_dim);

/// Random invertible n x n rational matrix (unit triangular product).
RatMatrix random_invertible(Rng& rng, std::size_t n);

/// Random signed permutation matrix: rational and orthogonal.
RatMatrix random_signed_permutation(Rng& rng, std::size_t n);

/// Random rotation-product orthogonal matrix, stored exactly as the dyadic
/// rationals of its double entries (so O(n) holds only up to float epsilon).
RatMatrix random_orthogonal_double(Rng& rng, std::size_t n);

enum class OrthogonalKind { SignedPermutation, FloatRotation };

/// Rank-n bundle on the bidirected double of an undirected graph, with one
/// orthogonal map per undirected incidence copied onto both orientations, so
/// the induced transport is a parallel transport.
CellSheaf random_pushed_bundle(Rng& rng, const UndirectedGraph& base, int rank,
                               OrthogonalKind kind);

}  // namespace sheafcalc
