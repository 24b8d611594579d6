#pragma once

#include <cstdint>
#include <vector>

#include "sheafcalc/sheaf.hpp"

namespace sheafcalc {

/// Two-term Cech complex of a sheaf on its canonical cover. For a
/// vertex-to-edge sheaf, d maps C^0 -> C^1 (shape c1 x c0) with -tail +head
/// blocks per edge; for an edge-to-vertex sheaf, d is the boundary
/// C_1 -> C_0 (shape c0 x c1). Self-loop blocks are identically zero.
struct CochainComplex {
  Convention convention = Convention::VertexToEdge;
  std::size_t c0_dim = 0;
  std::size_t c1_dim = 0;
  std::vector<std::size_t> vertex_offsets;
  std::vector<std::size_t> edge_offsets;
  RatMatrix d;
};

CochainComplex cochain_complex(const CellSheaf& sheaf);

struct CohomologyDims {
  int h0 = 0;  // H^0 (vertex-to-edge) or H_0 (edge-to-vertex)
  int h1 = 0;  // H^1 or H_1
};

/// Exact kernel/cokernel dimensions of the two-term complex.
CohomologyDims cohomology_dims(const CellSheaf& sheaf);

/// dim C^0 - dim C^1; equals h0 - h1 by rank-nullity.
std::int64_t euler_characteristic(const CellSheaf& sheaf);

/// A sheaf, a cosheaf, and per-cell comparison maps. f_v maps the under
/// stalk at v into the over stalk; f_e maps the over stalk at e into the
/// under stalk.
struct LaplacianPair {
  CellSheaf over;   // vertex-to-edge
  CellSheaf under;  // edge-to-vertex
  std::vector<RatMatrix> f_v;
  std::vector<RatMatrix> f_e;

  void validate() const;
  bool all_f_invertible() const;
  bool is_strong() const;
};

/// (F, F^T) with identity comparison maps: the pair behind L_F.
LaplacianPair adjoint_pair(const CellSheaf& sheaf);

/// (F, F^-1) with identity comparison maps: the strong pair behind Delta_F.
/// Throws NotInvertible unless every restriction map is invertible.
LaplacianPair inverse_pair(const CellSheaf& sheaf);

/// Square matrix on C^0 blocks plus the block index that names them.
template <typename T>
struct BlockMatrix {
  Matrix<T> matrix;
  std::vector<std::string> block_ids;
  std::vector<std::size_t> offsets;
};

/// The composite F_0 . d_under . F_1 . d_over on C^0.
template <typename T>
BlockMatrix<T> cech_laplacian(const LaplacianPair& pair);

/// Explicit contraction L_F(x)_v = sum_{u,v<=e} F^T_{v<=e}(F_{v<=e} x_v -
/// F_{u<=e} x_u); self-loop terms vanish.
template <typename T>
BlockMatrix<T> sheaf_laplacian_LF(const CellSheaf& sheaf);

/// Same contraction with the transpose replaced by the exact inverse.
template <typename T>
BlockMatrix<T> sheaf_laplacian_deltaF(const CellSheaf& sheaf);

/// Which incidences of the sheaf factor are zeroed before contraction.
enum class DirectionMask { None, HeadZero, TailZero };

/// Cech Laplacian of the pair with the sheaf differential truncated to one
/// direction: HeadZero keeps only tail terms of d_over, TailZero only head
/// terms. The diagonal degenerates to out- resp. in-degree blocks.
template <typename T>
BlockMatrix<T> directed_laplacian(const LaplacianPair& pair, DirectionMask mask);

template <typename T>
struct BisheafLaplacians {
  BlockMatrix<T> upper0;  // F_0 . d_under . F_1 . d_over on C^0
  BlockMatrix<T> lower1;  // d_over . F_0 . d_under . F_1 on C^1
  BlockMatrix<T> delta0;  // lower0 - upper0; lower0 vanishes in degree 0
};

template <typename T>
BisheafLaplacians<T> bisheaf_laplacians(const LaplacianPair& pair);

}  // namespace sheafcalc
