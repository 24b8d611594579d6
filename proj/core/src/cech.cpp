#include "sheafcalc/cech.hpp"

#include "sheafcalc/linalg.hpp"

namespace sheafcalc {

namespace {

std::vector<std::size_t> prefix_offsets(const std::vector<int>& dims, std::size_t* total) {
  std::vector<std::size_t> offsets(dims.size(), 0);
  std::size_t acc = 0;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    offsets[i] = acc;
    acc += static_cast<std::size_t>(dims[i]);
  }
  *total = acc;
  return offsets;
}

/// d_over with an optional mask zeroing the tail or head blocks.
template <typename T>
Matrix<T> sheaf_differential(const CellSheaf& sheaf, const CochainComplex& layout,
                             DirectionMask mask) {
  Matrix<T> d(layout.c1_dim, layout.c0_dim);
  const Digraph& g = sheaf.graph();
  for (std::size_t e : g.non_loop_edges()) {
    const std::size_t row = layout.edge_offsets[e];
    if (mask != DirectionMask::TailZero)
      d.add_block(row, layout.vertex_offsets[g.tail_index(e)],
                  matrix_cast<T>(sheaf.map_at_tail(e)) * T(-1));
    if (mask != DirectionMask::HeadZero)
      d.add_block(row, layout.vertex_offsets[g.head_index(e)],
                  matrix_cast<T>(sheaf.map_at_head(e)));
  }
  return d;
}

/// Boundary of an edge-to-vertex cosheaf (head minus tail); loops cancel.
template <typename T>
Matrix<T> cosheaf_boundary(const CellSheaf& cosheaf, const CochainComplex& layout) {
  Matrix<T> d(layout.c0_dim, layout.c1_dim);
  const Digraph& g = cosheaf.graph();
  for (std::size_t e : g.non_loop_edges()) {
    const std::size_t col = layout.edge_offsets[e];
    d.add_block(layout.vertex_offsets[g.tail_index(e)], col,
                matrix_cast<T>(cosheaf.map_at_tail(e)) * T(-1));
    d.add_block(layout.vertex_offsets[g.head_index(e)], col,
                matrix_cast<T>(cosheaf.map_at_head(e)));
  }
  return d;
}

CochainComplex layout_of(const CellSheaf& sheaf) {
  CochainComplex c;
  c.convention = sheaf.convention();
  c.vertex_offsets = prefix_offsets(sheaf.vertex_dims(), &c.c0_dim);
  c.edge_offsets = prefix_offsets(sheaf.edge_dims(), &c.c1_dim);
  return c;
}

template <typename T>
Matrix<T> block_diagonal(const std::vector<RatMatrix>& blocks, std::size_t rows,
                         std::size_t cols, const std::vector<std::size_t>& row_offsets,
                         const std::vector<std::size_t>& col_offsets) {
  Matrix<T> out(rows, cols);
  for (std::size_t i = 0; i < blocks.size(); ++i)
    out.set_block(row_offsets[i], col_offsets[i], matrix_cast<T>(blocks[i]));
  return out;
}

template <typename T>
BlockMatrix<T> with_vertex_blocks(Matrix<T> m, const CellSheaf& sheaf) {
  BlockMatrix<T> out;
  out.matrix = std::move(m);
  std::size_t total = 0;
  out.offsets = prefix_offsets(sheaf.vertex_dims(), &total);
  out.block_ids = sheaf.graph().vertex_ids();
  return out;
}

template <typename T>
BlockMatrix<T> with_edge_blocks(Matrix<T> m, const CellSheaf& sheaf) {
  BlockMatrix<T> out;
  out.matrix = std::move(m);
  std::size_t total = 0;
  out.offsets = prefix_offsets(sheaf.edge_dims(), &total);
  for (const auto& e : sheaf.graph().edges()) out.block_ids.push_back(e.id);
  return out;
}

}  // namespace

CochainComplex cochain_complex(const CellSheaf& sheaf) {
  CochainComplex c = layout_of(sheaf);
  if (sheaf.convention() == Convention::VertexToEdge)
    c.d = sheaf_differential<Rational>(sheaf, c, DirectionMask::None);
  else
    c.d = cosheaf_boundary<Rational>(sheaf, c);
  return c;
}

CohomologyDims cohomology_dims(const CellSheaf& sheaf) {
  const CochainComplex c = cochain_complex(sheaf);
  const std::size_t r = rank(c.d);
  CohomologyDims dims;
  dims.h0 = static_cast<int>(c.c0_dim - r);
  dims.h1 = static_cast<int>(c.c1_dim - r);
  return dims;
}

std::int64_t euler_characteristic(const CellSheaf& sheaf) {
  const CochainComplex c = layout_of(sheaf);
  return static_cast<std::int64_t>(c.c0_dim) - static_cast<std::int64_t>(c.c1_dim);
}

void LaplacianPair::validate() const {
  if (over.convention() != Convention::VertexToEdge)
    fail(ErrorCode::ShapeMismatch, "over sheaf must be vertex-to-edge");
  if (under.convention() != Convention::EdgeToVertex)
    fail(ErrorCode::ShapeMismatch, "under cosheaf must be edge-to-vertex");
  if (!(over.graph() == under.graph()))
    fail(ErrorCode::ShapeMismatch, "pair members live on different graphs");
  const Digraph& g = over.graph();
  if (f_v.size() != g.vertex_count() || f_e.size() != g.edge_count())
    fail(ErrorCode::ShapeMismatch, "comparison map counts");
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    if (f_v[v].rows() != static_cast<std::size_t>(over.vertex_dim(v)) ||
        f_v[v].cols() != static_cast<std::size_t>(under.vertex_dim(v)))
      fail(ErrorCode::ShapeMismatch, "f_v shape at '" + g.vertex_ids()[v] + "'");
  for (std::size_t e = 0; e < g.edge_count(); ++e)
    if (f_e[e].rows() != static_cast<std::size_t>(under.edge_dim(e)) ||
        f_e[e].cols() != static_cast<std::size_t>(over.edge_dim(e)))
      fail(ErrorCode::ShapeMismatch, "f_e shape at '" + g.edge(e).id + "'");
}

bool LaplacianPair::all_f_invertible() const {
  for (const auto& m : f_v)
    if (!is_invertible(m)) return false;
  for (const auto& m : f_e)
    if (!is_invertible(m)) return false;
  return true;
}

bool LaplacianPair::is_strong() const {
  for (const auto& m : f_v)
    if (!(m == RatMatrix::identity(m.rows()))) return false;
  for (const auto& m : f_e)
    if (!(m == RatMatrix::identity(m.rows()))) return false;
  return true;
}

LaplacianPair adjoint_pair(const CellSheaf& sheaf) {
  if (sheaf.convention() != Convention::VertexToEdge)
    fail(ErrorCode::PreconditionFailed, "expected a vertex-to-edge sheaf");
  LaplacianPair pair;
  pair.over = sheaf;
  pair.under = dual_sheaf(sheaf);
  for (int d : sheaf.vertex_dims())
    pair.f_v.push_back(RatMatrix::identity(static_cast<std::size_t>(d)));
  for (int d : sheaf.edge_dims())
    pair.f_e.push_back(RatMatrix::identity(static_cast<std::size_t>(d)));
  pair.validate();
  return pair;
}

LaplacianPair inverse_pair(const CellSheaf& sheaf) {
  if (sheaf.convention() != Convention::VertexToEdge)
    fail(ErrorCode::PreconditionFailed, "expected a vertex-to-edge sheaf");
  const Digraph& g = sheaf.graph();
  std::vector<IncidenceMapSpec> maps;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    maps.push_back({g.edge(e).id, g.edge(e).tail, inverse(sheaf.map_at_tail(e))});
    if (!g.is_loop(e))
      maps.push_back({g.edge(e).id, g.edge(e).head, inverse(sheaf.map_at_head(e))});
  }
  LaplacianPair pair;
  pair.over = sheaf;
  pair.under = CellSheaf::build(g, Convention::EdgeToVertex, sheaf.vertex_dims(),
                                sheaf.edge_dims(), maps);
  for (int d : sheaf.vertex_dims())
    pair.f_v.push_back(RatMatrix::identity(static_cast<std::size_t>(d)));
  for (int d : sheaf.edge_dims())
    pair.f_e.push_back(RatMatrix::identity(static_cast<std::size_t>(d)));
  pair.validate();
  return pair;
}

namespace {

template <typename T>
Matrix<T> pair_composite(const LaplacianPair& pair, DirectionMask mask) {
  pair.validate();
  const CochainComplex over_layout = [&] {
    CochainComplex c;
    c.convention = Convention::VertexToEdge;
    std::size_t t0 = 0, t1 = 0;
    c.vertex_offsets = prefix_offsets(pair.over.vertex_dims(), &t0);
    c.edge_offsets = prefix_offsets(pair.over.edge_dims(), &t1);
    c.c0_dim = t0;
    c.c1_dim = t1;
    return c;
  }();
  const CochainComplex under_layout = [&] {
    CochainComplex c;
    c.convention = Convention::EdgeToVertex;
    std::size_t t0 = 0, t1 = 0;
    c.vertex_offsets = prefix_offsets(pair.under.vertex_dims(), &t0);
    c.edge_offsets = prefix_offsets(pair.under.edge_dims(), &t1);
    c.c0_dim = t0;
    c.c1_dim = t1;
    return c;
  }();

  const Matrix<T> d_over = sheaf_differential<T>(pair.over, over_layout, mask);
  const Matrix<T> d_under = cosheaf_boundary<T>(pair.under, under_layout);
  const Matrix<T> f0 = block_diagonal<T>(pair.f_v, over_layout.c0_dim, under_layout.c0_dim,
                                         over_layout.vertex_offsets,
                                         under_layout.vertex_offsets);
  const Matrix<T> f1 = block_diagonal<T>(pair.f_e, under_layout.c1_dim, over_layout.c1_dim,
                                         under_layout.edge_offsets, over_layout.edge_offsets);
  return f0 * (d_under * (f1 * d_over));
}

}  // namespace

template <typename T>
BlockMatrix<T> cech_laplacian(const LaplacianPair& pair) {
  return with_vertex_blocks<T>(pair_composite<T>(pair, DirectionMask::None), pair.over);
}

template <typename T>
BlockMatrix<T> sheaf_laplacian_LF(const CellSheaf& sheaf) {
  if (sheaf.convention() != Convention::VertexToEdge)
    fail(ErrorCode::PreconditionFailed, "expected a vertex-to-edge sheaf");
  const Digraph& g = sheaf.graph();
  std::size_t total = 0;
  const auto offsets = prefix_offsets(sheaf.vertex_dims(), &total);
  Matrix<T> lap(total, total);
  for (std::size_t e : g.non_loop_edges()) {
    const std::size_t t = g.tail_index(e);
    const std::size_t h = g.head_index(e);
    const Matrix<T> ft = matrix_cast<T>(sheaf.map_at_tail(e));
    const Matrix<T> fh = matrix_cast<T>(sheaf.map_at_head(e));
    const Matrix<T> ftT = ft.transpose();
    const Matrix<T> fhT = fh.transpose();
    lap.add_block(offsets[t], offsets[t], ftT * ft);
    lap.add_block(offsets[t], offsets[h], (ftT * fh) * T(-1));
    lap.add_block(offsets[h], offsets[h], fhT * fh);
    lap.add_block(offsets[h], offsets[t], (fhT * ft) * T(-1));
  }
  return with_vertex_blocks<T>(std::move(lap), sheaf);
}

template <typename T>
BlockMatrix<T> sheaf_laplacian_deltaF(const CellSheaf& sheaf) {
  if (sheaf.convention() != Convention::VertexToEdge)
    fail(ErrorCode::PreconditionFailed, "expected a vertex-to-edge sheaf");
  const Digraph& g = sheaf.graph();
  std::size_t total = 0;
  const auto offsets = prefix_offsets(sheaf.vertex_dims(), &total);
  Matrix<T> lap(total, total);
  for (std::size_t e : g.non_loop_edges()) {
    const std::size_t t = g.tail_index(e);
    const std::size_t h = g.head_index(e);
    const RatMatrix ft_inv = inverse(sheaf.map_at_tail(e));
    const RatMatrix fh_inv = inverse(sheaf.map_at_head(e));
    const std::size_t dt = static_cast<std::size_t>(sheaf.vertex_dim(t));
    const std::size_t dh = static_cast<std::size_t>(sheaf.vertex_dim(h));
    lap.add_block(offsets[t], offsets[t], Matrix<T>::identity(dt));
    lap.add_block(offsets[h], offsets[h], Matrix<T>::identity(dh));
    lap.add_block(offsets[t], offsets[h],
                  matrix_cast<T>(ft_inv * sheaf.map_at_head(e)) * T(-1));
    lap.add_block(offsets[h], offsets[t],
                  matrix_cast<T>(fh_inv * sheaf.map_at_tail(e)) * T(-1));
  }
  return with_vertex_blocks<T>(std::move(lap), sheaf);
}

template <typename T>
BlockMatrix<T> directed_laplacian(const LaplacianPair& pair, DirectionMask mask) {
  return with_vertex_blocks<T>(pair_composite<T>(pair, mask), pair.over);
}

template <typename T>
BisheafLaplacians<T> bisheaf_laplacians(const LaplacianPair& pair) {
  pair.validate();
  BisheafLaplacians<T> out;
  out.upper0 = cech_laplacian<T>(pair);
  // No degree -1 on a graph, so the lower Laplacian vanishes in degree 0.
  out.delta0 = out.upper0;
  out.delta0.matrix = -out.upper0.matrix;

  CochainComplex over_layout = layout_of(pair.over);
  CochainComplex under_layout = layout_of(pair.under);
  const Matrix<T> d_over = sheaf_differential<T>(pair.over, over_layout, DirectionMask::None);
  const Matrix<T> d_under = cosheaf_boundary<T>(pair.under, under_layout);
  const Matrix<T> f0 = block_diagonal<T>(pair.f_v, over_layout.c0_dim, under_layout.c0_dim,
                                         over_layout.vertex_offsets,
                                         under_layout.vertex_offsets);
  const Matrix<T> f1 = block_diagonal<T>(pair.f_e, under_layout.c1_dim, over_layout.c1_dim,
                                         under_layout.edge_offsets, over_layout.edge_offsets);
  out.lower1 = with_edge_blocks<T>(d_over * (f0 * (d_under * f1)), pair.over);
  return out;
}

template BlockMatrix<Rational> cech_laplacian<Rational>(const LaplacianPair&);
template BlockMatrix<double> cech_laplacian<double>(const LaplacianPair&);
template BlockMatrix<Rational> sheaf_laplacian_LF<Rational>(const CellSheaf&);
template BlockMatrix<double> sheaf_laplacian_LF<double>(const CellSheaf&);
template BlockMatrix<Rational> sheaf_laplacian_deltaF<Rational>(const CellSheaf&);
template BlockMatrix<double> sheaf_laplacian_deltaF<double>(const CellSheaf&);
template BlockMatrix<Rational> directed_laplacian<Rational>(const LaplacianPair&, DirectionMask);
template BlockMatrix<double> directed_laplacian<double>(const LaplacianPair&, DirectionMask);
template BisheafLaplacians<Rational> bisheaf_laplacians<Rational>(const LaplacianPair&);
template BisheafLaplacians<double> bisheaf_laplacians<double>(const LaplacianPair&);

}  // namespace sheafcalc
