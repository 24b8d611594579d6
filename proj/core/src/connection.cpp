#include "sheafcalc/connection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>

#include "sheafcalc/linalg.hpp"

namespace sheafcalc {

Transport transport_from_sheaf(const CellSheaf& sheaf, TransportMode mode) {
  if (sheaf.convention() != Convention::VertexToEdge)
    fail(ErrorCode::PreconditionFailed, "expected a vertex-to-edge sheaf");
  const Digraph& g = sheaf.graph();
  if (g.vertex_count() == 0) return {g, 0, {}};
  const int n = sheaf.vertex_dim(0);
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    if (sheaf.vertex_dim(v) != n)
      fail(ErrorCode::RankMismatch, "stalk ranks differ across vertices");
  if (mode == TransportMode::Inverse && !is_vector_bundle(sheaf))
    fail(ErrorCode::NotInvertible, "inverse-mode transport needs a vector bundle");

  Transport transport;
  transport.carrier = g;
  transport.rank = n;
  for (std::size_t e : g.non_loop_edges()) {
    // Adjoint mode tolerates arbitrary edge stalk dimensions: the composite
    // F^T_{tail} F_{head} is n x n as long as the vertex ranks agree.
    const RatMatrix& tail_map = sheaf.map_at_tail(e);
    const RatMatrix& head_map = sheaf.map_at_head(e);
    const RatMatrix star =
        mode == TransportMode::Inverse ? inverse(tail_map) : tail_map.transpose();
    transport.edge_maps.push_back(star * head_map);
  }
  return transport;
}

namespace {

/// Position of the reverse edge in the non-loop list, if the carrier has one.
std::vector<std::ptrdiff_t> reverse_positions(const Digraph& g) {
  const auto& basis = g.non_loop_edges();
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> arc_pos;
  for (std::size_t i = 0; i < basis.size(); ++i)
    arc_pos[{g.tail_index(basis[i]), g.head_index(basis[i])}] = i;
  std::vector<std::ptrdiff_t> rev(basis.size(), -1);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    auto it = arc_pos.find({g.head_index(basis[i]), g.tail_index(basis[i])});
    if (it != arc_pos.end()) rev[i] = static_cast<std::ptrdiff_t>(it->second);
  }
  return rev;
}

}  // namespace

bool is_parallel_transport(const Transport& transport) {
  const Digraph& g = transport.carrier;
  if (!g.is_simple_with_loops() || !is_bidirected(g)) return false;
  const auto rev = reverse_positions(g);
  const RatMatrix id = RatMatrix::identity(static_cast<std::size_t>(transport.rank));
  for (std::size_t i = 0; i < transport.edge_maps.size(); ++i) {
    if (rev[i] < 0) return false;
    if (!is_invertible(transport.edge_maps[i])) return false;
    if (!(transport.edge_maps[i] * transport.edge_maps[static_cast<std::size_t>(rev[i])] ==
          id))
      return false;
  }
  return true;
}

ConnectionForms connection_from_transport(const Fodc& fodc, const Transport& transport) {
  if (transport.edge_maps.size() != fodc.dim())
    fail(ErrorCode::ShapeMismatch, "transport does not match the one-form basis");
  ConnectionForms forms;
  forms.rank = transport.rank;
  const RatMatrix id = RatMatrix::identity(static_cast<std::size_t>(transport.rank));
  for (const auto& r : transport.edge_maps) forms.coeffs.push_back(r - id);
  return forms;
}

Transport transport_from_connection(const Fodc& fodc, const ConnectionForms& forms) {
  if (forms.coeffs.size() != fodc.dim())
    fail(ErrorCode::ShapeMismatch, "forms do not match the one-form basis");
  Transport transport;
  transport.carrier = fodc.base;
  transport.rank = forms.rank;
  const RatMatrix id = RatMatrix::identity(static_cast<std::size_t>(forms.rank));
  for (const auto& a : forms.coeffs) transport.edge_maps.push_back(a + id);
  return transport;
}

template <typename T>
std::vector<std::vector<T>> apply_connection(const Fodc& fodc, const ConnectionForms& forms,
                                             const ModuleElement<T>& m) {
  const std::size_t n = static_cast<std::size_t>(forms.rank);
  if (m.size() != fodc.vertex_count())
    fail(ErrorCode::ShapeMismatch, "module element vertex count");
  for (const auto& f : m)
    if (f.size() != n) fail(ErrorCode::ShapeMismatch, "module element rank");

  std::vector<std::vector<T>> out(fodc.dim(), std::vector<T>(n, T(0)));
  for (std::size_t e = 0; e < fodc.dim(); ++e) {
    const Matrix<T> r =
        matrix_cast<T>(forms.coeffs[e]) + Matrix<T>::identity(n);  // R = A + I
    const auto& fy = m[fodc.basis_head[e]];
    const auto& fx = m[fodc.basis_tail[e]];
    for (std::size_t j = 0; j < n; ++j) {
      T acc = -fx[j];
      for (std::size_t i = 0; i < n; ++i) acc += r(j, i) * fy[i];
      out[e][j] = acc;
    }
  }
  return out;
}

template <typename T>
Matrix<T> nabla_matrix(const Fodc& fodc, const ConnectionForms& forms) {
  const std::size_t n = static_cast<std::size_t>(forms.rank);
  Matrix<T> nabla(n * fodc.dim(), n * fodc.vertex_count());
  const Matrix<T> id = Matrix<T>::identity(n);
  for (std::size_t e = 0; e < fodc.dim(); ++e) {
    const Matrix<T> r = matrix_cast<T>(forms.coeffs[e]) + id;
    nabla.add_block(n * e, n * fodc.basis_head[e], r);
    nabla.add_block(n * e, n * fodc.basis_tail[e], id * T(-1));
  }
  return nabla;
}

bool Curvature::is_flat(const Rational& tol) const {
  for (const auto& defect : defects)
    for (const auto& entry : defect.data())
      if (abs(entry) > tol) return false;
  return true;
}

Curvature curvature(const Digraph& g, const std::vector<TriangularClique>& excluded,
                    const Transport& transport) {
  if (!g.is_simple_with_loops())
    fail(ErrorCode::NotSimpleDigraph, "curvature needs a simple carrier");
  if (transport.edge_maps.size() != g.non_loop_edges().size())
    fail(ErrorCode::ShapeMismatch, "transport does not match the carrier");
  const SecondOrderCalc calc = second_order_calc(g, excluded);
  const auto& basis = g.non_loop_edges();
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> arc_pos;
  for (std::size_t i = 0; i < basis.size(); ++i)
    arc_pos[{g.tail_index(basis[i]), g.head_index(basis[i])}] = i;
  const RatMatrix id = RatMatrix::identity(static_cast<std::size_t>(transport.rank));
  auto transport_at = [&](std::size_t x, std::size_t y) -> RatMatrix {
    if (x == y) return id;  // loop transports are the identity by fiat
    return transport.edge_maps[arc_pos.at({x, y})];
  };

  Curvature out;
  for (std::size_t idx : calc.basis) {
    const auto& clique = calc.all_cliques[idx];
    const std::size_t x = g.vertex_index(clique.x);
    const std::size_t y = g.vertex_index(clique.y);
    const std::size_t z = g.vertex_index(clique.z);
    out.cliques.push_back(clique);
    out.defects.push_back(transport_at(x, y) * transport_at(y, z) - transport_at(x, z));
  }
  return out;
}

Curvature curvature_from_forms(const Fodc& fodc,
                               const std::vector<TriangularClique>& excluded,
                               const ConnectionForms& forms) {
  const Digraph& g = fodc.base;
  const SecondOrderCalc calc = second_order_calc(g, excluded);
  const std::size_t n = static_cast<std::size_t>(forms.rank);

  // Coefficient of each surviving clique in d omega^j_i + (omega ^ omega)^j_i.
  std::vector<RatMatrix> defects(calc.dim(), RatMatrix(n, n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Rational> omega_ji(fodc.dim());
      for (std::size_t e = 0; e < fodc.dim(); ++e) omega_ji[e] = forms.coeffs[e](j, i);
      std::vector<Rational> two_form = d1_apply<Rational>(calc, fodc, omega_ji);
      for (std::size_t k = 0; k < n; ++k) {
        std::vector<Rational> omega_jk(fodc.dim()), omega_ki(fodc.dim());
        for (std::size_t e = 0; e < fodc.dim(); ++e) {
          omega_jk[e] = forms.coeffs[e](j, k);
          omega_ki[e] = forms.coeffs[e](k, i);
        }
        const auto wedge_term = wedge<Rational>(calc, fodc, omega_jk, omega_ki);
        for (std::size_t c = 0; c < calc.dim(); ++c) two_form[c] += wedge_term[c];
      }
      for (std::size_t c = 0; c < calc.dim(); ++c) defects[c](j, i) = two_form[c];
    }

  Curvature out;
  for (std::size_t c = 0; c < calc.dim(); ++c) {
    out.cliques.push_back(calc.all_cliques[calc.basis[c]]);
    out.defects.push_back(defects[c]);
  }
  return out;
}

template <typename T>
BlockMatrix<T> connection_laplacian(const Fodc& fodc, const Metric& metric,
                                    const ConnectionForms& forms) {
  if (!fodc.base.is_simple_with_loops())
    fail(ErrorCode::NotSimpleDigraph, "connection Laplacian needs a simple carrier");
  const std::size_t n = static_cast<std::size_t>(forms.rank);
  const std::size_t nv = fodc.vertex_count();
  Matrix<T> lap(n * nv, n * nv);
  const Matrix<T> id = Matrix<T>::identity(n);

  // Only edges whose reverse exists contribute: the maximal bidirected
  // subgraph. lambda is read off the return pair (e, reverse e).
  const auto rev = reverse_positions(fodc.base);
  const auto& basis = fodc.base.non_loop_edges();
  for (std::size_t e = 0; e < basis.size(); ++e) {
    if (rev[e] < 0) continue;
    auto it = metric.lambda.find({e, static_cast<std::size_t>(rev[e])});
    const Rational lambda = it == metric.lambda.end() ? Rational(0) : it->second;
    if (lambda == 0) continue;
    const T two_lambda = T(2) * scalar_cast<T>(lambda);
    const Matrix<T> r = matrix_cast<T>(forms.coeffs[e]) + id;
    const std::size_t x = fodc.basis_tail[e];
    const std::size_t y = fodc.basis_head[e];
    lap.add_block(n * x, n * x, id * two_lambda);
    lap.add_block(n * x, n * y, r * (T(0) - two_lambda));
  }

  BlockMatrix<T> out;
  out.matrix = std::move(lap);
  out.block_ids = fodc.base.vertex_ids();
  for (std::size_t v = 0; v < nv; ++v) out.offsets.push_back(n * v);
  return out;
}

template <typename T>
BlockMatrix<T> bochner_laplacian(const Fodc& fodc, const ConnectionForms& forms) {
  const Matrix<T> nabla = nabla_matrix<T>(fodc, forms);
  BlockMatrix<T> out;
  out.matrix = nabla.transpose() * nabla;
  out.block_ids = fodc.base.vertex_ids();
  const std::size_t n = static_cast<std::size_t>(forms.rank);
  for (std::size_t v = 0; v < fodc.vertex_count(); ++v) out.offsets.push_back(n * v);
  return out;
}

namespace {

template <typename T>
RealMatrix to_real(const Matrix<T>& m) {
  RealMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = scalar_to_double(m(i, j));
  return out;
}

template <typename T>
double fit_constant(const Matrix<T>& lhs, const Matrix<T>& rhs, double tol,
                    double* best_diff) {
  // lhs = c * rhs for a single constant from the small candidate set.
  const double candidates[] = {1.0, -1.0, 2.0, -2.0, 0.5, -0.5};
  const RealMatrix a = to_real(lhs);
  const RealMatrix raw_b = to_real(rhs);
  double best_c = 0.0;
  *best_diff = std::numeric_limits<double>::infinity();
  for (double c : candidates) {
    RealMatrix b(raw_b.rows(), raw_b.cols());
    for (std::size_t i = 0; i < raw_b.rows(); ++i)
      for (std::size_t j = 0; j < raw_b.cols(); ++j) b(i, j) = c * raw_b(i, j);
    const double diff = max_abs_diff(a, b);
    if (diff < *best_diff) {
      *best_diff = diff;
      best_c = c;
    }
    if (diff <= tol) break;
  }
  return best_c;
}

/// True when lhs equals c * rhs exactly; only the exact store can assert it.
bool exactly_proportional(const Matrix<Rational>& lhs, const Matrix<Rational>& rhs,
                          double c) {
  return lhs == rhs * rational_from_double(c);
}

template <typename T>
TheoremReport verify_theorem5_impl(const CellSheaf& sheaf, double tol) {
  const Digraph& g = sheaf.graph();
  if (!is_bidirected(g))
    fail(ErrorCode::PreconditionFailed, "carrier is not bidirected");
  const Digraph carrier = with_loop_policy(g, LoopPolicy::OnePerVertex);
  if (!carrier.is_simple_with_loops())
    fail(ErrorCode::PreconditionFailed, "carrier has parallel edges");
  if (!is_vector_bundle(sheaf))
    fail(ErrorCode::PreconditionFailed, "sheaf is not a vector bundle");

  const Fodc fodc = fodc_from_digraph(carrier);
  const Metric metric = ones_metric(fodc);

  TheoremReport report;

  // Part (a): connection Laplacian of the inverse-mode transport vs delta_F.
  Transport inv = transport_from_sheaf(sheaf, TransportMode::Inverse);
  inv.carrier = carrier;
  report.parallel = is_parallel_transport(inv);
  const ConnectionForms inv_forms = connection_from_transport(fodc, inv);
  const Matrix<T> theta_delta_m = connection_laplacian<T>(fodc, metric, inv_forms).matrix;
  const Matrix<T> delta_f = sheaf_laplacian_deltaF<T>(sheaf).matrix;
  report.fitted_c = fit_constant<T>(theta_delta_m, delta_f, tol, &report.max_abs_diff_a);
  report.sign = report.fitted_c < 0 ? -1 : 1;

  // Part (b): Bochner Laplacian of the adjoint-mode transport vs L_F. Only
  // meaningful for orthogonal restriction maps.
  report.orthogonal = true;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto orthogonal = [&](const RatMatrix& m) {
      const RealMatrix gram = matrix_cast<double>(m.transpose() * m);
      return float_matrices_close(gram,
                                  matrix_cast<double>(RatMatrix::identity(m.cols())), tol);
    };
    if (!orthogonal(sheaf.map_at_tail(e)) ||
        (!g.is_loop(e) && !orthogonal(sheaf.map_at_head(e)))) {
      report.orthogonal = false;
      break;
    }
  }
  if (!report.orthogonal)
    fail(ErrorCode::PreconditionFailed, "restriction maps are not orthogonal");

  Transport adj = transport_from_sheaf(sheaf, TransportMode::Adjoint);
  adj.carrier = carrier;
  const ConnectionForms adj_forms = connection_from_transport(fodc, adj);
  const Matrix<T> bochner = bochner_laplacian<T>(fodc, adj_forms).matrix;
  const Matrix<T> lf = sheaf_laplacian_LF<T>(sheaf).matrix;
  report.max_abs_diff_b = max_abs_diff(to_real(bochner), to_real(lf));

  if constexpr (std::is_same_v<T, Rational>) {
    // Exact backend: equality must hold on the nose, not within tolerance.
    report.pass = exactly_proportional(theta_delta_m, delta_f, report.fitted_c) &&
                  bochner == lf;
  } else {
    report.pass = report.max_abs_diff_a <= tol && report.max_abs_diff_b <= tol;
  }
  return report;
}

}  // namespace

TheoremReport verify_theorem5(const CellSheaf& sheaf, Backend backend, double tol) {
  if (backend == Backend::Exact) return verify_theorem5_impl<Rational>(sheaf, tol);
  return verify_theorem5_impl<double>(sheaf, tol);
}

template std::vector<std::vector<Rational>> apply_connection<Rational>(
    const Fodc&, const ConnectionForms&, const ModuleElement<Rational>&);
template std::vector<std::vector<double>> apply_connection<double>(
    const Fodc&, const ConnectionForms&, const ModuleElement<double>&);
template Matrix<Rational> nabla_matrix<Rational>(const Fodc&, const ConnectionForms&);
template Matrix<double> nabla_matrix<double>(const Fodc&, const ConnectionForms&);
template BlockMatrix<Rational> connection_laplacian<Rational>(const Fodc&, const Metric&,
                                                              const ConnectionForms&);
template BlockMatrix<double> connection_laplacian<double>(const Fodc&, const Metric&,
                                                          const ConnectionForms&);
template BlockMatrix<Rational> bochner_laplacian<Rational>(const Fodc&, const ConnectionForms&);
template BlockMatrix<double> bochner_laplacian<double>(const Fodc&, const ConnectionForms&);

}  // namespace sheafcalc
