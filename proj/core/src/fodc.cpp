#include "sheafcalc/fodc.hpp"

#include <algorithm>
#include <array>

namespace sheafcalc {

namespace {

Fodc make_fodc(const Digraph& g, EtaleDirectedCover cover) {
  Fodc fodc;
  fodc.base = g;
  fodc.cover = std::move(cover);
  const Digraph& total = fodc.cover.total;
  // Basis in base edge order; the cover keeps base ids on non-loops.
  for (std::size_t be : g.non_loop_edges()) {
    const EdgeId& id = g.edge(be).id;
    const std::size_t ce = total.edge_index(id);
    fodc.basis_index[id] = fodc.basis.size();
    fodc.basis.push_back(id);
    const VertexId& tail = fodc.cover.phi.vertex_map.at(total.edge(ce).tail);
    const VertexId& head = fodc.cover.phi.vertex_map.at(total.edge(ce).head);
    fodc.basis_tail.push_back(g.vertex_index(tail));
    fodc.basis_head.push_back(g.vertex_index(head));
  }
  return fodc;
}

}  // namespace

Fodc fodc_from_digraph(const Digraph& g) {
  if (!g.is_simple_with_loops())
    fail(ErrorCode::NotSimpleDigraph,
         "carrier must have at most one edge per ordered pair and one loop per vertex");
  return make_fodc(g, etale_directed_cover(g));
}

Fodc fodc_from_etale_cover(const Digraph& g, const EtaleDirectedCover& cover) {
  if (g.loop_policy() != LoopPolicy::OnePerVertex)
    fail(ErrorCode::NotEtaleDirectedCover, "base graph lacks the one-loop-per-vertex policy");
  if (!is_etale_directed_cover(g, cover))
    fail(ErrorCode::NotEtaleDirectedCover, "cover contract violated");
  return make_fodc(g, cover);
}

template <typename T>
std::vector<T> theta_form(const Fodc& fodc) {
  return std::vector<T>(fodc.dim(), T(1));
}

template <typename T>
std::vector<T> d_apply(const Fodc& fodc, const std::vector<T>& a) {
  if (a.size() != fodc.vertex_count()) fail(ErrorCode::ShapeMismatch, "function length");
  std::vector<T> out(fodc.dim(), T(0));
  for (std::size_t i = 0; i < fodc.dim(); ++i)
    out[i] = a[fodc.basis_head[i]] - a[fodc.basis_tail[i]];
  return out;
}

template <typename T>
Matrix<T> d_matrix(const Fodc& fodc) {
  Matrix<T> d(fodc.dim(), fodc.vertex_count());
  for (std::size_t i = 0; i < fodc.dim(); ++i) {
    d(i, fodc.basis_head[i]) += T(1);
    d(i, fodc.basis_tail[i]) -= T(1);
  }
  return d;
}

template <typename T>
std::vector<T> bimodule_act(const Fodc& fodc, const std::vector<T>& a,
                            const std::vector<T>& omega, Side side) {
  if (a.size() != fodc.vertex_count() || omega.size() != fodc.dim())
    fail(ErrorCode::ShapeMismatch, "bimodule action shapes");
  std::vector<T> out(fodc.dim(), T(0));
  for (std::size_t i = 0; i < fodc.dim(); ++i) {
    const std::size_t v = side == Side::Left ? fodc.basis_tail[i] : fodc.basis_head[i];
    out[i] = omega[i] * a[v];
  }
  return out;
}

bool check_inner(const Fodc& fodc, const std::vector<Rational>& a) {
  const auto da = d_apply<Rational>(fodc, a);
  const auto theta = theta_form<Rational>(fodc);
  const auto ta = bimodule_act<Rational>(fodc, a, theta, Side::Left);   // a . theta
  const auto at = bimodule_act<Rational>(fodc, a, theta, Side::Right);  // theta . a
  for (std::size_t i = 0; i < fodc.dim(); ++i)
    if (da[i] != at[i] - ta[i]) return false;
  return true;
}

PushforwardMaps pushforward_morphism(const GraphMorphism& phi, const Digraph& source,
                                     const Digraph& target) {
  if (!source.is_simple_with_loops() || !target.is_simple_with_loops())
    fail(ErrorCode::NotSimpleDigraph, "pushforward needs simple carriers");
  classify_morphism(phi, source, target);  // throws InvalidMorphism on bad data

  PushforwardMaps maps;
  // phi^*: K[V_target] -> K[V_source], (phi^* a)(v) = a(phi v).
  maps.algebra = RatMatrix(source.vertex_count(), target.vertex_count());
  for (std::size_t v = 0; v < source.vertex_count(); ++v) {
    const VertexId& image = phi.vertex_map.at(source.vertex_ids()[v]);
    maps.algebra(v, target.vertex_index(image)) = Rational(1);
  }

  // phi_*: one-forms on the target -> one-forms on the source; each source
  // edge lies over at most one target generator.
  const auto& src_basis = source.non_loop_edges();
  const auto& tgt_basis = target.non_loop_edges();
  std::map<std::size_t, std::size_t> tgt_pos;
  for (std::size_t j = 0; j < tgt_basis.size(); ++j) tgt_pos[tgt_basis[j]] = j;
  maps.forms = RatMatrix(src_basis.size(), tgt_basis.size());
  for (std::size_t i = 0; i < src_basis.size(); ++i) {
    const std::size_t e = src_basis[i];
    const EdgeId& image = phi.edge_map.at(source.edge(e).id);
    const std::size_t te = target.edge_index(image);
    if (target.is_loop(te)) continue;  // edge collapsed onto a loop
    maps.forms(i, tgt_pos.at(te)) = Rational(1);
  }
  return maps;
}

SecondOrderCalc second_order_calc(const Digraph& g,
                                  const std::vector<TriangularClique>& excluded) {
  if (!g.is_simple_with_loops())
    fail(ErrorCode::NotSimpleDigraph, "two-forms need a simple carrier");
  SecondOrderCalc calc;
  calc.base = g;
  calc.all_cliques = triangular_cliques(g);
  std::map<TriangularClique, std::size_t> position;
  for (std::size_t i = 0; i < calc.all_cliques.size(); ++i)
    position[calc.all_cliques[i]] = i;
  for (const auto& clique : excluded) {
    auto it = position.find(clique);
    if (it == position.end())
      fail(ErrorCode::UnknownClique,
           "(" + clique.x + ", " + clique.y + ", " + clique.z + ")");
    calc.excluded.insert(it->second);
  }
  for (std::size_t i = 0; i < calc.all_cliques.size(); ++i) {
    if (calc.excluded.count(i)) continue;
    calc.basis_pos[i] = calc.basis.size();
    calc.basis.push_back(i);
  }
  return calc;
}

namespace {

/// Basis position of the clique (x, y, z) if present and not excluded.
std::optional<std::size_t> clique_slot(const SecondOrderCalc& calc, std::size_t x,
                                       std::size_t y, std::size_t z) {
  if (x == y || y == z) return std::nullopt;
  const Digraph& g = calc.base;
  if (!g.has_arc(x, y) || !g.has_arc(y, z) || !g.has_arc(x, z)) return std::nullopt;
  const TriangularClique key{g.vertex_ids()[x], g.vertex_ids()[y], g.vertex_ids()[z]};
  const auto it = std::lower_bound(
      calc.all_cliques.begin(), calc.all_cliques.end(), key,
      [&](const TriangularClique& a, const TriangularClique& b) {
        auto ka = std::array<std::size_t, 3>{g.vertex_index(a.x), g.vertex_index(a.y),
                                             g.vertex_index(a.z)};
        auto kb = std::array<std::size_t, 3>{g.vertex_index(b.x), g.vertex_index(b.y),
                                             g.vertex_index(b.z)};
        return ka < kb;
      });
  const std::size_t idx = static_cast<std::size_t>(it - calc.all_cliques.begin());
  auto pos = calc.basis_pos.find(idx);
  if (pos == calc.basis_pos.end()) return std::nullopt;
  return pos->second;
}

}  // namespace

template <typename T>
std::vector<T> wedge(const SecondOrderCalc& calc, const Fodc& fodc,
                     const std::vector<T>& w1, const std::vector<T>& w2) {
  if (!(fodc.base == calc.base))
    fail(ErrorCode::ShapeMismatch, "one-forms live on a different carrier");
  if (w1.size() != fodc.dim() || w2.size() != fodc.dim())
    fail(ErrorCode::ShapeMismatch, "wedge operand length");
  std::vector<T> out(calc.dim(), T(0));
  for (std::size_t i = 0; i < fodc.dim(); ++i) {
    if (w1[i] == T(0)) continue;
    for (std::size_t j = 0; j < fodc.dim(); ++j) {
      if (w2[j] == T(0)) continue;
      if (fodc.basis_head[i] != fodc.basis_tail[j]) continue;
      const auto slot =
          clique_slot(calc, fodc.basis_tail[i], fodc.basis_head[i], fodc.basis_head[j]);
      if (slot) out[*slot] += w1[i] * w2[j];
    }
  }
  return out;
}

template <typename T>
std::vector<T> d1_apply(const SecondOrderCalc& calc, const Fodc& fodc,
                        const std::vector<T>& omega) {
  if (!(fodc.base == calc.base))
    fail(ErrorCode::ShapeMismatch, "one-form lives on a different carrier");
  if (omega.size() != fodc.dim()) fail(ErrorCode::ShapeMismatch, "one-form length");
  std::vector<T> out(calc.dim(), T(0));
  const std::size_t n = calc.base.vertex_count();
  for (std::size_t i = 0; i < fodc.dim(); ++i) {
    if (omega[i] == T(0)) continue;
    const std::size_t x = fodc.basis_tail[i];
    const std::size_t y = fodc.basis_head[i];
    for (std::size_t u = 0; u < n; ++u) {
      if (auto s = clique_slot(calc, u, x, y)) out[*s] += omega[i];
      if (auto s = clique_slot(calc, x, u, y)) out[*s] -= omega[i];
      if (auto s = clique_slot(calc, x, y, u)) out[*s] += omega[i];
    }
  }
  return out;
}

Metric quantum_metric(const Fodc& fodc, const std::vector<MetricEntry>& entries) {
  Metric metric;
  for (const auto& entry : entries) {
    auto out = fodc.basis_index.find(entry.edge_out);
    auto back = fodc.basis_index.find(entry.edge_back);
    if (out == fodc.basis_index.end())
      fail(ErrorCode::UnknownEdge, "'" + entry.edge_out + "'");
    if (back == fodc.basis_index.end())
      fail(ErrorCode::UnknownEdge, "'" + entry.edge_back + "'");
    const std::size_t e = out->second;
    const std::size_t f = back->second;
    if (fodc.basis_tail[e] != fodc.basis_head[f] || fodc.basis_head[e] != fodc.basis_tail[f])
      fail(ErrorCode::IncompatiblePair,
           "(" + entry.edge_out + ", " + entry.edge_back + ") endpoints do not match");
    metric.lambda[{e, f}] = entry.value;
  }
  return metric;
}

Metric ones_metric(const Fodc& fodc) {
  Metric metric;
  for (std::size_t e = 0; e < fodc.dim(); ++e)
    for (std::size_t f = 0; f < fodc.dim(); ++f)
      if (fodc.basis_tail[e] == fodc.basis_head[f] &&
          fodc.basis_head[e] == fodc.basis_tail[f])
        metric.lambda[{e, f}] = Rational(1);
  return metric;
}

template <typename T>
std::vector<T> metric_pair(const Fodc& fodc, const Metric& metric,
                           const std::vector<T>& w1, const std::vector<T>& w2) {
  if (w1.size() != fodc.dim() || w2.size() != fodc.dim())
    fail(ErrorCode::ShapeMismatch, "pairing operand length");
  std::vector<T> out(fodc.vertex_count(), T(0));
  for (const auto& [key, value] : metric.lambda) {
    const auto [e, f] = key;
    out[fodc.basis_tail[e]] += w1[e] * w2[f] * scalar_cast<T>(value);
  }
  return out;
}

template <typename T>
GraphLaplacians<T> graph_laplacians(const Fodc& fodc, const Metric& metric) {
  const std::size_t n = fodc.vertex_count();
  GraphLaplacians<T> out{Matrix<T>(n, n), Matrix<T>(n, n)};
  for (const auto& [key, value] : metric.lambda) {
    const auto [e, f] = key;
    const T two_lambda = T(2) * scalar_cast<T>(value);
    // delta_theta a = 2 (theta, d a): the pairing reads d a through f.
    out.delta_theta(fodc.basis_tail[e], fodc.basis_head[f]) += two_lambda;
    out.delta_theta(fodc.basis_tail[e], fodc.basis_tail[f]) -= two_lambda;
    // theta_delta a = -2 (d a, theta): d a enters through e.
    out.theta_delta(fodc.basis_tail[e], fodc.basis_head[e]) -= two_lambda;
    out.theta_delta(fodc.basis_tail[e], fodc.basis_tail[e]) += two_lambda;
  }
  return out;
}

RatMatrix classical_laplacian(const UndirectedGraph& g) {
  RatMatrix lap(g.vertex_count(), g.vertex_count());
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    if (g.is_loop(e)) continue;
    const std::size_t a = g.vertex_index(g.edges()[e].a);
    const std::size_t b = g.vertex_index(g.edges()[e].b);
    lap(a, a) += 1;
    lap(b, b) += 1;
    lap(a, b) -= 1;
    lap(b, a) -= 1;
  }
  return lap;
}

template std::vector<Rational> theta_form<Rational>(const Fodc&);
template std::vector<double> theta_form<double>(const Fodc&);
template std::vector<Rational> d_apply<Rational>(const Fodc&, const std::vector<Rational>&);
template std::vector<double> d_apply<double>(const Fodc&, const std::vector<double>&);
template Matrix<Rational> d_matrix<Rational>(const Fodc&);
template Matrix<double> d_matrix<double>(const Fodc&);
template std::vector<Rational> bimodule_act<Rational>(const Fodc&, const std::vector<Rational>&,
                                                      const std::vector<Rational>&, Side);
template std::vector<double> bimodule_act<double>(const Fodc&, const std::vector<double>&,
                                                  const std::vector<double>&, Side);
template std::vector<Rational> wedge<Rational>(const SecondOrderCalc&, const Fodc&,
                                               const std::vector<Rational>&,
                                               const std::vector<Rational>&);
template std::vector<double> wedge<double>(const SecondOrderCalc&, const Fodc&,
                                           const std::vector<double>&,
                                           const std::vector<double>&);
template std::vector<Rational> d1_apply<Rational>(const SecondOrderCalc&, const Fodc&,
                                                  const std::vector<Rational>&);
template std::vector<double> d1_apply<double>(const SecondOrderCalc&, const Fodc&,
                                              const std::vector<double>&);
template std::vector<Rational> metric_pair<Rational>(const Fodc&, const Metric&,
                                                     const std::vector<Rational>&,
                                                     const std::vector<Rational>&);
template std::vector<double> metric_pair<double>(const Fodc&, const Metric&,
                                                 const std::vector<double>&,
                                                 const std::vector<double>&);
template GraphLaplacians<Rational> graph_laplacians<Rational>(const Fodc&, const Metric&);
template GraphLaplacians<double> graph_laplacians<double>(const Fodc&, const Metric&);

}  // namespace sheafcalc
