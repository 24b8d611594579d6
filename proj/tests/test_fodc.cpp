#include <doctest.h>

#include "sheafcalc/fodc.hpp"
#include "sheafcalc/linalg.hpp"
#include "sheafcalc/random_gen.hpp"

using namespace sheafcalc;

namespace {

Rational q(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

UndirectedGraph p2() { return UndirectedGraph::build({"v", "w"}, {{"e", "v", "w"}}); }

Digraph theta_p2() {
  return with_loop_policy(to_bidirected(p2()), LoopPolicy::OnePerVertex);
}

Digraph fix_multi() {
  return Digraph::build({"v", "w"},
                        {{"e1", "v", "w"}, {"e2", "v", "w"}, {"e3", "w", "v"}},
                        LoopPolicy::OnePerVertex);
}

Digraph complete3() {
  std::vector<EdgeSpec> edges;
  const std::vector<VertexId> names{"a", "b", "c"};
  std::size_t k = 0;
  for (const auto& x : names)
    for (const auto& y : names)
      if (x != y) edges.push_back({"e" + std::to_string(k++), x, y});
  return Digraph::build(names, edges, LoopPolicy::OnePerVertex);
}

std::vector<Rational> delta(const Fodc& fodc, const VertexId& v) {
  std::vector<Rational> a(fodc.vertex_count(), q(0));
  a[fodc.base.vertex_index(v)] = q(1);
  return a;
}

}  // namespace

TEST_CASE("fodc over a simple carrier") {
  const Fodc fodc = fodc_from_digraph(theta_p2());
  REQUIRE(fodc.dim() == 2);
  CHECK(fodc.basis[0] == "e:fwd");
  CHECK(fodc.basis[1] == "e:bwd");

  // d(delta_v) = omega_{w->v} - omega_{v->w}.
  const auto dv = d_apply<Rational>(fodc, delta(fodc, "v"));
  CHECK(dv[0] == q(-1));
  CHECK(dv[1] == q(1));

  const Digraph loop_only = Digraph::build({"v"}, {}, LoopPolicy::OnePerVertex);
  CHECK(fodc_from_digraph(loop_only).dim() == 0);

  CHECK(fodc_from_digraph(complete3()).dim() == 6);

  CHECK_THROWS_AS(fodc_from_digraph(fix_multi()), Error);
}

TEST_CASE("fodc over an etale cover of a multigraph") {
  const Digraph g = fix_multi();
  const Fodc fodc = fodc_from_etale_cover(g, etale_directed_cover(g));
  REQUIRE(fodc.dim() == 3);

  // d(delta_v) = -omega_e1 - omega_e2 + omega_e3.
  const auto dv = d_apply<Rational>(fodc, delta(fodc, "v"));
  CHECK(dv == std::vector<Rational>{q(-1), q(-1), q(1)});

  // Identity cover on simple carriers reduces to the direct construction.
  const Digraph simple = theta_p2();
  const Fodc direct = fodc_from_digraph(simple);
  const Fodc covered = fodc_from_etale_cover(simple, etale_directed_cover(simple));
  CHECK(d_matrix<Rational>(direct) == d_matrix<Rational>(covered));

  // A malformed cover is rejected.
  EtaleDirectedCover bad = etale_directed_cover(g);
  bad.phi.edge_map["e1"] = "e2";
  CHECK_THROWS_AS(fodc_from_etale_cover(g, bad), Error);
}

TEST_CASE("cover independence of the calculus") {
  Rng rng = seeded_rng(61);
  for (int t = 0; t < 10; ++t) {
    const Digraph g = random_multigraph(rng, 5, 3);
    const Fodc first = fodc_from_etale_cover(g, etale_directed_cover(g));
    const Fodc second =
        fodc_from_etale_cover(g, etale_directed_cover(g, CoverStrategy::GreedyReversed));
    CHECK(first.dim() == second.dim());
    // Cover edges keep base ids, so the canonical bijection is the identity.
    CHECK(first.basis == second.basis);
    CHECK(d_matrix<Rational>(first) == d_matrix<Rational>(second));
  }
}

TEST_CASE("differential of constants vanishes") {
  const Fodc fodc = fodc_from_digraph(complete3());
  const std::vector<Rational> constant(fodc.vertex_count(), q(5));
  for (const auto& c : d_apply<Rational>(fodc, constant)) CHECK(c == q(0));
}

TEST_CASE("bimodule actions act through the endpoints") {
  const Fodc fodc = fodc_from_digraph(theta_p2());
  std::vector<Rational> e_vw{q(1), q(0)};

  CHECK(bimodule_act<Rational>(fodc, delta(fodc, "v"), e_vw, Side::Left) == e_vw);
  CHECK(bimodule_act<Rational>(fodc, delta(fodc, "v"), e_vw, Side::Right) ==
        std::vector<Rational>{q(0), q(0)});

  std::vector<Rational> two_dv = delta(fodc, "v");
  two_dv[fodc.base.vertex_index("v")] = q(2);
  const auto scaled =
      bimodule_act<Rational>(fodc, two_dv, theta_form<Rational>(fodc), Side::Left);
  CHECK(scaled == std::vector<Rational>{q(2), q(0)});
}

TEST_CASE("the calculus is inner") {
  const Fodc simple = fodc_from_digraph(theta_p2());
  const Fodc k3 = fodc_from_digraph(complete3());
  const Digraph multi = fix_multi();
  const Fodc covered = fodc_from_etale_cover(multi, etale_directed_cover(multi));

  Rng rng = seeded_rng(67);
  for (int t = 0; t < 20; ++t) {
    CHECK(check_inner(simple, random_function(rng, simple.vertex_count())));
    CHECK(check_inner(k3, random_function(rng, k3.vertex_count())));
    CHECK(check_inner(covered, random_function(rng, covered.vertex_count())));
  }
  CHECK(check_inner(k3, delta(k3, "a")));
  const std::vector<Rational> constant(simple.vertex_count(), q(3));
  CHECK(check_inner(simple, constant));
}

TEST_CASE("Leibniz rule for the differential") {
  Rng rng = seeded_rng(71);
  for (int t = 0; t < 20; ++t) {
    const Digraph g = random_simple_digraph(rng, 6);
    const Fodc fodc = fodc_from_digraph(g);
    const auto a = random_function(rng, fodc.vertex_count());
    const auto b = random_function(rng, fodc.vertex_count());
    std::vector<Rational> ab(fodc.vertex_count());
    for (std::size_t i = 0; i < ab.size(); ++i) ab[i] = a[i] * b[i];

    const auto d_ab = d_apply<Rational>(fodc, ab);
    const auto da_b = bimodule_act<Rational>(fodc, b, d_apply<Rational>(fodc, a), Side::Right);
    const auto a_db = bimodule_act<Rational>(fodc, a, d_apply<Rational>(fodc, b), Side::Left);
    for (std::size_t i = 0; i < fodc.dim(); ++i) CHECK(d_ab[i] == da_b[i] + a_db[i]);
  }
}

TEST_CASE("pushforward of morphisms") {
  const Digraph h = theta_p2();
  GraphMorphism identity;
  for (const auto& v : h.vertex_ids()) identity.vertex_map[v] = v;
  for (const auto& e : h.edges()) identity.edge_map[e.id] = e.id;
  const PushforwardMaps id_maps = pushforward_morphism(identity, h, h);
  CHECK(id_maps.algebra == RatMatrix::identity(2));
  CHECK(id_maps.forms == RatMatrix::identity(2));

  // Collapse onto a single looped vertex: the form module downstairs is zero.
  const Digraph point = Digraph::build({"p"}, {}, LoopPolicy::OnePerVertex);
  GraphMorphism collapse;
  collapse.vertex_map = {{"v", "p"}, {"w", "p"}};
  collapse.edge_map = {{"e:fwd", "loop:p"}, {"e:bwd", "loop:p"},
                       {"loop:v", "loop:p"}, {"loop:w", "loop:p"}};
  const PushforwardMaps c_maps = pushforward_morphism(collapse, h, point);
  CHECK(c_maps.forms.rows() == 2);
  CHECK(c_maps.forms.cols() == 0);

  // A fold: every row of the form map has at most one 1; the differential
  // intertwines, d_source(phi^* a) = phi_*(d_target a).
  const Digraph target = theta_p2();
  const UndirectedGraph square = UndirectedGraph::build(
      {"a", "b", "c", "d"},
      {{"s1", "a", "b"}, {"s2", "b", "c"}, {"s3", "c", "d"}, {"s4", "d", "a"}});
  const Digraph source = with_loop_policy(to_bidirected(square), LoopPolicy::OnePerVertex);
  GraphMorphism fold;
  fold.vertex_map = {{"a", "v"}, {"b", "w"}, {"c", "v"}, {"d", "w"}};
  for (const auto& e : source.edges()) {
    const VertexId t = fold.vertex_map.at(e.tail);
    const VertexId hd = fold.vertex_map.at(e.head);
    if (t == hd) {
      fold.edge_map[e.id] = "loop:" + t;
    } else {
      fold.edge_map[e.id] = t == "v" ? "e:fwd" : "e:bwd";
    }
  }
  const PushforwardMaps fold_maps = pushforward_morphism(fold, source, target);
  for (std::size_t i = 0; i < fold_maps.forms.rows(); ++i) {
    std::size_t nonzero = 0;
    for (std::size_t j = 0; j < fold_maps.forms.cols(); ++j) {
      if (fold_maps.forms(i, j) != q(0)) {
        ++nonzero;
        CHECK(fold_maps.forms(i, j) == q(1));
      }
    }
    CHECK(nonzero == 1);
  }
  const Fodc src_fodc = fodc_from_digraph(source);
  const Fodc tgt_fodc = fodc_from_digraph(target);
  Rng rng = seeded_rng(73);
  for (int t = 0; t < 10; ++t) {
    const auto a = random_function(rng, tgt_fodc.vertex_count());
    const auto lhs = d_apply<Rational>(src_fodc, fold_maps.algebra.apply(a));
    const auto rhs = fold_maps.forms.apply(d_apply<Rational>(tgt_fodc, a));
    CHECK(lhs == rhs);
  }
  // theta pushes to theta along the fold (no edge collapses here except the
  // loops, which carry no generators).
  CHECK(fold_maps.forms.apply(theta_form<Rational>(tgt_fodc)) ==
        theta_form<Rational>(src_fodc));
}

TEST_CASE("second order calculus bases") {
  const Digraph h = theta_p2();
  const auto cliques = triangular_cliques(h);
  CHECK(second_order_calc(h, {}).dim() == 2);
  CHECK(second_order_calc(h, cliques).dim() == 0);

  const UndirectedGraph triangle = UndirectedGraph::build(
      {"a", "b", "c"}, {{"e1", "a", "b"}, {"e2", "b", "c"}, {"e3", "c", "a"}});
  const Digraph k3 = with_loop_policy(to_bidirected(triangle), LoopPolicy::OnePerVertex);
  std::vector<TriangularClique> returns;
  for (const auto& c : triangular_cliques(k3))
    if (c.x == c.z) returns.push_back(c);
  CHECK(second_order_calc(k3, returns).dim() == 6);

  CHECK_THROWS_AS(second_order_calc(h, {TriangularClique{"v", "v", "v"}}), Error);
}

TEST_CASE("wedge products hit triangular cliques") {
  const Digraph h = theta_p2();
  const Fodc fodc = fodc_from_digraph(h);
  const SecondOrderCalc calc = second_order_calc(h, {});
  // Basis cliques in canonical order: (v,w,v) then (w,v,w).
  std::vector<Rational> e_vw{q(1), q(0)}, e_wv{q(0), q(1)};

  CHECK(wedge<Rational>(calc, fodc, e_vw, e_wv) == std::vector<Rational>{q(1), q(0)});
  CHECK(wedge<Rational>(calc, fodc, e_vw, e_vw) == std::vector<Rational>{q(0), q(0)});

  const auto theta = theta_form<Rational>(fodc);
  CHECK(wedge<Rational>(calc, fodc, theta, theta) == std::vector<Rational>{q(1), q(1)});
}

TEST_CASE("second differential") {
  const Digraph h = theta_p2();
  const Fodc fodc = fodc_from_digraph(h);
  const SecondOrderCalc calc = second_order_calc(h, {});
  std::vector<Rational> e_vw{q(1), q(0)};

  // d omega_{v->w} = omega_{v->w->v} + omega_{w->v->w}.
  CHECK(d1_apply<Rational>(calc, fodc, e_vw) == std::vector<Rational>{q(1), q(1)});

  const SecondOrderCalc crushed = second_order_calc(h, triangular_cliques(h));
  CHECK(d1_apply<Rational>(crushed, fodc, e_vw).empty());
}

TEST_CASE("d1 after d0 vanishes for every vertex and exclusion set") {
  Rng rng = seeded_rng(79);
  for (int t = 0; t < 10; ++t) {
    const Digraph g = random_simple_digraph(rng, 5);
    const Fodc fodc = fodc_from_digraph(g);
    std::vector<TriangularClique> returns;
    for (const auto& c : triangular_cliques(g))
      if (c.x == c.z) returns.push_back(c);
    const std::vector<std::vector<TriangularClique>> exclusions{
        {}, returns, triangular_cliques(g)};
    for (const auto& s : exclusions) {
      const SecondOrderCalc calc = second_order_calc(g, s);
      for (const auto& v : g.vertex_ids()) {
        const auto dd = d1_apply<Rational>(calc, fodc, d_apply<Rational>(fodc, delta(fodc, v)));
        for (const auto& c : dd) CHECK(c == q(0));
      }
    }
  }
}

TEST_CASE("quantum metric keys are endpoint-checked") {
  const Fodc fodc = fodc_from_digraph(theta_p2());
  const Metric ones = ones_metric(fodc);
  CHECK(ones.lambda.size() == 2);

  std::vector<Rational> e_vw{q(1), q(0)}, e_wv{q(0), q(1)};
  const auto pairing = metric_pair<Rational>(fodc, ones, e_vw, e_wv);
  CHECK(pairing == std::vector<Rational>{q(1), q(0)});  // delta_v

  // Mismatched endpoints evaluate to zero.
  CHECK(metric_pair<Rational>(fodc, ones, e_vw, e_vw) ==
        std::vector<Rational>{q(0), q(0)});

  // Scaled metric scales the pairing.
  const Metric doubled = quantum_metric(
      fodc, {{"e:fwd", "e:bwd", q(2)}, {"e:bwd", "e:fwd", q(2)}});
  CHECK(metric_pair<Rational>(fodc, doubled, e_vw, e_wv) ==
        std::vector<Rational>{q(2), q(0)});

  CHECK_THROWS_AS(quantum_metric(fodc, {{"e:fwd", "e:fwd", q(1)}}), Error);
  CHECK_THROWS_AS(quantum_metric(fodc, {{"e:fwd", "nope", q(1)}}), Error);
}

TEST_CASE("metric pairs across cover components") {
  const Digraph g = fix_multi();
  const Fodc fodc = fodc_from_etale_cover(g, etale_directed_cover(g));
  // Compatible pairs: (e1,e3), (e2,e3), (e3,e1), (e3,e2).
  CHECK(ones_metric(fodc).lambda.size() == 4);
  CHECK_NOTHROW(quantum_metric(fodc, {{"e1", "e3", q(1)}, {"e3", "e2", q(1)}}));
  CHECK_THROWS_AS(quantum_metric(fodc, {{"e1", "e2", q(1)}}), Error);
}

TEST_CASE("graph Laplacians from the inner form") {
  const Fodc fodc = fodc_from_digraph(theta_p2());
  const auto laps = graph_laplacians<Rational>(fodc, ones_metric(fodc));
  CHECK(laps.delta_theta == RatMatrix{{q(2), q(-2)}, {q(-2), q(2)}});
  CHECK(laps.theta_delta == RatMatrix{{q(2), q(-2)}, {q(-2), q(2)}});

  // L = (1/2) Delta_theta against the classical operator.
  CHECK(classical_laplacian(p2()) * q(2) == laps.delta_theta);

  const Metric zero;
  CHECK(graph_laplacians<Rational>(fodc, zero).delta_theta.is_zero());
}

TEST_CASE("classical Laplacian values") {
  CHECK(classical_laplacian(p2()) == RatMatrix{{q(1), q(-1)}, {q(-1), q(1)}});

  const UndirectedGraph p3 =
      UndirectedGraph::build({"u", "v", "w"}, {{"e1", "u", "v"}, {"e2", "v", "w"}});
  CHECK(classical_laplacian(p3) ==
        RatMatrix{{q(1), q(-1), q(0)}, {q(-1), q(2), q(-1)}, {q(0), q(-1), q(1)}});

  const UndirectedGraph edgeless = UndirectedGraph::build({"u", "v"}, {});
  CHECK(classical_laplacian(edgeless).is_zero());
}

TEST_CASE("theta_delta is positive semidefinite for positive metrics") {
  Rng rng = seeded_rng(83);
  for (int t = 0; t < 10; ++t) {
    const UndirectedGraph base = random_undirected_simple(rng, 6);
    const Digraph carrier = with_loop_policy(to_bidirected(base), LoopPolicy::OnePerVertex);
    const Fodc fodc = fodc_from_digraph(carrier);
    const auto laps = graph_laplacians<Rational>(fodc, ones_metric(fodc));
    CHECK(laps.theta_delta.is_symmetric());
    if (laps.theta_delta.rows() > 0)
      CHECK(min_symmetric_eigenvalue(matrix_cast<double>(laps.theta_delta)) >= -1e-9);
  }
}
