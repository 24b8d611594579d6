#include <doctest.h>

#include <algorithm>

#include "sheafcalc/graph.hpp"
#include "sheafcalc/random_gen.hpp"

using namespace sheafcalc;

namespace {

Digraph fix_multi() {
  return Digraph::build({"v", "w"},
                        {{"e1", "v", "w"}, {"e2", "v", "w"}, {"e3", "w", "v"}},
                        LoopPolicy::OnePerVertex);
}

UndirectedGraph p2() {
  return UndirectedGraph::build({"v", "w"}, {{"e", "v", "w"}});
}

}  // namespace

TEST_CASE("build_digraph basics and loop synthesis") {
  const Digraph g =
      Digraph::build({"v", "w"}, {{"e1", "v", "w"}}, LoopPolicy::None);
  CHECK(g.vertex_count() == 2);
  CHECK(g.edge_count() == 1);

  const Digraph looped = Digraph::build({"v"}, {}, LoopPolicy::OnePerVertex);
  CHECK(looped.edge_count() == 1);
  CHECK(looped.edge(0).id == "loop:v");
  CHECK(looped.is_loop(0));

  const Digraph multi = fix_multi();
  CHECK(multi.edge_count() == 5);
  CHECK(multi.non_loop_edges().size() == 3);
}

TEST_CASE("build_digraph rejects bad input") {
  CHECK_THROWS_AS(Digraph::build({"v", "v"}, {}, LoopPolicy::None), Error);
  CHECK_THROWS_AS(Digraph::build({"v"}, {{"e", "v", "x"}}, LoopPolicy::None), Error);
  CHECK_THROWS_AS(Digraph::build({"v"}, {{"e", "v", "v"}, {"f", "v", "v"}},
                                 LoopPolicy::OnePerVertex),
                  Error);
  CHECK_THROWS_AS(
      Digraph::build({"v"}, {{"e", "v", "v"}, {"e", "v", "v"}}, LoopPolicy::None), Error);
}

TEST_CASE("to_bidirected doubles non-loop edges and keeps loops single") {
  const Digraph h = to_bidirected(p2());
  REQUIRE(h.edge_count() == 2);
  CHECK(h.edge(0).id == "e:fwd");
  CHECK(h.edge(0).tail == "v");
  CHECK(h.edge(0).head == "w");
  CHECK(h.edge(1).id == "e:bwd");
  CHECK(h.edge(1).tail == "w");
  CHECK(h.edge(1).head == "v");

  const UndirectedGraph loop = UndirectedGraph::build({"v"}, {{"l", "v", "v"}});
  const Digraph hl = to_bidirected(loop);
  CHECK(hl.edge_count() == 1);
  CHECK(hl.is_loop(0));

  const UndirectedGraph triangle = UndirectedGraph::build(
      {"a", "b", "c"}, {{"e1", "a", "b"}, {"e2", "b", "c"}, {"e3", "c", "a"}});
  const Digraph ht = to_bidirected(triangle);
  CHECK(ht.edge_count() == 6);
  CHECK(is_bidirected(ht));
}

TEST_CASE("to_bidirected is faithful on stored data") {
  const UndirectedGraph g1 = p2();
  const UndirectedGraph g2 = UndirectedGraph::build({"v", "w"}, {{"e", "w", "v"}});
  // Endpoint normalisation makes these the same graph, and theta agrees.
  CHECK(to_bidirected(g1) == to_bidirected(g2));
  const UndirectedGraph g3 = UndirectedGraph::build({"v", "w"}, {});
  CHECK_FALSE(to_bidirected(g1) == to_bidirected(g3));
}

TEST_CASE("is_bidirected respects multiplicity") {
  CHECK(is_bidirected(to_bidirected(p2())));
  CHECK_FALSE(is_bidirected(fix_multi()));
  CHECK(is_bidirected(Digraph::build({}, {}, LoopPolicy::None)));
}

TEST_CASE("incidence poset matches the definition and forgets direction") {
  const Digraph h = to_bidirected(p2());
  const IncidencePoset poset = incidence_poset(h);
  REQUIRE(poset.relations.size() == 4);
  CHECK(std::count(poset.relations.begin(), poset.relations.end(),
                   std::make_pair(std::string("v"), std::string("e:fwd"))) == 1);
  CHECK(std::count(poset.relations.begin(), poset.relations.end(),
                   std::make_pair(std::string("w"), std::string("e:bwd"))) == 1);

  const Digraph looped = Digraph::build({"v"}, {}, LoopPolicy::OnePerVertex);
  const IncidencePoset lp = incidence_poset(looped);
  REQUIRE(lp.relations.size() == 1);
  CHECK(lp.relations[0] == std::make_pair(std::string("v"), std::string("loop:v")));

  // Non-reflexive incidences among the non-loop edges of the multigraph.
  const IncidencePoset mp = incidence_poset(fix_multi());
  std::size_t non_loop_relations = 0;
  for (const auto& [v, e] : mp.relations)
    if (e.rfind("loop:", 0) != 0) ++non_loop_relations;
  CHECK(non_loop_relations == 6);

  CHECK(incidence_poset(fix_multi()) == incidence_poset(underlying_undirected(fix_multi())));
}

TEST_CASE("classify_morphism labels") {
  const Digraph h = to_bidirected(p2());
  GraphMorphism identity;
  for (const auto& v : h.vertex_ids()) identity.vertex_map[v] = v;
  for (const auto& e : h.edges()) identity.edge_map[e.id] = e.id;
  const MorphismLabels id_labels = classify_morphism(identity, h, h);
  CHECK(id_labels.embedding);
  CHECK(id_labels.etale);
  CHECK(id_labels.covering);

  // Constant map of a 2-vertex edgeless graph onto a single looped vertex:
  // etale (empty fibres inject), not an embedding, fibres not bijective.
  const Digraph src = Digraph::build({"a", "b"}, {}, LoopPolicy::None);
  const Digraph dst = Digraph::build({"p"}, {}, LoopPolicy::OnePerVertex);
  GraphMorphism constant;
  constant.vertex_map = {{"a", "p"}, {"b", "p"}};
  const MorphismLabels c_labels = classify_morphism(constant, src, dst);
  CHECK_FALSE(c_labels.embedding);
  CHECK(c_labels.etale);
  CHECK_FALSE(c_labels.covering);

  GraphMorphism broken = identity;
  broken.edge_map["e:fwd"] = "e:bwd";
  CHECK_THROWS_AS(classify_morphism(broken, h, h), Error);
}

TEST_CASE("etale collapse of a disconnected cover") {
  // Multigraph target: two parallel u->v arrows plus v->u and v->w.
  const Digraph g = Digraph::build(
      {"u", "v", "w"},
      {{"g1", "u", "v"}, {"g2", "v", "u"}, {"g3", "u", "v"}, {"g4", "v", "w"}},
      LoopPolicy::None);
  const Digraph h = Digraph::build(
      {"u1", "v1", "w1", "u2", "v2"},
      {{"h1", "u1", "v1"}, {"h2", "v1", "w1"}, {"h3", "u1", "v1"}, {"h4", "v2", "u2"}},
      LoopPolicy::None);
  GraphMorphism phi;
  phi.vertex_map = {{"u1", "u"}, {"v1", "v"}, {"w1", "w"}, {"u2", "u"}, {"v2", "v"}};
  phi.edge_map = {{"h1", "g1"}, {"h2", "g4"}, {"h3", "g3"}, {"h4", "g2"}};
  const MorphismLabels labels = classify_morphism(phi, h, g);
  CHECK(labels.etale);
  CHECK_FALSE(labels.embedding);
  // Fibres are injective but not bijective (u1 has no incoming edge while u
  // does), so this collapse is not a covering map.
  CHECK_FALSE(labels.covering);
}

TEST_CASE("etale directed cover of a simple graph is identity-like") {
  const Digraph g = with_loop_policy(to_bidirected(p2()), LoopPolicy::OnePerVertex);
  const EtaleDirectedCover cover = etale_directed_cover(g);
  CHECK(cover.components.size() == 1);
  CHECK(cover.components[0].edge_count() == g.edge_count());
  CHECK(is_etale_directed_cover(g, cover));
}

TEST_CASE("etale directed cover splits parallel edges") {
  const Digraph g = fix_multi();
  const EtaleDirectedCover cover = etale_directed_cover(g);
  REQUIRE(cover.components.size() == 2);
  CHECK(is_etale_directed_cover(g, cover));
  // e1 and e3 land in the first component, e2 in the second.
  CHECK(cover.components[0].has_edge_id("e1"));
  CHECK(cover.components[0].has_edge_id("e3"));
  CHECK(cover.components[1].has_edge_id("e2"));
  for (const auto& comp : cover.components) CHECK(comp.is_simple_with_loops());
  CHECK(classify_morphism(cover.phi, cover.total, g).etale);

  const EtaleDirectedCover alt = etale_directed_cover(g, CoverStrategy::GreedyReversed);
  CHECK(is_etale_directed_cover(g, alt));
  CHECK(alt.components[0].has_edge_id("e2"));
  CHECK(alt.components[1].has_edge_id("e1"));
}

TEST_CASE("etale directed cover preserves non-loop edge counts") {
  Rng rng = seeded_rng(3);
  for (int t = 0; t < 10; ++t) {
    const Digraph g = random_multigraph(rng, 5, 3);
    const EtaleDirectedCover cover = etale_directed_cover(g);
    CHECK(is_etale_directed_cover(g, cover));
    CHECK(cover.total.non_loop_edges().size() == g.non_loop_edges().size());
  }
}

TEST_CASE("triangular cliques") {
  const Digraph h = with_loop_policy(to_bidirected(p2()), LoopPolicy::OnePerVertex);
  const auto cliques = triangular_cliques(h);
  REQUIRE(cliques.size() == 2);
  CHECK(cliques[0] == TriangularClique{"v", "w", "v"});
  CHECK(cliques[1] == TriangularClique{"w", "v", "w"});

  // Directed 3-cycle without chords: every rotation misses its x->z edge.
  const Digraph cycle = Digraph::build(
      {"a", "b", "c"}, {{"e1", "a", "b"}, {"e2", "b", "c"}, {"e3", "c", "a"}},
      LoopPolicy::OnePerVertex);
  CHECK(triangular_cliques(cycle).empty());

  const UndirectedGraph triangle = UndirectedGraph::build(
      {"a", "b", "c"}, {{"e1", "a", "b"}, {"e2", "b", "c"}, {"e3", "c", "a"}});
  const Digraph bidir = with_loop_policy(to_bidirected(triangle), LoopPolicy::OnePerVertex);
  const auto tri_cliques = triangular_cliques(bidir);
  std::size_t returns = 0, distinct = 0;
  for (const auto& c : tri_cliques) (c.x == c.z ? returns : distinct) += 1;
  CHECK(returns == 6);
  CHECK(distinct == 6);
}

TEST_CASE("return clique count equals ordered mutual pairs") {
  Rng rng = seeded_rng(17);
  for (int t = 0; t < 15; ++t) {
    const Digraph g = random_simple_digraph(rng, 6);
    std::size_t mutual = 0;
    for (std::size_t e : g.non_loop_edges())
      if (g.has_arc(g.head_index(e), g.tail_index(e))) ++mutual;
    std::size_t returns = 0;
    for (const auto& c : triangular_cliques(g))
      if (c.x == c.z) ++returns;
    CHECK(returns == mutual);
  }
}

TEST_CASE("edge capacity is enforced") {
  std::vector<EdgeSpec> edges;
  for (std::size_t i = 0; i < 100001; ++i)
    edges.push_back({"e" + std::to_string(i), "v", "v"});
  CHECK_THROWS_AS(Digraph::build({"v"}, edges, LoopPolicy::None), Error);
}
