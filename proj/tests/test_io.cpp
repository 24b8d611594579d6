#include <doctest.h>

#include "sheafcalc/io.hpp"

using namespace sheafcalc;

namespace {

const char* kThetaP2 = R"({
  "directed": true,
  "vertices": ["v", "w"],
  "edges": [
    {"id": "e:fwd", "tail": "v", "head": "w"},
    {"id": "e:bwd", "tail": "w", "head": "v"}
  ]
})";

}  // namespace

TEST_CASE("graph files parse strictly") {
  const ParsedGraph parsed = parse_graph_json(kThetaP2);
  CHECK(parsed.directed);
  CHECK(parsed.digraph->vertex_count() == 2);
  CHECK(parsed.digraph->edge_count() == 2);
  CHECK(is_bidirected(parsed.as_bidirected()));

  const ParsedGraph undirected = parse_graph_json(
      R"({"directed": false, "vertices": ["v", "w"], "edges": [{"id": "e", "a": "v", "b": "w"}]})");
  CHECK_FALSE(undirected.directed);
  CHECK(undirected.as_directed().edge_count() == 1);
  CHECK(undirected.as_bidirected().edge_count() == 2);

  CHECK_THROWS_AS(parse_graph_json("not json"), Error);
  CHECK_THROWS_AS(parse_graph_json(R"({"vertices": [], "edges": []})"), Error);
  CHECK_THROWS_AS(
      parse_graph_json(
          R"({"directed": true, "vertices": ["v"], "edges": [], "extra": 1})"),
      Error);
  // Files never list self-loops.
  CHECK_THROWS_AS(
      parse_graph_json(
          R"({"directed": true, "vertices": ["v"], "edges": [{"id": "l", "tail": "v", "head": "v"}]})"),
      Error);
}

TEST_CASE("sheaf files parse rationals and reject floats in exact mode") {
  const Digraph carrier = parse_graph_json(kThetaP2).as_directed();
  const char* sheaf_text = R"({
    "convention": "vertex_to_edge",
    "vertex_dims": {"v": 2, "w": 1},
    "edge_dims": {"e:fwd": 1, "e:bwd": 1},
    "maps": [
      {"edge": "e:fwd", "vertex": "v", "matrix": [["1/2", "0"]]},
      {"edge": "e:fwd", "vertex": "w", "matrix": [[1]]},
      {"edge": "e:bwd", "vertex": "w", "matrix": [["3"]]},
      {"edge": "e:bwd", "vertex": "v", "matrix": [["-1", "2"]]}
    ]
  })";
  const CellSheaf sheaf = parse_sheaf_json(sheaf_text, carrier, false);
  CHECK(sheaf.vertex_dim(0) == 2);
  Rational half(1, 2);
  CHECK(sheaf.map_at_tail(0)(0, 0) == half);

  const char* float_text = R"({
    "convention": "vertex_to_edge",
    "vertex_dims": {"v": 1, "w": 1},
    "edge_dims": {"e:fwd": 1, "e:bwd": 1},
    "maps": [
      {"edge": "e:fwd", "vertex": "v", "matrix": [[0.5]]},
      {"edge": "e:fwd", "vertex": "w", "matrix": [[1]]},
      {"edge": "e:bwd", "vertex": "w", "matrix": [[1]]},
      {"edge": "e:bwd", "vertex": "v", "matrix": [[1]]}
    ]
  })";
  CHECK_THROWS_AS(parse_sheaf_json(float_text, carrier, false), Error);
  const CellSheaf float_sheaf = parse_sheaf_json(float_text, carrier, true);
  CHECK(float_sheaf.map_at_tail(0)(0, 0) == half);  // 0.5 converts exactly

  CHECK_THROWS_AS(parse_sheaf_json(R"({"convention": "nope"})", carrier, false), Error);
}

TEST_CASE("metric and transport files") {
  const auto entries = parse_metric_json(
      R"({"lambda": [{"edge_out": "e:fwd", "edge_back": "e:bwd", "value": "1"}]})", false);
  REQUIRE(entries.size() == 1);
  CHECK(entries[0].value == Rational(1));
  CHECK_THROWS_AS(parse_metric_json(R"({"lambdas": []})", false), Error);

  const Digraph carrier = parse_graph_json(kThetaP2).as_directed();
  const Transport transport = parse_transport_json(
      R"({"rank": 1, "edges": [
        {"id": "e:fwd", "matrix": [["2"]]},
        {"id": "e:bwd", "matrix": [["1/2"]]}
      ]})",
      carrier, false);
  CHECK(transport.rank == 1);
  CHECK(transport.edge_maps[0] == RatMatrix{{Rational(2)}});

  CHECK_THROWS_AS(parse_transport_json(R"({"rank": 1, "edges": []})", carrier, false),
                  Error);
  CHECK_THROWS_AS(parse_transport_json(
                      R"({"rank": 1, "edges": [
                        {"id": "e:fwd", "matrix": [["2"]]},
                        {"id": "e:bwd", "matrix": [["2"]]},
                        {"id": "ghost", "matrix": [["2"]]}
                      ]})",
                      carrier, false),
                  Error);
}

TEST_CASE("matrix serialisation") {
  RatMatrix m{{Rational(1), Rational(-1) / 2}};
  const auto doc = matrix_to_json(m);
  CHECK(doc["rows"] == 1);
  CHECK(doc["cols"] == 2);
  CHECK(doc["entries"][0][0] == "1");
  CHECK(doc["entries"][0][1] == "-1/2");
  CHECK(matrix_to_csv(m) == "1,-1/2\n");

  RealMatrix r{{0.1, 2.0}};
  const std::string csv = matrix_to_csv(r);
  CHECK(csv.find("0.1000000000000000") != std::string::npos);

  BlockMatrix<Rational> block;
  block.matrix = m;
  block.block_ids = {"v"};
  block.offsets = {0};
  CHECK(block_matrix_to_json(block)["blocks"]["v"] == 0);
}

TEST_CASE("theorem reports serialise") {
  TheoremReport report;
  report.sign = 1;
  report.fitted_c = 1.0;
  report.pass = true;
  const auto doc = report_to_json(report);
  CHECK(doc["sign"] == 1);
  CHECK(doc["pass"] == true);
}
