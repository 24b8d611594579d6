#include "sheafcalc/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace sheafcalc {

using nlohmann::json;

namespace {

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::ParseError, e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::ParseError, "cannot open '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void reject_unknown_fields(const json& obj, std::initializer_list<const char*> allowed,
                           const char* where) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* name : allowed)
      if (key == name) ok = true;
    if (!ok)
      fail(ErrorCode::ParseError,
           std::string("unknown field '") + key + "' in " + where);
  }
}

const json& require(const json& obj, const char* key, const char* where) {
  auto it = obj.find(key);
  if (it == obj.end())
    fail(ErrorCode::ParseError, std::string("missing field '") + key + "' in " + where);
  return *it;
}

Rational parse_scalar(const json& value, bool allow_floats) {
  if (value.is_string()) return rational_from_string(value.get<std::string>());
  if (value.is_number_integer()) return Rational(value.get<long>());
  if (value.is_number_float()) {
    if (!allow_floats)
      fail(ErrorCode::ParseError, "float entry rejected by the exact backend");
    return rational_from_double(value.get<double>());
  }
  fail(ErrorCode::ParseError, "matrix entry must be a string or number");
}

RatMatrix parse_matrix(const json& value, bool allow_floats) {
  if (!value.is_array()) fail(ErrorCode::ParseError, "matrix must be an array of rows");
  const std::size_t rows = value.size();
  std::size_t cols = 0;
  if (rows > 0) {
    if (!value[0].is_array()) fail(ErrorCode::ParseError, "matrix row must be an array");
    cols = value[0].size();
  }
  RatMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!value[i].is_array() || value[i].size() != cols)
      fail(ErrorCode::ParseError, "ragged matrix");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = parse_scalar(value[i][j], allow_floats);
  }
  return m;
}

}  // namespace

Digraph ParsedGraph::as_directed() const {
  if (directed) return *digraph;
  return orient(*undirected);
}

Digraph ParsedGraph::as_bidirected() const {
  if (!directed) return to_bidirected(*undirected);
  if (!is_bidirected(*digraph))
    fail(ErrorCode::PreconditionFailed, "graph is not bidirected");
  return *digraph;
}

ParsedGraph parse_graph_json(const std::string& text) {
  const json doc = parse_text(text);
  if (!doc.is_object()) fail(ErrorCode::ParseError, "graph file must be an object");
  reject_unknown_fields(doc, {"directed", "vertices", "edges"}, "graph");
  const json& directed = require(doc, "directed", "graph");
  const json& vertices = require(doc, "vertices", "graph");
  const json& edges = require(doc, "edges", "graph");
  if (!directed.is_boolean()) fail(ErrorCode::ParseError, "'directed' must be a bool");
  if (!vertices.is_array()) fail(ErrorCode::ParseError, "'vertices' must be an array");
  if (!edges.is_array()) fail(ErrorCode::ParseError, "'edges' must be an array");

  std::vector<VertexId> vertex_ids;
  for (const auto& v : vertices) {
    if (!v.is_string()) fail(ErrorCode::ParseError, "vertex ids must be strings");
    vertex_ids.push_back(v.get<std::string>());
  }

  ParsedGraph out;
  out.directed = directed.get<bool>();
  if (out.directed) {
    std::vector<EdgeSpec> specs;
    for (const auto& e : edges) {
      if (!e.is_object()) fail(ErrorCode::ParseError, "edge must be an object");
      reject_unknown_fields(e, {"id", "tail", "head"}, "edge");
      EdgeSpec spec{require(e, "id", "edge").get<std::string>(),
                    require(e, "tail", "edge").get<std::string>(),
                    require(e, "head", "edge").get<std::string>()};
      if (spec.tail == spec.head)
        fail(ErrorCode::ExtraSelfLoop,
             "files never list self-loops ('" + spec.id + "'); they are synthesised");
      specs.push_back(std::move(spec));
    }
    out.digraph = Digraph::build(vertex_ids, specs, LoopPolicy::None);
  } else {
    std::vector<UndirectedEdgeSpec> specs;
    for (const auto& e : edges) {
      if (!e.is_object()) fail(ErrorCode::ParseError, "edge must be an object");
      reject_unknown_fields(e, {"id", "a", "b"}, "edge");
      UndirectedEdgeSpec spec{require(e, "id", "edge").get<std::string>(),
                              require(e, "a", "edge").get<std::string>(),
                              require(e, "b", "edge").get<std::string>()};
      if (spec.a == spec.b)
        fail(ErrorCode::ExtraSelfLoop,
             "files never list self-loops ('" + spec.id + "'); they are synthesised");
      specs.push_back(std::move(spec));
    }
    out.undirected = UndirectedGraph::build(vertex_ids, specs);
  }
  return out;
}

ParsedGraph load_graph_file(const std::string& path) {
  return parse_graph_json(read_file(path));
}

CellSheaf parse_sheaf_json(const std::string& text, const Digraph& carrier,
                           bool allow_floats) {
  const json doc = parse_text(text);
  if (!doc.is_object()) fail(ErrorCode::ParseError, "sheaf file must be an object");
  reject_unknown_fields(doc, {"convention", "vertex_dims", "edge_dims", "maps"}, "sheaf");
  const std::string conv_name = require(doc, "convention", "sheaf").get<std::string>();
  Convention convention;
  if (conv_name == "vertex_to_edge")
    convention = Convention::VertexToEdge;
  else if (conv_name == "edge_to_vertex")
    convention = Convention::EdgeToVertex;
  else
    fail(ErrorCode::ParseError, "convention must be vertex_to_edge or edge_to_vertex");

  const json& vdims = require(doc, "vertex_dims", "sheaf");
  const json& edims = require(doc, "edge_dims", "sheaf");
  if (!vdims.is_object() || !edims.is_object())
    fail(ErrorCode::ParseError, "dimension tables must be objects");

  std::vector<int> vertex_dims(carrier.vertex_count(), -1);
  for (const auto& [key, value] : vdims.items()) {
    if (!value.is_number_integer()) fail(ErrorCode::ParseError, "dims must be integers");
    vertex_dims[carrier.vertex_index(key)] = value.get<int>();
  }
  std::vector<int> edge_dims(carrier.edge_count(), -1);
  for (const auto& [key, value] : edims.items()) {
    if (!value.is_number_integer()) fail(ErrorCode::ParseError, "dims must be integers");
    edge_dims[carrier.edge_index(key)] = value.get<int>();
  }
  for (std::size_t v = 0; v < carrier.vertex_count(); ++v)
    if (vertex_dims[v] < 0)
      fail(ErrorCode::ParseError, "missing dim for vertex '" + carrier.vertex_ids()[v] + "'");
  for (std::size_t e = 0; e < carrier.edge_count(); ++e)
    if (edge_dims[e] < 0)
      fail(ErrorCode::ParseError, "missing dim for edge '" + carrier.edge(e).id + "'");

  std::vector<IncidenceMapSpec> maps;
  for (const auto& entry : require(doc, "maps", "sheaf")) {
    if (!entry.is_object()) fail(ErrorCode::ParseError, "map entry must be an object");
    reject_unknown_fields(entry, {"edge", "vertex", "matrix"}, "map entry");
    maps.push_back({require(entry, "edge", "map").get<std::string>(),
                    require(entry, "vertex", "map").get<std::string>(),
                    parse_matrix(require(entry, "matrix", "map"), allow_floats)});
  }
  return CellSheaf::build(carrier, convention, vertex_dims, edge_dims, maps);
}

CellSheaf load_sheaf_file(const std::string& path, const Digraph& carrier,
                          bool allow_floats) {
  return parse_sheaf_json(read_file(path), carrier, allow_floats);
}

std::vector<MetricEntry> parse_metric_json(const std::string& text, bool allow_floats) {
  const json doc = parse_text(text);
  if (!doc.is_object()) fail(ErrorCode::ParseError, "metric file must be an object");
  reject_unknown_fields(doc, {"lambda"}, "metric");
  std::vector<MetricEntry> entries;
  for (const auto& entry : require(doc, "lambda", "metric")) {
    if (!entry.is_object()) fail(ErrorCode::ParseError, "lambda entry must be an object");
    reject_unknown_fields(entry, {"edge_out", "edge_back", "value"}, "lambda entry");
    entries.push_back({require(entry, "edge_out", "lambda").get<std::string>(),
                       require(entry, "edge_back", "lambda").get<std::string>(),
                       parse_scalar(require(entry, "value", "lambda"), allow_floats)});
  }
  return entries;
}

std::vector<MetricEntry> load_metric_file(const std::string& path, bool allow_floats) {
  return parse_metric_json(read_file(path), allow_floats);
}

Transport parse_transport_json(const std::string& text, const Digraph& carrier,
                               bool allow_floats) {
  const json doc = parse_text(text);
  if (!doc.is_object()) fail(ErrorCode::ParseError, "transport file must be an object");
  reject_unknown_fields(doc, {"rank", "edges"}, "transport");
  Transport transport;
  transport.carrier = carrier;
  transport.rank = require(doc, "rank", "transport").get<int>();
  if (transport.rank < 0) fail(ErrorCode::ParseError, "rank must be non-negative");

  std::map<EdgeId, RatMatrix> by_id;
  for (const auto& entry : require(doc, "edges", "transport")) {
    if (!entry.is_object()) fail(ErrorCode::ParseError, "edge entry must be an object");
    reject_unknown_fields(entry, {"id", "matrix"}, "transport edge");
    const EdgeId id = require(entry, "id", "transport edge").get<std::string>();
    RatMatrix m = parse_matrix(require(entry, "matrix", "transport edge"), allow_floats);
    if (m.rows() != static_cast<std::size_t>(transport.rank) ||
        m.cols() != static_cast<std::size_t>(transport.rank))
      fail(ErrorCode::ShapeMismatch, "transport matrix for '" + id + "'");
    if (!by_id.emplace(id, std::move(m)).second)
      fail(ErrorCode::DuplicateId, "transport edge '" + id + "'");
  }
  for (std::size_t e : carrier.non_loop_edges()) {
    auto it = by_id.find(carrier.edge(e).id);
    if (it == by_id.end())
      fail(ErrorCode::ParseError, "missing transport for edge '" + carrier.edge(e).id + "'");
    transport.edge_maps.push_back(it->second);
    by_id.erase(it);
  }
  if (!by_id.empty())
    fail(ErrorCode::UnknownEdge, "transport lists unknown edge '" + by_id.begin()->first + "'");
  return transport;
}

Transport load_transport_file(const std::string& path, const Digraph& carrier,
                              bool allow_floats) {
  return parse_transport_json(read_file(path), carrier, allow_floats);
}

std::string format_double(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

json matrix_to_json(const RatMatrix& m) {
  json entries = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(rational_to_string(m(i, j)));
    entries.push_back(std::move(row));
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

json matrix_to_json(const RealMatrix& m) {
  json entries = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    entries.push_back(std::move(row));
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

namespace {

template <typename T>
json block_matrix_to_json_impl(const BlockMatrix<T>& m) {
  json out = matrix_to_json(m.matrix);
  json blocks = json::object();
  for (std::size_t i = 0; i < m.block_ids.size(); ++i)
    blocks[m.block_ids[i]] = m.offsets[i];
  out["blocks"] = std::move(blocks);
  return out;
}

}  // namespace

json block_matrix_to_json(const BlockMatrix<Rational>& m) {
  return block_matrix_to_json_impl(m);
}
json block_matrix_to_json(const BlockMatrix<double>& m) {
  return block_matrix_to_json_impl(m);
}

std::string matrix_to_csv(const RatMatrix& m) {
  std::ostringstream out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << rational_to_string(m(i, j));
    }
    out << '\n';
  }
  return out.str();
}

std::string matrix_to_csv(const RealMatrix& m) {
  std::ostringstream out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
  return out.str();
}

json report_to_json(const TheoremReport& report) {
  return json{{"sign", report.sign},
              {"fitted_c", report.fitted_c},
              {"max_abs_diff_a", report.max_abs_diff_a},
              {"max_abs_diff_b", report.max_abs_diff_b},
              {"parallel_transport", report.parallel},
              {"orthogonal", report.orthogonal},
              {"pass", report.pass}};
}

}  // namespace sheafcalc
