#pragma once

#include <json.hpp>

#include <optional>
#include <string>

#include "sheafcalc/cech.hpp"
#include "sheafcalc/connection.hpp"
#include "sheafcalc/fodc.hpp"
#include "sheafcalc/graph.hpp"
#include "sheafcalc/sheaf.hpp"

namespace sheafcalc {

/// Parsed graph file. Directed files load with no loop synthesis; calculus
/// commands re-apply the one-loop-per-vertex policy themselves. Self-loops
/// are never listed in files.
struct ParsedGraph {
  bool directed = false;
  std::optional<Digraph> digraph;
  std::optional<UndirectedGraph> undirected;

  /// Directed view: the digraph itself, or the orientation of an undirected
  /// graph by endpoint order.
  Digraph as_directed() const;
  /// Bidirected carrier: the digraph checked bidirected, or the double of an
  /// undirected graph.
  Digraph as_bidirected() const;
};

ParsedGraph parse_graph_json(const std::string& text);
ParsedGraph load_graph_file(const std::string& path);

CellSheaf parse_sheaf_json(const std::string& text, const Digraph& carrier,
                           bool allow_floats);
CellSheaf load_sheaf_file(const std::string& path, const Digraph& carrier,
                          bool allow_floats);

std::vector<MetricEntry> parse_metric_json(const std::string& text, bool allow_floats);
std::vector<MetricEntry> load_metric_file(const std::string& path, bool allow_floats);

Transport parse_transport_json(const std::string& text, const Digraph& carrier,
                               bool allow_floats);
Transport load_transport_file(const std::string& path, const Digraph& carrier,
                              bool allow_floats);

/// {"rows", "cols", "entries"} with rationals as strings; block offsets
/// emitted alongside under "blocks" when present.
nlohmann::json matrix_to_json(const RatMatrix& m);
nlohmann::json matrix_to_json(const RealMatrix& m);
nlohmann::json block_matrix_to_json(const BlockMatrix<Rational>& m);
nlohmann::json block_matrix_to_json(const BlockMatrix<double>& m);

/// CSV rows; exact entries as p/q strings, float entries at 17 significant
/// digits so they round-trip.
std::string matrix_to_csv(const RatMatrix& m);
std::string matrix_to_csv(const RealMatrix& m);

std::string format_double(double v);

nlohmann::json report_to_json(const TheoremReport& report);

}  // namespace sheafcalc
