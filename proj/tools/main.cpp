// Command-line front end: ingest graph/sheaf/metric/transport JSON, run a
// computation, emit matrices, spectra, dimensions, or theorem reports.
//
// Exit codes: 0 success, 2 parse/validation, 3 precondition, 4 numerical
// non-convergence.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "sheafcalc/connection.hpp"
#include "sheafcalc/io.hpp"
#include "sheafcalc/linalg.hpp"
#include "sheafcalc/random_gen.hpp"

using namespace sheafcalc;
using nlohmann::json;

namespace {

struct JobConfig {
  std::string graph_path;
  std::string sheaf_path;
  std::string metric_path;
  std::string transport_path;
  std::string matrix_path;
  std::string out_path;
  std::string backend = "exact";
  std::string format = "json";
  std::string kind;
  std::string mask = "none";
  std::string exclude = "none";
  std::uint64_t seed = 0;
  double tol = 1e-9;
  int trials = 0;
  int rank = 2;

  bool exact() const { return backend == "exact"; }
  bool floats_allowed() const { return backend == "float"; }
};

void add_common_flags(CLI::App* cmd, JobConfig* config) {
  cmd->add_option("--graph", config->graph_path, "graph JSON path");
  cmd->add_option("--sheaf", config->sheaf_path, "sheaf JSON path");
  cmd->add_option("--metric", config->metric_path, "metric JSON path");
  cmd->add_option("--transport", config->transport_path, "transport JSON path");
  cmd->add_option("--backend", config->backend, "exact|float")
      ->check(CLI::IsMember({"exact", "float"}));
  cmd->add_option("--format", config->format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--seed", config->seed, "RNG seed (default 0)");
  cmd->add_option("--tol", config->tol, "float tolerance (default 1e-9)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", config->out_path, "output path (default stdout)");
}

void emit(const JobConfig& config, const std::string& text) {
  if (config.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(config.out_path, std::ios::binary);
  if (!out) fail(ErrorCode::UsageError, "cannot write '" + config.out_path + "'");
  out << text;
}

std::string render_json(const json& doc) { return doc.dump(2) + "\n"; }

ParsedGraph require_graph(const JobConfig& config) {
  if (config.graph_path.empty()) fail(ErrorCode::UsageError, "--graph is required");
  return load_graph_file(config.graph_path);
}

CellSheaf require_sheaf(const JobConfig& config, const Digraph& carrier) {
  if (config.sheaf_path.empty()) fail(ErrorCode::UsageError, "--sheaf is required");
  return load_sheaf_file(config.sheaf_path, carrier, config.floats_allowed());
}

/// Calculus carrier: the graph under the one-loop-per-vertex policy.
Digraph calculus_carrier(const ParsedGraph& parsed) {
  return with_loop_policy(parsed.directed ? *parsed.digraph
                                          : to_bidirected(*parsed.undirected),
                          LoopPolicy::OnePerVertex);
}

Fodc fodc_for(const Digraph& carrier) {
  if (carrier.is_simple_with_loops()) return fodc_from_digraph(carrier);
  return fodc_from_etale_cover(carrier, etale_directed_cover(carrier));
}

std::string render_matrix(const JobConfig& config, const RatMatrix& exact,
                          const std::vector<std::string>& block_ids,
                          const std::vector<std::size_t>& offsets) {
  if (config.exact()) {
    if (config.format == "csv") return matrix_to_csv(exact);
    json doc = matrix_to_json(exact);
    if (!block_ids.empty()) {
      json blocks = json::object();
      for (std::size_t i = 0; i < block_ids.size(); ++i) blocks[block_ids[i]] = offsets[i];
      doc["blocks"] = std::move(blocks);
    }
    return render_json(doc);
  }
  const RealMatrix real = matrix_cast<double>(exact);
  if (config.format == "csv") return matrix_to_csv(real);
  json doc = matrix_to_json(real);
  if (!block_ids.empty()) {
    json blocks = json::object();
    for (std::size_t i = 0; i < block_ids.size(); ++i) blocks[block_ids[i]] = offsets[i];
    doc["blocks"] = std::move(blocks);
  }
  return render_json(doc);
}

int run_info(const JobConfig& config) {
  const ParsedGraph parsed = require_graph(config);
  const Digraph directed = parsed.as_directed();
  const Digraph carrier = calculus_carrier(parsed);
  json doc{{"directed", parsed.directed},
           {"vertices", directed.vertex_count()},
           {"edges", parsed.directed ? directed.edge_count()
                                     : parsed.undirected->edge_count()},
           {"components", directed.component_count()},
           {"bidirected", parsed.directed ? is_bidirected(directed) : true},
           {"self_loops_under_policy", carrier.edge_count() - carrier.non_loop_edges().size()},
           {"triangular_cliques", triangular_cliques(carrier).size()}};
  emit(config, render_json(doc));
  return 0;
}

int run_fodc(const JobConfig& config) {
  const ParsedGraph parsed = require_graph(config);
  const Digraph carrier = calculus_carrier(parsed);
  const Fodc fodc = fodc_for(carrier);
  const RatMatrix d = d_matrix<Rational>(fodc);
  if (config.format == "csv") {
    emit(config, config.exact() ? matrix_to_csv(d) : matrix_to_csv(matrix_cast<double>(d)));
    return 0;
  }
  json doc{{"basis", fodc.basis},
           {"vertices", carrier.vertex_ids()},
           {"components", fodc.cover.components.size()},
           {"d", config.exact() ? matrix_to_json(d) : matrix_to_json(matrix_cast<double>(d))}};
  json theta = json::array();
  for (const auto& c : theta_form<Rational>(fodc))
    theta.push_back(rational_to_string(c));
  doc["theta"] = std::move(theta);
  emit(config, render_json(doc));
  return 0;
}

int run_homology(const JobConfig& config) {
  const ParsedGraph parsed = require_graph(config);
  const Digraph carrier = parsed.as_directed();
  const CellSheaf sheaf = require_sheaf(config, carrier);
  const CohomologyDims dims = cohomology_dims(sheaf);
  json doc{{"h0", dims.h0}, {"h1", dims.h1}, {"euler", euler_characteristic(sheaf)}};
  emit(config, render_json(doc));
  return 0;
}

RatMatrix laplacian_job(const JobConfig& config, std::vector<std::string>* block_ids,
                        std::vector<std::size_t>* offsets) {
  if (config.kind == "classical") {
    const ParsedGraph parsed = require_graph(config);
    if (parsed.directed)
      fail(ErrorCode::UsageError, "classical Laplacian expects an undirected graph");
    RatMatrix lap = classical_laplacian(*parsed.undirected);
    *block_ids = parsed.undirected->vertex_ids();
    for (std::size_t v = 0; v < lap.rows(); ++v) offsets->push_back(v);
    return lap;
  }
  if (config.kind == "sheaf" || config.kind == "deltaF" || config.kind == "cech" ||
      config.kind == "directed") {
    const ParsedGraph parsed = require_graph(config);
    const Digraph carrier = parsed.as_directed();
    const CellSheaf sheaf = require_sheaf(config, carrier);
    BlockMatrix<Rational> result;
    if (config.kind == "sheaf") {
      result = sheaf_laplacian_LF<Rational>(sheaf);
    } else if (config.kind == "deltaF") {
      result = sheaf_laplacian_deltaF<Rational>(sheaf);
    } else if (config.kind == "cech") {
      result = cech_laplacian<Rational>(adjoint_pair(sheaf));
    } else {
      DirectionMask mask = DirectionMask::None;
      if (config.mask == "head") mask = DirectionMask::HeadZero;
      else if (config.mask == "tail") mask = DirectionMask::TailZero;
      else if (config.mask != "none") fail(ErrorCode::UsageError, "--mask must be head|tail|none");
      result = directed_laplacian<Rational>(adjoint_pair(sheaf), mask);
    }
    *block_ids = result.block_ids;
    *offsets = result.offsets;
    return result.matrix;
  }
  if (config.kind == "theta") {
    if (config.metric_path.empty())
      fail(ErrorCode::UsageError, "laplacian --kind theta needs --metric");
    const ParsedGraph parsed = require_graph(config);
    const Digraph carrier = calculus_carrier(parsed);
    const Fodc fodc = fodc_for(carrier);
    const Metric metric = quantum_metric(
        fodc, load_metric_file(config.metric_path, config.floats_allowed()));
    RatMatrix lap = graph_laplacians<Rational>(fodc, metric).delta_theta;
    *block_ids = carrier.vertex_ids();
    for (std::size_t v = 0; v < lap.rows(); ++v) offsets->push_back(v);
    return lap;
  }
  if (config.kind == "connection" || config.kind == "bochner") {
    const ParsedGraph parsed = require_graph(config);
    const Digraph carrier = calculus_carrier(parsed);
    if (!carrier.is_simple_with_loops())
      fail(ErrorCode::PreconditionFailed, "connection Laplacians need a simple carrier");
    if (config.transport_path.empty())
      fail(ErrorCode::UsageError, "this kind needs --transport");
    const Fodc fodc = fodc_from_digraph(carrier);
    const Transport transport =
        load_transport_file(config.transport_path, carrier, config.floats_allowed());
    const ConnectionForms forms = connection_from_transport(fodc, transport);
    BlockMatrix<Rational> result;
    if (config.kind == "bochner") {
      result = bochner_laplacian<Rational>(fodc, forms);
    } else {
      if (config.metric_path.empty())
        fail(ErrorCode::UsageError, "laplacian --kind connection needs --metric");
      const Metric metric = quantum_metric(
          fodc, load_metric_file(config.metric_path, config.floats_allowed()));
      result = connection_laplacian<Rational>(fodc, metric, forms);
    }
    *block_ids = result.block_ids;
    *offsets = result.offsets;
    return result.matrix;
  }
  fail(ErrorCode::UsageError, "unknown laplacian kind '" + config.kind + "'");
}

int run_laplacian(const JobConfig& config) {
  std::vector<std::string> block_ids;
  std::vector<std::size_t> offsets;
  const RatMatrix lap = laplacian_job(config, &block_ids, &offsets);
  emit(config, render_matrix(config, lap, block_ids, offsets));
  return 0;
}

int run_spectrum(const JobConfig& config) {
  RealMatrix m;
  if (!config.matrix_path.empty()) {
    std::ifstream in(config.matrix_path, std::ios::binary);
    if (!in) fail(ErrorCode::ParseError, "cannot open '" + config.matrix_path + "'");
    json doc;
    try {
      in >> doc;
    } catch (const json::parse_error& e) {
      fail(ErrorCode::ParseError, e.what());
    }
    const auto& entries = doc.at("entries");
    m = RealMatrix(doc.at("rows").get<std::size_t>(), doc.at("cols").get<std::size_t>());
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) {
        const auto& entry = entries.at(i).at(j);
        m(i, j) = entry.is_string()
                      ? rational_to_double(rational_from_string(entry.get<std::string>()))
                      : entry.get<double>();
      }
  } else {
    if (config.kind.empty())
      fail(ErrorCode::UsageError, "spectrum needs --matrix or a laplacian --kind");
    std::vector<std::string> ids;
    std::vector<std::size_t> offsets;
    m = matrix_cast<double>(laplacian_job(config, &ids, &offsets));
  }
  const auto eigs = spectrum(m);
  std::string csv;
  for (std::size_t i = 0; i < eigs.size(); ++i) {
    if (i) csv += ',';
    csv += format_double(eigs[i].real());
    if (eigs[i].imag() != 0.0) {
      csv += eigs[i].imag() > 0 ? "+" : "-";
      csv += format_double(std::abs(eigs[i].imag())) + "i";
    }
  }
  csv += '\n';
  emit(config, csv);
  return 0;
}

std::vector<TriangularClique> excluded_set(const std::string& name, const Digraph& carrier) {
  const auto all = triangular_cliques(carrier);
  std::vector<TriangularClique> out;
  if (name == "none") return out;
  for (const auto& clique : all) {
    const bool is_return = clique.x == clique.z;
    if (name == "all" || (name == "return" && is_return) ||
        (name == "distinct" && !is_return))
      out.push_back(clique);
  }
  if (name != "all" && name != "return" && name != "distinct")
    fail(ErrorCode::UsageError, "--exclude must be none|return|distinct|all");
  return out;
}

int run_curvature(const JobConfig& config) {
  const ParsedGraph parsed = require_graph(config);
  const Digraph carrier = calculus_carrier(parsed);
  if (config.transport_path.empty())
    fail(ErrorCode::UsageError, "curvature needs --transport");
  const Transport transport =
      load_transport_file(config.transport_path, carrier, config.floats_allowed());
  const auto excluded = excluded_set(config.exclude, carrier);
  const Curvature curv = curvature(carrier, excluded, transport);

  json cliques = json::array();
  for (std::size_t i = 0; i < curv.cliques.size(); ++i) {
    const auto& c = curv.cliques[i];
    json entry{{"x", c.x}, {"y", c.y}, {"z", c.z}, {"flat", curv.defects[i].is_zero()}};
    entry["defect"] = config.exact()
                          ? matrix_to_json(curv.defects[i])
                          : matrix_to_json(matrix_cast<double>(curv.defects[i]));
    cliques.push_back(std::move(entry));
  }
  json doc{{"flat", curv.is_flat()}, {"cliques", std::move(cliques)}};
  emit(config, render_json(doc));
  return 0;
}

int run_check_theorem5(const JobConfig& config) {
  const ParsedGraph parsed = require_graph(config);
  const Backend backend = config.exact() ? Backend::Exact : Backend::Float;

  if (!config.sheaf_path.empty()) {
    const Digraph carrier = parsed.as_bidirected();
    const CellSheaf sheaf = require_sheaf(config, carrier);
    const TheoremReport report = verify_theorem5(sheaf, backend, config.tol);
    emit(config, render_json(report_to_json(report)));
    return report.pass ? 0 : 1;
  }

  // No sheaf: run seeded random O(rank)-bundle trials over the graph.
  if (config.trials <= 0)
    fail(ErrorCode::UsageError, "check-theorem5 needs --sheaf or --trials N");
  if (parsed.directed)
    fail(ErrorCode::UsageError, "random trials need an undirected base graph");
  bool all_pass = true;
  std::optional<double> fitted;
  double worst_a = 0.0, worst_b = 0.0;
  int sign = 0;
  for (int trial = 0; trial < config.trials; ++trial) {
    Rng rng = seeded_rng(config.seed + static_cast<std::uint64_t>(trial));
    const CellSheaf bundle = random_pushed_bundle(
        rng, *parsed.undirected, config.rank,
        config.exact() ? OrthogonalKind::SignedPermutation : OrthogonalKind::FloatRotation);
    const TheoremReport report = verify_theorem5(bundle, backend, config.tol);
    all_pass = all_pass && report.pass;
    if (fitted && *fitted != report.fitted_c) all_pass = false;
    fitted = report.fitted_c;
    sign = report.sign;
    worst_a = std::max(worst_a, report.max_abs_diff_a);
    worst_b = std::max(worst_b, report.max_abs_diff_b);
  }
  json doc{{"trials", config.trials},
           {"sign", sign},
           {"fitted_c", fitted ? *fitted : 0.0},
           {"max_abs_diff_a", worst_a},
           {"max_abs_diff_b", worst_b},
           {"pass", all_pass}};
  emit(config, render_json(doc));
  return all_pass ? 0 : 1;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::PreconditionFailed:
    case ErrorCode::NotInvertible:
    case ErrorCode::RankMismatch:
      return 3;
    case ErrorCode::NonConvergence:
      return 4;
    default:
      return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sheaf and differential-calculus operators on finite multigraphs"};
  app.require_subcommand(1);
  JobConfig config;

  CLI::App* info = app.add_subcommand("info", "validated graph statistics");
  add_common_flags(info, &config);

  CLI::App* homology = app.add_subcommand("homology", "h0/h1/euler of a sheaf");
  add_common_flags(homology, &config);

  CLI::App* fodc_cmd = app.add_subcommand(
      "fodc", "first-order calculus data: one-form basis, d matrix, theta");
  add_common_flags(fodc_cmd, &config);

  CLI::App* laplacian = app.add_subcommand("laplacian", "assemble a Laplacian matrix");
  add_common_flags(laplacian, &config);
  laplacian->add_option("--kind", config.kind,
                        "sheaf|deltaF|cech|classical|theta|connection|bochner|directed")
      ->required();
  laplacian->add_option("--mask", config.mask, "directed kind: head|tail|none");

  CLI::App* spectrum_cmd = app.add_subcommand("spectrum", "sorted eigenvalues, CSV");
  add_common_flags(spectrum_cmd, &config);
  spectrum_cmd->add_option("--kind", config.kind, "laplacian kind to assemble first");
  spectrum_cmd->add_option("--mask", config.mask, "directed kind: head|tail|none");
  spectrum_cmd->add_option("--matrix", config.matrix_path, "matrix JSON to analyse");

  CLI::App* curvature_cmd =
      app.add_subcommand("curvature", "per-clique transport defects and flatness");
  add_common_flags(curvature_cmd, &config);
  curvature_cmd->add_option("--exclude", config.exclude, "none|return|distinct|all");

  CLI::App* theorem = app.add_subcommand(
      "check-theorem5", "compare connection/Bochner Laplacians with sheaf Laplacians");
  add_common_flags(theorem, &config);
  theorem->add_option("--trials", config.trials, "random bundle trials when no --sheaf");
  theorem->add_option("--rank", config.rank, "bundle rank for random trials")
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (info->parsed()) return run_info(config);
    if (homology->parsed()) return run_homology(config);
    if (fodc_cmd->parsed()) return run_fodc(config);
    if (laplacian->parsed()) return run_laplacian(config);
    if (spectrum_cmd->parsed()) return run_spectrum(config);
    if (curvature_cmd->parsed()) return run_curvature(config);
    if (theorem->parsed()) return run_check_theorem5(config);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
