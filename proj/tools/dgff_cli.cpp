// Command-line front end: validate inputs, build foliations and operator
// matrices, sample fields, and run the verification ladder.
//
// Exit codes: 0 success, 1 I/O error, 2 invalid graph or foliation input,
// 3 verification failed, 4 numerical failure (NotPD, NotPSD, NoConvergence),
// 5 argument out of range. Malformed command lines exit with CLI11's codes.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dgff/error.hpp"
#include "dgff/foliation.hpp"
#include "dgff/graph.hpp"
#include "dgff/graph_io.hpp"
#include "dgff/hadamard.hpp"
#include "dgff/linalg.hpp"
#include "dgff/operators.hpp"
#include "dgff/sampling.hpp"
#include "dgff/verify.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr int kExitIo = 1;
constexpr int kExitInput = 2;
constexpr int kExitVerifyFailed = 3;
constexpr int kExitNumerical = 4;
constexpr int kExitUsage = 5;

struct RunConfig {
  std::string graph;
  std::string foliation;
  std::string roots;
  std::optional<std::size_t> cluster;
  std::uint64_t seed = 42;
  std::size_t trials = 100000;
  double tol_exact = 1e-10;
  double z_max = 5.0;
  std::string out;
  std::string format;
  std::string tamper = "none";
  std::size_t n_samples = 1;
  bool skip_monte_carlo = false;
};

int exit_code_for(dgff::ErrorCode code) {
  switch (dgff::kind_of(code)) {
    case dgff::ErrorKind::Io: return kExitIo;
    case dgff::ErrorKind::Input: return kExitInput;
    case dgff::ErrorKind::Numerical: return kExitNumerical;
    case dgff::ErrorKind::Usage: return kExitUsage;
  }
  return kExitInput;
}

json error_json(const dgff::Error& e) {
  return {{"code", std::string(dgff::to_string(e.code()))}, {"message", e.what()}};
}

std::vector<std::string> split_roots(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

dgff::VertexSet resolve(const dgff::Graph& g, const std::vector<std::string>& ids) {
  dgff::VertexSet out;
  for (const auto& id : ids) out.push_back(g.index_of(id));
  return out;
}

/// Foliation layers as given, ids resolved but axioms unchecked.
std::vector<dgff::VertexSet> raw_layers(const dgff::Graph& g, const RunConfig& cfg) {
  if (!cfg.foliation.empty()) {
    std::vector<std::vector<std::string>> ids;
    try {
      ids = json::parse(dgff::read_file(cfg.foliation))
                .at("layers")
                .get<std::vector<std::vector<std::string>>>();
    } catch (const json::exception& e) {
      throw dgff::Error(dgff::ErrorCode::ParseError,
                        std::string("malformed foliation JSON: ") + e.what());
    }
    std::vector<dgff::VertexSet> layers;
    for (const auto& layer : ids) layers.push_back(resolve(g, layer));
    return layers;
  }
  return dgff::bfs_foliate(g, resolve(g, split_roots(cfg.roots))).layers();
}

dgff::Foliation load_foliation(const dgff::Graph& g, const RunConfig& cfg) {
  if (!cfg.foliation.empty()) return dgff::load_foliation(cfg.foliation, g);
  if (!cfg.roots.empty()) {
    return dgff::bfs_foliate(g, resolve(g, split_roots(cfg.roots)));
  }
  throw dgff::Error(dgff::ErrorCode::IndexOutOfRange,
                    "one of --foliation or --roots is required");
}

std::size_t cluster_index(const dgff::Foliation& f, const RunConfig& cfg) {
  const std::size_t n = cfg.cluster.value_or(f.top());
  if (n > f.top()) {
    throw dgff::Error(dgff::ErrorCode::IndexOutOfRange,
                      "--cluster " + std::to_string(n) + " exceeds top layer " +
                          std::to_string(f.top()));
  }
  return n;
}

std::vector<std::string> labels(const dgff::Graph& g, const dgff::VertexSet& set) {
  std::vector<std::string> out;
  for (const auto v : set) out.push_back(g.id(v));
  return out;
}

std::ofstream open_out(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) {
    throw dgff::Error(dgff::ErrorCode::IoError,
                      "cannot write '" + (dir / name).string() + "'");
  }
  return out;
}

void emit_matrix(std::ostream& out, const std::string& format, const dgff::Matrix& m,
                 const std::vector<std::string>& rows,
                 const std::vector<std::string>& cols) {
  if (format == "json") {
    json values = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
      values.push_back(std::vector<double>(m.row(i).begin(), m.row(i).end()));
    }
    out << json{{"schema", 1}, {"rows", rows}, {"cols", cols}, {"values", values}}.dump()
        << '\n';
  } else {
    dgff::write_matrix_csv(out, m, rows, cols);
  }
}

int cmd_validate(const RunConfig& cfg) {
  try {
    const auto g = dgff::load_graph(cfg.graph);
    json doc = {{"schema", 1},
                {"valid", true},
                {"vertices", g.vertex_count()},
                {"edges", g.edge_count()},
                {"exterior", g.exterior().size()}};
    if (!cfg.foliation.empty() || !cfg.roots.empty()) {
      doc["layers"] = load_foliation(g, cfg).layer_count();
    }
    std::cout << doc.dump() << '\n';
    return 0;
  } catch (const dgff::Error& e) {
    std::cout << json{{"schema", 1}, {"valid", false}, {"error", error_json(e)}}.dump()
              << '\n';
    return exit_code_for(e.code());
  }
}

int cmd_foliate(const RunConfig& cfg) {
  if (cfg.roots.empty()) {
    throw dgff::Error(dgff::ErrorCode::IndexOutOfRange, "foliate needs --roots");
  }
  const auto g = dgff::load_graph(cfg.graph);
  const auto f = dgff::bfs_foliate(g, resolve(g, split_roots(cfg.roots)));
  const auto text = dgff::foliation_to_json(g, f);
  if (!cfg.out.empty()) open_out(cfg.out, "foliation.json") << text << '\n';
  std::cout << text << '\n';
  return 0;
}

int cmd_green(const RunConfig& cfg) {
  const auto g = dgff::load_graph(cfg.graph);
  const auto f = load_foliation(g, cfg);
  const auto cluster = f.cluster(g, cluster_index(f, cfg));
  const auto k = dgff::green(g, cluster);
  const auto ids = labels(g, cluster.vertices);
  const std::string format = cfg.format.empty() ? "csv" : cfg.format;
  if (!cfg.out.empty()) {
    const std::string ext = format == "json" ? ".json" : ".csv";
    auto a = open_out(cfg.out, "green_normalized" + ext);
    emit_matrix(a, format, k.normalized, ids, ids);
    auto b = open_out(cfg.out, "green" + ext);
    emit_matrix(b, format, k.unnormalized, ids, ids);
  }
  emit_matrix(std::cout, format, k.normalized, ids, ids);
  return 0;
}

int cmd_poisson(const RunConfig& cfg) {
  const auto g = dgff::load_graph(cfg.graph);
  const auto f = load_foliation(g, cfg);
  const std::size_t n = cluster_index(f, cfg);
  const auto p = dgff::poisson(g, f.cluster(g, n), f.layer(n));
  const std::string format = cfg.format.empty() ? "csv" : cfg.format;
  if (!cfg.out.empty()) {
    auto out = open_out(cfg.out, format == "json" ? "poisson.json" : "poisson.csv");
    emit_matrix(out, format, p.values, labels(g, p.rows), labels(g, p.layer));
  }
  emit_matrix(std::cout, format, p.values, labels(g, p.rows), labels(g, p.layer));
  return 0;
}

int cmd_hadamard(const RunConfig& cfg) {
  const auto g = dgff::load_graph(cfg.graph);
  const auto f = load_foliation(g, cfg);
  const std::size_t n = cluster_index(f, cfg);
  const dgff::OperatorFamily ops(g, f);
  const dgff::HadamardFamily had(ops);
  const auto& q = had.q(n);
  const auto qqt = q.values * q.adjoint();
  const auto gram = dgff::dirichlet_gram(g, q);
  double variation = 0.0;
  for (std::size_t m = 1; m <= n; ++m) {
    variation = std::max(variation,
                         dgff::check_green_variation(ops.at(m - 1), ops.at(m)).residual);
  }
  const json summary = {
      {"schema", 1},
      {"cluster", n},
      {"identity_residual", dgff::hadamard_identity_residual(q, ops.at(n).green)},
      {"isometry_residual", dgff::isometry_residual(g, q)},
      {"variation_residual", variation}};
  const auto ids = labels(g, q.vertices);
  if (!cfg.out.empty()) {
    auto a = open_out(cfg.out, "q.csv");
    dgff::write_matrix_csv(a, q.values, ids, ids);
    auto b = open_out(cfg.out, "qqt.csv");
    dgff::write_matrix_csv(b, qqt, ids, ids);
    auto c = open_out(cfg.out, "gram.csv");
    dgff::write_matrix_csv(c, gram, ids, ids);
    open_out(cfg.out, "hadamard.json") << summary.dump(2) << '\n';
  }
  if (cfg.format == "csv") {
    dgff::write_matrix_csv(std::cout, q.values, ids, ids);
  } else {
    std::cout << summary.dump(2) << '\n';
  }
  return 0;
}

int cmd_sample(const RunConfig& cfg) {
  const auto g = dgff::load_graph(cfg.graph);
  const auto f = load_foliation(g, cfg);
  const std::size_t top = cluster_index(f, cfg);
  const dgff::OperatorFamily ops(g, f);
  const dgff::HadamardFamily had(ops);
  const auto& domain = ops.at(top).cluster.vertices;
  const fs::path dir = cfg.out.empty() ? fs::path(".") : fs::path(cfg.out);

  json files = json::array();
  for (std::size_t s = 0; s < cfg.n_samples; ++s) {
    const auto phi = dgff::sample_wnf(g.vertex_count(), domain, cfg.seed, s);
    std::vector<dgff::VertexVector> psi;
    for (std::size_t n = 0; n <= top; ++n) psi.push_back(dgff::grow_dgff(had, phi, n).values);

    char name[32];
    std::snprintf(name, sizeof name, "sample_%03zu.csv", s);
    auto out = open_out(dir, name);
    out << "vertex,layer";
    for (std::size_t n = 0; n <= top; ++n) out << ",psi_" << n;
    for (std::size_t n = 1; n <= top; ++n) out << ",inc_" << n;
    out << '\n';
    for (const auto v : domain) {
      out << g.id(v) << ',' << *f.layer_of(v);
      for (std::size_t n = 0; n <= top; ++n) out << ',' << dgff::format_real(psi[n][v]);
      for (std::size_t n = 1; n <= top; ++n) {
        out << ',' << dgff::format_real(psi[n][v] - psi[n - 1][v]);
      }
      out << '\n';
    }
    files.push_back(name);
  }
  const json manifest = {{"schema", 1},
                         {"graph", cfg.graph},
                         {"seed", cfg.seed},
                         {"n_samples", cfg.n_samples},
                         {"cluster", top},
                         {"generator", "splitmix64+box-muller, substream = vertex index, "
                                       "draw = sample index"},
                         {"files", files}};
  open_out(dir, "manifest.json") << manifest.dump(2) << '\n';
  std::cout << manifest.dump(2) << '\n';
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  if (cfg.foliation.empty() && cfg.roots.empty()) {
    throw dgff::Error(dgff::ErrorCode::IndexOutOfRange,
                      "one of --foliation or --roots is required");
  }
  const auto tamper = dgff::parse_tamper(cfg.tamper);
  if (!tamper) {
    throw dgff::Error(dgff::ErrorCode::IndexOutOfRange,
                      "unknown --tamper '" + cfg.tamper + "'");
  }
  const auto g = dgff::load_graph(cfg.graph);
  dgff::VerifyConfig vc;
  vc.tol_exact = cfg.tol_exact;
  vc.z_max = cfg.z_max;
  vc.trials = cfg.trials;
  vc.seed = cfg.seed;
  vc.monte_carlo = !cfg.skip_monte_carlo;
  vc.tamper = *tamper;
  const auto report = dgff::run_verification(g, raw_layers(g, cfg), vc);
  const auto text = dgff::to_json(report);
  if (!cfg.out.empty()) open_out(cfg.out, "verify.json") << text << '\n';
  std::cout << text << '\n';
  return report.all_passed() ? 0 : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Layer-by-layer discrete Gaussian free field toolkit"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_inputs = [&](CLI::App* sub, bool need_foliation) {
    sub->add_option("--graph", cfg.graph, "Graph file (.json or edge list)")
        ->required()
;
    auto* fol = sub->add_option("--foliation", cfg.foliation, "Foliation JSON file")
            ;
    auto* roots = sub->add_option("--roots", cfg.roots,
                                  "Comma-separated BFS roots (instead of --foliation)");
    fol->excludes(roots);
    if (need_foliation) {
      sub->add_option("--cluster", cfg.cluster, "Cluster index n (default: top layer)");
    }
  };

  auto* validate = app.add_subcommand("validate", "Validate a graph and optional foliation");
  add_inputs(validate, false);

  auto* foliate = app.add_subcommand("foliate", "Build a foliation by BFS from --roots");
  foliate->add_option("--graph", cfg.graph)->required();
  foliate->add_option("--roots", cfg.roots)->required();
  foliate->add_option("--out", cfg.out, "Output directory");

  auto* green = app.add_subcommand("green", "Emit the normalized Green matrix of a cluster");
  add_inputs(green, true);
  green->add_option("--out", cfg.out, "Output directory");
  green->add_option("--format", cfg.format)->check(CLI::IsMember({"json", "csv"}));

  auto* poisson = app.add_subcommand("poisson", "Emit the Poisson kernel of a cluster");
  add_inputs(poisson, true);
  poisson->add_option("--out", cfg.out, "Output directory");
  poisson->add_option("--format", cfg.format)->check(CLI::IsMember({"json", "csv"}));

  auto* hadamard = app.add_subcommand("hadamard", "Hadamard operator and residual summary");
  add_inputs(hadamard, true);
  hadamard->add_option("--out", cfg.out, "Output directory");
  hadamard->add_option("--format", cfg.format)->check(CLI::IsMember({"json", "csv"}));

  auto* sample = app.add_subcommand("sample", "Write seeded DGFF samples and increments");
  add_inputs(sample, true);
  sample->add_option("--seed", cfg.seed);
  sample->add_option("--n-samples", cfg.n_samples)->check(CLI::PositiveNumber);
  sample->add_option("--out", cfg.out, "Output directory (default: .)");
  sample->add_option("--format", cfg.format)->check(CLI::IsMember({"csv"}));

  auto* verify = app.add_subcommand("verify", "Run the full verification ladder");
  add_inputs(verify, false);
  verify->add_option("--seed", cfg.seed);
  verify->add_option("--trials", cfg.trials)->check(CLI::PositiveNumber);
  verify->add_option("--tol-exact", cfg.tol_exact)->check(CLI::PositiveNumber);
  verify->add_option("--z-max", cfg.z_max)->check(CLI::PositiveNumber);
  verify->add_option("--out", cfg.out, "Output directory");
  verify->add_option("--format", cfg.format)->check(CLI::IsMember({"json"}));
  verify->add_option("--tamper", cfg.tamper,
                     "Negative control: none, asymmetric-green, wrong-layer, "
                     "flip-conductance");
  verify->add_flag("--skip-monte-carlo", cfg.skip_monte_carlo,
                   "Run only the deterministic checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return cmd_validate(cfg);
    if (*foliate) return cmd_foliate(cfg);
    if (*green) return cmd_green(cfg);
    if (*poisson) return cmd_poisson(cfg);
    if (*hadamard) return cmd_hadamard(cfg);
    if (*sample) return cmd_sample(cfg);
    if (*verify) return cmd_verify(cfg);
  } catch (const dgff::Error& e) {
    std::cerr << json{{"schema", 1}, {"error", error_json(e)}}.dump() << '\n';
    return exit_code_for(e.code());
  }
  return 0;
}
