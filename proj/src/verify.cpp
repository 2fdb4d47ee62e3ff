#include "dgff/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>

#include <json.hpp>

#include "dgff/error.hpp"
#include "dgff/hadamard.hpp"
#include "dgff/linalg.hpp"
#include "dgff/operators.hpp"
#include "dgff/random.hpp"
#include "dgff/sampling.hpp"

namespace dgff {

namespace {

constexpr std::uint64_t kTestVectorSubstream = 4ull << 32;
constexpr std::uint64_t kEdgeFieldSubstream = 5ull << 32;

// Absolute bounds that do not scale with the exact-identity tolerance.
constexpr double kAdjointTol = 1e-12;
constexpr double kMonotoneTol = 1e-12;
constexpr double kInjectivityTol = 1e-8;
constexpr double kIncrementTol = 1e-12;
constexpr double kPythagorasTol = 1e-12;

bool within(double value, double threshold) {
  return std::isfinite(value) && value <= threshold;
}

std::string fmt(double v) { return format_real(v); }

VertexVector random_vector(std::size_t vertex_count, const VertexSet& support,
                           std::uint64_t seed, std::uint64_t which) {
  VertexVector f(vertex_count, 0.0);
  const GaussianStream stream(seed, kTestVectorSubstream + which);
  for (const auto v : support) f[v] = stream.normal(v);
  return f;
}

class Ladder {
 public:
  explicit Ladder(VerifyReport& report) : report_(report) {}

  void run(const std::string& name, const std::function<void(CheckResult&)>& body) {
    CheckResult r;
    r.name = name;
    const auto start = std::chrono::steady_clock::now();
    body(r);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                    .count();
    report_.checks.push_back(std::move(r));
  }

 private:
  VerifyReport& report_;
};

void tamper_green(OperatorFamily& ops) {
  for (std::size_t n = ops.size(); n-- > 0;) {
    auto& k = ops.mutable_at(n).green;
    const std::size_t m = k.vertices.size();
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        if (k.unnormalized(i, j) != 0.0) {
          k.unnormalized(i, j) *= 1.0 + 1e-6;
          return;
        }
      }
    }
  }
  throw Error(ErrorCode::IndexOutOfRange,
              "asymmetric-green tamper needs a cluster with a nonzero "
              "off-diagonal Green entry");
}

}  // namespace

std::string_view to_string(Tamper t) noexcept {
  switch (t) {
    case Tamper::None: return "none";
    case Tamper::AsymmetricGreen: return "asymmetric-green";
    case Tamper::WrongLayer: return "wrong-layer";
    case Tamper::FlipConductance: return "flip-conductance";
  }
  return "none";
}

std::optional<Tamper> parse_tamper(std::string_view name) noexcept {
  for (const auto t : {Tamper::None, Tamper::AsymmetricGreen, Tamper::WrongLayer,
                       Tamper::FlipConductance}) {
    if (to_string(t) == name) return t;
  }
  return std::nullopt;
}

bool VerifyReport::all_passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

std::optional<std::string> VerifyReport::first_failure() const {
  for (const auto& c : checks) {
    if (!c.passed) return c.name;
  }
  return std::nullopt;
}

const CheckResult* VerifyReport::find(std::string_view name) const noexcept {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {
      "graph",           "foliation",          "green_inverse",
      "green_symmetry",  "poisson",            "green_variation",
      "layer_sqrt",      "hadamard_identity",  "isometry",
      "hadamard_structure", "increment_identity", "dgff_covariance",
      "oracle_covariance", "oracle_agreement", "increment_independence",
      "brownian_pythagoras", "brownian_moments", "sweep_identity",
      "sweep_moments"};
  return names;
}

std::vector<VertexSet> wrong_layer_assignment(const Graph& g,
                                              std::vector<VertexSet> layers) {
  std::vector<std::ptrdiff_t> t(g.vertex_count(), -1);
  for (std::size_t n = 0; n < layers.size(); ++n) {
    for (const auto v : layers[n]) t.at(v) = static_cast<std::ptrdiff_t>(n);
  }
  for (std::size_t n = layers.size(); n-- > 0;) {
    if (layers[n].size() < 2) continue;
    for (const auto y : layers[n]) {
      for (std::size_t target = 0; target < layers.size(); ++target) {
        if (target == n) continue;
        for (const auto& nb : g.neighbors(y)) {
          const auto tz = t[nb.vertex];
          if (tz < 0 || nb.vertex == y) continue;
          const auto gap = tz - static_cast<std::ptrdiff_t>(target);
          if (gap >= 2 || gap <= -2) {
            auto& from = layers[n];
            from.erase(std::find(from.begin(), from.end(), y));
            layers[target].push_back(y);
            return layers;
          }
        }
      }
    }
  }
  throw Error(ErrorCode::IndexOutOfRange,
              "no single vertex move breaks layer locality for this foliation");
}

VerifyReport run_verification(const Graph& input_graph,
                              std::vector<VertexSet> layers,
                              const VerifyConfig& config) {
  VerifyReport report;
  report.config = config;
  Ladder ladder(report);
  const double tol = config.tol_exact;

  Graph g = input_graph;
  if (config.tamper == Tamper::FlipConductance) {
    std::size_t pick = 0;
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      if (!g.is_exterior(g.edges()[e].u) && !g.is_exterior(g.edges()[e].v)) {
        pick = e;
        break;
      }
    }
    g = g.with_tampered_conductance(pick, -g.edges()[pick].conductance);
  }
  if (config.tamper == Tamper::WrongLayer) {
    layers = wrong_layer_assignment(g, std::move(layers));
  }

  ladder.run("graph", [&](CheckResult& r) {
    const auto pi = recompute_pi(g);
    const bool pi_exact = std::equal(pi.begin(), pi.end(), g.pi().begin());
    const auto interior = g.interior();
    const auto f = random_vector(g.vertex_count(), interior, config.seed, 0);
    EdgeField phi;
    const GaussianStream stream(config.seed, kEdgeFieldSubstream);
    for (std::size_t e = 0; e < g.edge_count(); ++e) phi.values.push_back(stream.normal(e));
    const auto div = boundary_adjoint(g, phi, interior);
    double lhs = 0.0;
    for (const auto v : interior) lhs += f[v] * div[v];
    const double rhs = edge_inner(coboundary(g, f), phi);
    double scale = 0.0;
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      const auto& edge = g.edges()[e];
      scale += std::sqrt(std::abs(edge.conductance)) *
               std::abs(f[edge.u] - f[edge.v]) * std::abs(phi.values[e]);
    }
    const auto constant_grad = coboundary(g, VertexVector(g.vertex_count(), 1.0));
    const bool kills_constants =
        std::all_of(constant_grad.values.begin(), constant_grad.values.end(),
                    [](double v) { return v == 0.0; });
    r.value = std::abs(lhs - rhs) / std::max(scale, 1.0);
    r.threshold = kAdjointTol;
    r.passed = pi_exact && kills_constants && within(r.value, r.threshold);
    r.detail = std::string("adjointness residual; pi ") +
               (pi_exact ? "matches" : "DOES NOT match") +
               " recomputed conductance sums";
  });

  std::optional<Foliation> checked;
  ladder.run("foliation", [&](CheckResult& r) {
    r.threshold = 0.0;
    try {
      checked = Foliation::validate(g, layers);
      r.passed = true;
      r.detail = std::to_string(layers.size()) + " layers";
    } catch (const Error& e) {
      r.value = 1.0;
      r.passed = false;
      r.detail = std::string(to_string(e.code())) + ": " + e.what();
    }
  });
  Foliation fol = checked ? *checked : Foliation::unchecked(g.vertex_count(), layers);
  report.layer_count = fol.layer_count();

  OperatorFamily ops(g, fol);
  report.interior_count = ops.at(ops.top()).cluster.size();
  if (config.tamper == Tamper::AsymmetricGreen) tamper_green(ops);
  const std::size_t top = ops.top();

  ladder.run("green_inverse", [&](CheckResult& r) {
    for (std::size_t n = 0; n <= top; ++n) {
      r.value = std::max(r.value, green_inverse_residual(ops.at(n).laplacian,
                                                         ops.at(n).green));
    }
    r.threshold = tol;
    r.passed = within(r.value, tol);
    r.detail = "max_n max(||L G~ - I||, ||G~ L - I||)";
  });

  ladder.run("green_symmetry", [&](CheckResult& r) {
    for (std::size_t n = 0; n <= top; ++n) {
      r.value = std::max(r.value, green_symmetry_residual(g, ops.at(n).green));
    }
    r.threshold = tol;
    r.passed = within(r.value, tol);
    r.detail = "max |pi(x)G(x,y) - pi(y)G(y,x)| / max |pi(x)G(x,y)|";
  });

  ladder.run("poisson", [&](CheckResult& r) {
    double lo = 1.0, hi = 0.0, row_lo = 1.0, row_hi = 0.0;
    for (std::size_t n = 0; n <= top; ++n) {
      const auto c = check_poisson(g, ops.at(n).poisson);
      r.value = std::max({r.value, c.boundary_residual, c.harmonic_residual});
      lo = std::min(lo, c.min_entry);
      hi = std::max(hi, c.max_entry);
      row_lo = std::min(row_lo, c.min_row_sum);
      row_hi = std::max(row_hi, c.max_row_sum);
    }
    r.threshold = tol;
    const bool bounded = lo >= -tol && hi <= 1.0 + tol && row_lo > 0.0 &&
                         row_hi <= 1.0 + tol;
    r.passed = within(r.value, tol) && bounded;
    r.detail = "entries in [" + fmt(lo) + ", " + fmt(hi) + "], row sums in [" +
               fmt(row_lo) + ", " + fmt(row_hi) + "]";
  });

  ladder.run("green_variation", [&](CheckResult& r) {
    double min_increase = 0.0;
    for (std::size_t n = 1; n <= top; ++n) {
      const auto c = check_green_variation(ops.at(n - 1), ops.at(n));
      r.value = std::max(r.value, c.residual);
      min_increase = std::min(min_increase, c.min_increase);
    }
    r.threshold = tol;
    r.passed = within(r.value, tol) && min_increase >= -kMonotoneTol;
    r.detail = "min relative increase G_n - G_{n-1} = " + fmt(min_increase);
  });

  const HadamardFamily had(ops);

  ladder.run("layer_sqrt", [&](CheckResult& r) {
    for (std::size_t n = 0; n <= top; ++n) {
      r.value = std::max(r.value, sqrt_residual(had.sqrt(n), ops.at(n).boundary));
    }
    r.threshold = tol;
    r.passed = within(r.value, tol);
    r.detail = "max_n ||R_n^2 - G<n>|| / ||G<n>||";
  });

  ladder.run("hadamard_identity", [&](CheckResult& r) {
    for (std::size_t n = 0; n <= top; ++n) {
      r.value = std::max(r.value,
                         hadamard_identity_residual(had.q(n), ops.at(n).green));
    }
    r.threshold = tol;
    r.passed = within(r.value, tol);
    r.detail = "max_n ||Q_n Q_n^T - G~_n|| / ||G~_n||";
  });

  ladder.run("isometry", [&](CheckResult& r) {
    for (std::size_t n = 0; n <= top; ++n) {
      r.value = std::max(r.value, isometry_residual(g, had.q(n)));
    }
    r.threshold = tol;
    r.passed = within(r.value, tol);
    r.detail = "max_n ||Dirichlet Gram(Q_n) - I||";
  });

  ladder.run("hadamard_structure", [&](CheckResult& r) {
    double triangular = 0.0;
    double injective = 0.0;
    bool stable = true;
    for (std::size_t n = 0; n <= top; ++n) {
      r.value = std::max(r.value, kernel_harmonic_residual(g, had.kernel(n)));
      triangular = std::max(triangular, triangularity_violation(fol, had.q(n)));
      const auto& q = had.q(n);
      const auto b = random_vector(g.vertex_count(), q.vertices, config.seed, 1000 + n);
      std::vector<double> local(q.vertices.size());
      for (std::size_t i = 0; i < local.size(); ++i) local[i] = b[q.vertices[i]];
      const auto x = solve_layered(had, n, local);
      const auto back = q.values * std::span<const double>(x);
      double diff = 0.0, norm = 0.0;
      for (std::size_t i = 0; i < local.size(); ++i) {
        diff = std::max(diff, std::abs(back[i] - local[i]));
        norm = std::max(norm, std::abs(local[i]));
      }
      injective = std::max(injective, diff / std::max(norm, 1.0));
      if (n > 0) {
        const auto& prev = had.q(n - 1);
        for (std::size_t i = 0; i < prev.vertices.size() && stable; ++i) {
          for (std::size_t j = 0; j < prev.vertices.size(); ++j) {
            if (prev.values(i, j) != q.values(i, j)) {
              stable = false;
              break;
            }
          }
        }
      }
    }
    r.threshold = tol;
    r.passed = within(r.value, tol) && triangular == 0.0 &&
               within(injective, kInjectivityTol) && stable;
    r.detail = "kernel harmonic residual; triangularity " + fmt(triangular) +
               ", layered solve residual " + fmt(injective) +
               (stable ? ", Q_{n-1} embeds in Q_n" : ", Q_{n-1} NOT embedded in Q_n");
  });

  const auto& domain = ops.at(top).cluster.vertices;
  const std::size_t vc = g.vertex_count();

  ladder.run("increment_identity", [&](CheckResult& r) {
    for (std::size_t s = 0; s < config.identity_samples; ++s) {
      const auto phi = sample_wnf(vc, domain, config.seed, s);
      for (std::size_t n = 1; n <= top; ++n) {
        const auto inc = increment(had, phi, n).values;
        const auto ext = poisson_layer_noise(ops, had, phi, n);
        double diff = 0.0, scale = 1.0;
        for (std::size_t v = 0; v < vc; ++v) {
          diff = std::max(diff, std::abs(inc[v] - ext[v]));
          scale = std::max(scale, std::abs(inc[v]));
        }
        r.value = std::max(r.value, diff / scale);
      }
    }
    r.threshold = kIncrementTol;
    r.passed = within(r.value, r.threshold);
    r.detail = std::to_string(config.identity_samples) +
               " samples: (Psi_n - Psi_{n-1}) vs P_n R_n Phi";
  });

  if (!config.monte_carlo) return report;
  const std::size_t trials = config.trials;
  const std::string trial_note = std::to_string(trials) + " trials, seed " +
                                 std::to_string(config.seed);

  std::vector<CovarianceReport> dgff_cov, oracle_cov;
  ladder.run("dgff_covariance", [&](CheckResult& r) {
    for (std::size_t n = 0; n <= top; ++n) {
      dgff_cov.push_back(dgff_covariance(had, ops, n, trials, config.seed));
      r.value = std::max(r.value, dgff_cov.back().max_abs_z);
    }
    r.threshold = config.z_max;
    r.passed = within(r.value, r.threshold);
    r.detail = "max |z| of cov(Psi_n) vs G~_n; " + trial_note;
  });

  ladder.run("oracle_covariance", [&](CheckResult& r) {
    for (std::size_t n = 0; n <= top; ++n) {
      oracle_cov.push_back(oracle_covariance(ops, n, trials, config.seed));
      r.value = std::max(r.value, oracle_cov.back().max_abs_z);
    }
    r.threshold = config.z_max;
    r.passed = within(r.value, r.threshold);
    r.detail = "max |z| of Cholesky-oracle covariance vs G~_n; " + trial_note;
  });

  ladder.run("oracle_agreement", [&](CheckResult& r) {
    for (std::size_t n = 0; n <= top; ++n) {
      const auto z = two_sample_z(dgff_cov[n].empirical, trials,
                                  oracle_cov[n].empirical, trials);
      r.value = std::max(r.value, z.max_abs());
    }
    r.threshold = config.z_max;
    r.passed = within(r.value, r.threshold);
    r.detail = "max two-sample |z| between Hadamard and oracle covariances";
  });

  ladder.run("increment_independence", [&](CheckResult& r) {
    const auto inc = increment_covariance(had, ops, trials, config.seed);
    r.value = inc.max_cross_z;
    r.threshold = config.z_max;
    r.passed = within(r.value, r.threshold) && within(inc.max_block_z, config.z_max);
    r.detail = "max |z| over cross-increment covariances; within-increment max |z| " +
               fmt(inc.max_block_z);
  });

  ladder.run("brownian_pythagoras", [&](CheckResult& r) {
    bool monotone = true;
    for (std::size_t k = 0; k < config.test_vectors; ++k) {
      const auto f = random_vector(vc, domain, config.seed, 2000 + k);
      const auto b = brownian_targets(had, fol, f);
      r.value = std::max(r.value, b.pythagoras_residual);
      monotone = monotone && b.monotone;
    }
    r.threshold = kPythagorasTol;
    r.passed = within(r.value, r.threshold) && monotone;
    r.detail = std::to_string(config.test_vectors) +
               " test vectors; variance targets " +
               (monotone ? "nondecreasing" : "NOT monotone");
  });

  ladder.run("brownian_moments", [&](CheckResult& r) {
    const auto f = random_vector(vc, domain, config.seed, 2000);
    const auto b = brownian_check(had, fol, f, trials, config.seed);
    r.value = b.moments.max_abs_z;
    r.threshold = config.z_max;
    r.passed = within(r.value, r.threshold);
    r.detail = "max |z| of Cov(F_n, F_m) vs ||Q_min^* f||^2; " + trial_note;
  });

  const std::size_t n1 = top >= 1 ? 1 : 0;
  const auto sweep_f = random_vector(vc, ops.at(n1).cluster.vertices, config.seed, 3000);
  std::optional<SweepReport> sweep;
  ladder.run("sweep_identity", [&](CheckResult& r) {
    sweep = sweep_average_check(ops, had, sweep_f, n1, top, trials, config.seed);
    r.value = sweep->identity_residual;
    r.threshold = tol;
    r.passed = within(r.value, r.threshold);
    r.detail = "per-sample |A_n - (F_n2 - F_{n-1})|, n = " + std::to_string(n1) +
               ".." + std::to_string(top);
  });

  ladder.run("sweep_moments", [&](CheckResult& r) {
    r.value = sweep->moments.max_abs_z;
    r.threshold = config.z_max;
    r.passed = within(r.value, r.threshold);
    r.detail = "max |z| of E(A_n A_m) vs ||Q_n2^* f||^2 - ||Q_{max(n,m)-1}^* f||^2";
  });

  return report;
}

std::string to_json(const VerifyReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"value", c.value},
                      {"threshold", c.threshold},
                      {"passed", c.passed},
                      {"detail", c.detail},
                      {"seconds", c.seconds}});
  }
  const auto first = report.first_failure();
  nlohmann::json doc = {
      {"schema", 1},
      {"passed", report.all_passed()},
      {"first_failure", first ? nlohmann::json(*first) : nlohmann::json(nullptr)},
      {"layers", report.layer_count},
      {"interior_vertices", report.interior_count},
      {"seed", report.config.seed},
      {"trials", report.config.monte_carlo ? report.config.trials : 0},
      {"tol_exact", report.config.tol_exact},
      {"z_max", report.config.z_max},
      {"tamper", std::string(to_string(report.config.tamper))},
      {"checks", std::move(checks)}};
  return doc.dump(2);
}

}  // namespace dgff
