#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dgff/foliation.hpp"
#include "dgff/graph.hpp"

namespace dgff {

/// Deliberate corruption applied before the ladder runs.
enum class Tamper {
  None,
  /// One entry G_N(x,y) of the unnormalized top-cluster Green kernel is
  /// scaled by (1 + 1e-6) without touching G_N(y,x) or G~_N.
  AsymmetricGreen,
  /// One vertex is moved to a layer two or more steps away from one of its
  /// neighbours.
  WrongLayer,
  /// One conductance changes sign after validation; pi keeps its old value.
  FlipConductance,
};

std::string_view to_string(Tamper t) noexcept;
std::optional<Tamper> parse_tamper(std::string_view name) noexcept;

struct VerifyConfig {
  double tol_exact = 1e-10;
  double z_max = 5.0;
  std::size_t trials = 100000;
  std::uint64_t seed = 42;
  /// Seeded white-noise samples for the per-sample increment identity.
  std::size_t identity_samples = 100;
  /// Random test vectors for the Pythagoras identity.
  std::size_t test_vectors = 20;
  bool monte_carlo = true;
  Tamper tamper = Tamper::None;
};

struct CheckResult {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  std::size_t layer_count = 0;
  std::size_t interior_count = 0;
  VerifyConfig config;

  bool all_passed() const noexcept;
  /// Name of the first failing check in ladder order.
  std::optional<std::string> first_failure() const;
  const CheckResult* find(std::string_view name) const noexcept;
};

/// Ladder order; Monte Carlo rungs are last.
const std::vector<std::string>& check_names();

/// Runs every check in order. Graph and foliation axioms are checked as the
/// first rungs rather than thrown, so later rungs still run on an invalid
/// foliation; any construction error after that propagates.
VerifyReport run_verification(const Graph& g, std::vector<VertexSet> layers,
                              const VerifyConfig& config);

/// JSON with `"schema":1`.
std::string to_json(const VerifyReport& report);

/// Layers after applying the WrongLayer move; throws IndexOutOfRange when no
/// single move can break locality.
std::vector<VertexSet> wrong_layer_assignment(const Graph& g,
                                              std::vector<VertexSet> layers);

}  // namespace dgff
