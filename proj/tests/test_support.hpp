#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "dgff/foliation.hpp"
#include "dgff/graph.hpp"
#include "dgff/graph_io.hpp"

namespace dgff::testing {

inline std::filesystem::path fixture_path(std::string_view name) {
  return std::filesystem::path(DGFF_FIXTURE_DIR) / name;
}

struct Fixture {
  std::string name;
  Graph graph;
  Foliation foliation;
};

/// Shipped fixtures with their canonical foliations: explicit layer files for
/// the paths, BFS from the centre (or root) otherwise.
inline Fixture load_fixture(std::string_view name) {
  const std::string n(name);
  if (n == "p4" || n == "p5") {
    auto g = load_graph(fixture_path(n + ".edges"));
    auto f = load_foliation(fixture_path(n + ".foliation.json"), g);
    return {n, std::move(g), std::move(f)};
  }
  std::string file = n + ".edges";
  std::string root = "r2c2";
  if (n == "grid5") file = "grid5.json";
  if (n == "grid13") root = "r6c6";
  if (n == "bintree") root = "t0_0";
  auto g = load_graph(fixture_path(file));
  auto f = bfs_foliate(g, {g.index_of(root)});
  return {n, std::move(g), std::move(f)};
}

inline const char* const kSmallFixtures[] = {"p4", "p5", "grid5", "grid5_weighted",
                                             "bintree"};

}  // namespace dgff::testing
