#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dgff/graph.hpp"

namespace dgff {

/// Union of layers 0..n with the edges of the graph induced on it. Vertices
/// are listed layer by layer, so cluster n-1 is a prefix of cluster n and the
/// top layer occupies the trailing `top_size` positions.
struct GrowthCluster {
  std::size_t index = 0;
  VertexSet vertices;
  std::vector<std::size_t> edges;
  std::size_t top_size = 0;

  std::size_t size() const noexcept { return vertices.size(); }
  std::size_t top_offset() const noexcept { return vertices.size() - top_size; }
};

/// Ordered partition of the interior vertices into layers where every edge
/// between two layered vertices joins equal or adjacent layers. Exterior
/// vertices belong to no layer and may touch any of them.
class Foliation {
 public:
  /// Checks, in order: nonempty exterior, nonempty layers, known and
  /// non-exterior vertices, disjointness, coverage of the interior, locality,
  /// and that every component of every cluster touches the complement.
  static Foliation validate(const Graph& g, std::vector<VertexSet> layers);

  /// Resolves ids, then validates.
  static Foliation from_ids(const Graph& g,
                            const std::vector<std::vector<std::string>>& layers);

  /// No checks at all. Negative-control runs only.
  static Foliation unchecked(std::size_t vertex_count,
                             std::vector<VertexSet> layers);

  std::size_t layer_count() const noexcept { return layers_.size(); }
  /// Index of the last layer.
  std::size_t top() const noexcept { return layers_.size() - 1; }
  const VertexSet& layer(std::size_t n) const;
  const std::vector<VertexSet>& layers() const noexcept { return layers_; }

  /// Layer containing `v`, or nullopt for unlayered (exterior) vertices.
  std::optional<std::size_t> layer_of(VertexIndex v) const;

  /// Throws IndexOutOfRange when n > top().
  GrowthCluster cluster(const Graph& g, std::size_t n) const;

 private:
  std::vector<VertexSet> layers_;
  std::vector<std::ptrdiff_t> layer_of_;
};

Foliation validate_foliation(const Graph& g, std::vector<VertexSet> layers);

/// Layers by breadth-first distance from `roots` inside the interior.
Foliation bfs_foliate(const Graph& g, const VertexSet& roots);

std::string foliation_to_json(const Graph& g, const Foliation& f);
Foliation parse_foliation(std::string_view json_text, const Graph& g);
Foliation load_foliation(const std::filesystem::path& path, const Graph& g);

}  // namespace dgff
