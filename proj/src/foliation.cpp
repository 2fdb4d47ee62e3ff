#include "dgff/foliation.hpp"

#include <algorithm>
#include <queue>

#include <json.hpp>

#include "dgff/error.hpp"
#include "dgff/graph_io.hpp"

namespace dgff {

namespace {

void check_components_touch_outside(const Graph& g, const GrowthCluster& c) {
  const auto inside = membership(g.vertex_count(), c.vertices);
  std::vector<bool> seen(g.vertex_count(), false);
  for (const auto start : c.vertices) {
    if (seen[start]) continue;
    bool leaks = false;
    std::queue<VertexIndex> frontier;
    frontier.push(start);
    seen[start] = true;
    while (!frontier.empty()) {
      const auto x = frontier.front();
      frontier.pop();
      for (const auto& nb : g.neighbors(x)) {
        if (!inside[nb.vertex]) {
          leaks = true;
        } else if (!seen[nb.vertex]) {
          seen[nb.vertex] = true;
          frontier.push(nb.vertex);
        }
      }
    }
    if (!leaks) {
      throw Error(ErrorCode::SealedCluster,
                  "component of cluster " + std::to_string(c.index) +
                      " containing '" + g.id(start) +
                      "' has no edge leaving the cluster");
    }
  }
}

}  // namespace

Foliation Foliation::validate(const Graph& g, std::vector<VertexSet> layers) {
  if (g.exterior().empty()) {
    throw Error(ErrorCode::NoExterior,
                "a foliation needs a nonempty exterior vertex set");
  }
  if (layers.empty()) {
    throw Error(ErrorCode::EmptyLayer, "foliation has no layers");
  }
  for (std::size_t n = 0; n < layers.size(); ++n) {
    if (layers[n].empty()) {
      throw Error(ErrorCode::EmptyLayer,
                  "layer " + std::to_string(n) + " is empty");
    }
  }

  Foliation f;
  f.layer_of_.assign(g.vertex_count(), -1);
  for (std::size_t n = 0; n < layers.size(); ++n) {
    for (const auto v : layers[n]) {
      if (v >= g.vertex_count()) {
        throw Error(ErrorCode::UnknownVertex,
                    "vertex index " + std::to_string(v) + " out of range");
      }
      if (g.is_exterior(v)) {
        throw Error(ErrorCode::CoverageViolation,
                    "exterior vertex '" + g.id(v) + "' assigned to layer " +
                        std::to_string(n));
      }
      if (f.layer_of_[v] >= 0) {
        throw Error(ErrorCode::OverlappingLayers,
                    "vertex '" + g.id(v) + "' appears in layers " +
                        std::to_string(f.layer_of_[v]) + " and " +
                        std::to_string(n));
      }
      f.layer_of_[v] = static_cast<std::ptrdiff_t>(n);
    }
  }
  for (VertexIndex v = 0; v < g.vertex_count(); ++v) {
    if (!g.is_exterior(v) && f.layer_of_[v] < 0) {
      throw Error(ErrorCode::CoverageViolation,
                  "interior vertex '" + g.id(v) + "' belongs to no layer");
    }
  }
  for (const auto& e : g.edges()) {
    const auto tu = f.layer_of_[e.u];
    const auto tv = f.layer_of_[e.v];
    if (tu >= 0 && tv >= 0 && (tu - tv > 1 || tv - tu > 1)) {
      throw Error(ErrorCode::LocalityViolation,
                  "edge {" + g.id(e.u) + ", " + g.id(e.v) + "} joins layers " +
                      std::to_string(tu) + " and " + std::to_string(tv));
    }
  }

  for (auto& layer : layers) std::sort(layer.begin(), layer.end());
  f.layers_ = std::move(layers);
  for (std::size_t n = 0; n < f.layer_count(); ++n) {
    check_components_touch_outside(g, f.cluster(g, n));
  }
  return f;
}

Foliation Foliation::from_ids(
    const Graph& g, const std::vector<std::vector<std::string>>& layers) {
  std::vector<VertexSet> resolved;
  resolved.reserve(layers.size());
  for (const auto& ids : layers) {
    VertexSet layer;
    layer.reserve(ids.size());
    for (const auto& id : ids) layer.push_back(g.index_of(id));
    resolved.push_back(std::move(layer));
  }
  return validate(g, std::move(resolved));
}

Foliation Foliation::unchecked(std::size_t vertex_count,
                               std::vector<VertexSet> layers) {
  Foliation f;
  f.layer_of_.assign(vertex_count, -1);
  for (std::size_t n = 0; n < layers.size(); ++n) {
    std::sort(layers[n].begin(), layers[n].end());
    for (const auto v : layers[n]) {
      f.layer_of_.at(v) = static_cast<std::ptrdiff_t>(n);
    }
  }
  f.layers_ = std::move(layers);
  return f;
}

const VertexSet& Foliation::layer(std::size_t n) const {
  if (n >= layers_.size()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "layer " + std::to_string(n) + " does not exist");
  }
  return layers_[n];
}

std::optional<std::size_t> Foliation::layer_of(VertexIndex v) const {
  const auto t = layer_of_.at(v);
  if (t < 0) return std::nullopt;
  return static_cast<std::size_t>(t);
}

GrowthCluster Foliation::cluster(const Graph& g, std::size_t n) const {
  if (n >= layers_.size()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "cluster " + std::to_string(n) + " does not exist (top is " +
                    std::to_string(layers_.size() - 1) + ")");
  }
  GrowthCluster c;
  c.index = n;
  for (std::size_t k = 0; k <= n; ++k) {
    c.vertices.insert(c.vertices.end(), layers_[k].begin(), layers_[k].end());
  }
  c.top_size = layers_[n].size();
  const auto inside = membership(g.vertex_count(), c.vertices);
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    if (inside[g.edges()[e].u] && inside[g.edges()[e].v]) c.edges.push_back(e);
  }
  return c;
}

Foliation validate_foliation(const Graph& g, std::vector<VertexSet> layers) {
  return Foliation::validate(g, std::move(layers));
}

Foliation bfs_foliate(const Graph& g, const VertexSet& roots) {
  if (roots.empty()) {
    throw Error(ErrorCode::EmptyLayer, "no BFS roots given");
  }
  if (g.exterior().empty()) {
    throw Error(ErrorCode::ExteriorUnreachable,
                "graph declares no exterior vertices");
  }
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> dist(g.vertex_count(), unset);
  std::queue<VertexIndex> frontier;
  for (const auto r : roots) {
    if (r >= g.vertex_count()) {
      throw Error(ErrorCode::UnknownVertex, "root index out of range");
    }
    if (g.is_exterior(r)) {
      throw Error(ErrorCode::RootsInExterior,
                  "root '" + g.id(r) + "' is an exterior vertex");
    }
    if (dist[r] == unset) {
      dist[r] = 0;
      frontier.push(r);
    }
  }
  std::vector<VertexSet> layers;
  while (!frontier.empty()) {
    const auto x = frontier.front();
    frontier.pop();
    if (layers.size() <= dist[x]) layers.resize(dist[x] + 1);
    layers[dist[x]].push_back(x);
    for (const auto& nb : g.neighbors(x)) {
      if (!g.is_exterior(nb.vertex) && dist[nb.vertex] == unset) {
        dist[nb.vertex] = dist[x] + 1;
        frontier.push(nb.vertex);
      }
    }
  }
  for (VertexIndex v = 0; v < g.vertex_count(); ++v) {
    if (!g.is_exterior(v) && dist[v] == unset) {
      throw Error(ErrorCode::InteriorUnreachable,
                  "interior vertex '" + g.id(v) +
                      "' cannot be reached from the roots without crossing "
                      "the exterior");
    }
  }
  return Foliation::validate(g, std::move(layers));
}

std::string foliation_to_json(const Graph& g, const Foliation& f) {
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& layer : f.layers()) {
    nlohmann::json ids = nlohmann::json::array();
    for (const auto v : layer) ids.push_back(g.id(v));
    layers.push_back(std::move(ids));
  }
  return nlohmann::json{{"layers", std::move(layers)}}.dump();
}

Foliation parse_foliation(std::string_view json_text, const Graph& g) {
  std::vector<std::vector<std::string>> layers;
  try {
    const auto doc = nlohmann::json::parse(json_text);
    layers = doc.at("layers").get<std::vector<std::vector<std::string>>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError,
                std::string("malformed foliation JSON: ") + e.what());
  }
  return Foliation::from_ids(g, layers);
}

Foliation load_foliation(const std::filesystem::path& path, const Graph& g) {
  return parse_foliation(read_file(path), g);
}

}  // namespace dgff
