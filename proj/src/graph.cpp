#include "dgff/graph.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <queue>
#include <utility>

#include "dgff/error.hpp"

namespace dgff {

namespace {

bool valid_token(const std::string& s) {
  if (s.empty()) return false;
  return std::none_of(s.begin(), s.end(), [](unsigned char ch) {
    return std::isspace(ch) != 0;
  });
}

}  // namespace

Graph Graph::build(std::vector<std::string> vertices,
                   const std::vector<std::string>& exterior,
                   const std::vector<EdgeSpec>& edges) {
  Graph g;
  g.ids_ = std::move(vertices);
  if (g.ids_.empty()) {
    throw Error(ErrorCode::ParseError, "graph has no vertices");
  }
  for (VertexIndex i = 0; i < g.ids_.size(); ++i) {
    const auto& id = g.ids_[i];
    if (!valid_token(id)) {
      throw Error(ErrorCode::ParseError,
                  "vertex id must be a nonempty token without whitespace: '" +
                      id + "'");
    }
    if (!g.index_.emplace(id, i).second) {
      throw Error(ErrorCode::DuplicateVertex, "duplicate vertex id '" + id + "'");
    }
  }

  const std::size_t n = g.ids_.size();
  g.exterior_mask_.assign(n, false);
  for (const auto& id : exterior) {
    const VertexIndex v = g.index_of(id);
    if (!g.exterior_mask_[v]) {
      g.exterior_mask_[v] = true;
      g.exterior_.push_back(v);
    }
  }
  std::sort(g.exterior_.begin(), g.exterior_.end());

  std::map<std::pair<VertexIndex, VertexIndex>, std::size_t> seen;
  for (const auto& spec : edges) {
    VertexIndex a = g.index_of(spec.u);
    VertexIndex b = g.index_of(spec.v);
    if (a == b) {
      throw Error(ErrorCode::SelfLoop, "self-loop at '" + spec.u + "'");
    }
    if (!(spec.conductance > 0.0) || !std::isfinite(spec.conductance)) {
      throw Error(ErrorCode::NonPositiveConductance,
                  "conductance of {" + spec.u + ", " + spec.v +
                      "} must be positive and finite");
    }
    if (a > b) std::swap(a, b);
    auto [it, inserted] = seen.emplace(std::make_pair(a, b), g.edges_.size());
    if (!inserted) {
      if (g.edges_[it->second].conductance != spec.conductance) {
        throw Error(ErrorCode::ConflictingEdge,
                    "edge {" + spec.u + ", " + spec.v +
                        "} listed twice with different conductances");
      }
      continue;
    }
    g.edges_.push_back(Edge{a, b, spec.conductance});
  }

  g.adjacency_.assign(n, {});
  for (std::size_t e = 0; e < g.edges_.size(); ++e) {
    g.adjacency_[g.edges_[e].u].push_back(Neighbor{g.edges_[e].v, e});
    g.adjacency_[g.edges_[e].v].push_back(Neighbor{g.edges_[e].u, e});
  }

  std::vector<bool> reached(n, false);
  std::queue<VertexIndex> frontier;
  frontier.push(0);
  reached[0] = true;
  std::size_t count = 1;
  while (!frontier.empty()) {
    const VertexIndex x = frontier.front();
    frontier.pop();
    for (const auto& nb : g.adjacency_[x]) {
      if (!reached[nb.vertex]) {
        reached[nb.vertex] = true;
        ++count;
        frontier.push(nb.vertex);
      }
    }
  }
  if (count != n) {
    const auto missing = std::find(reached.begin(), reached.end(), false);
    throw Error(ErrorCode::Disconnected,
                "graph is disconnected: '" +
                    g.ids_[static_cast<std::size_t>(missing - reached.begin())] +
                    "' is not reachable from '" + g.ids_[0] + "'");
  }

  g.pi_ = recompute_pi(g);
  return g;
}

std::optional<VertexIndex> Graph::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

VertexIndex Graph::index_of(std::string_view id) const {
  if (auto v = find(id)) return *v;
  throw Error(ErrorCode::UnknownVertex,
              "unknown vertex '" + std::string(id) + "'");
}

double Graph::conductance(VertexIndex x, VertexIndex y) const {
  for (const auto& nb : adjacency_.at(x)) {
    if (nb.vertex == y) return edges_[nb.edge].conductance;
  }
  return 0.0;
}

VertexSet Graph::interior() const {
  VertexSet out;
  for (VertexIndex v = 0; v < vertex_count(); ++v) {
    if (!exterior_mask_[v]) out.push_back(v);
  }
  return out;
}

Graph Graph::with_tampered_conductance(std::size_t edge,
                                       double conductance) const {
  Graph copy = *this;
  copy.edges_.at(edge).conductance = conductance;
  return copy;
}

std::vector<double> recompute_pi(const Graph& g) {
  std::vector<double> pi(g.vertex_count(), 0.0);
  for (VertexIndex x = 0; x < g.vertex_count(); ++x) {
    for (const auto& nb : g.neighbors(x)) {
      pi[x] += g.edges()[nb.edge].conductance;
    }
  }
  return pi;
}

double EdgeField::at(const Graph& g, VertexIndex x, VertexIndex y) const {
  for (const auto& nb : g.neighbors(x)) {
    if (nb.vertex == y) {
      const double value = values.at(nb.edge);
      return g.edges()[nb.edge].u == x ? value : -value;
    }
  }
  throw Error(ErrorCode::UnknownVertex,
              "no edge {" + g.id(x) + ", " + g.id(y) + "}");
}

EdgeField coboundary(const Graph& g, std::span<const double> f) {
  if (f.size() != g.vertex_count()) {
    throw Error(ErrorCode::DimensionMismatch,
                "vertex function has wrong length");
  }
  EdgeField out;
  out.values.reserve(g.edge_count());
  for (const auto& e : g.edges()) {
    out.values.push_back(std::sqrt(e.conductance) * (f[e.u] - f[e.v]));
  }
  return out;
}

VertexVector boundary_adjoint(const Graph& g, const EdgeField& phi) {
  if (phi.values.size() != g.edge_count()) {
    throw Error(ErrorCode::DimensionMismatch, "edge field has wrong length");
  }
  VertexVector out(g.vertex_count(), 0.0);
  for (std::size_t k = 0; k < g.edge_count(); ++k) {
    const auto& e = g.edges()[k];
    const double flow = std::sqrt(e.conductance) * phi.values[k];
    out[e.u] += flow;
    out[e.v] -= flow;
  }
  return out;
}

VertexVector boundary_adjoint(const Graph& g, const EdgeField& phi,
                              const VertexSet& domain) {
  return restrict_to(boundary_adjoint(g, phi), domain);
}

double edge_inner(const EdgeField& phi, const EdgeField& psi) {
  if (phi.values.size() != psi.values.size()) {
    throw Error(ErrorCode::DimensionMismatch, "edge fields differ in length");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < phi.values.size(); ++k) {
    sum += phi.values[k] * psi.values[k];
  }
  return sum;
}

double dirichlet_inner(const Graph& g, std::span<const double> f,
                       std::span<const double> g_values,
                       const VertexSet& domain) {
  const auto df = coboundary(g, restrict_to(f, domain));
  const auto dg = coboundary(g, restrict_to(g_values, domain));
  return edge_inner(df, dg);
}

std::vector<bool> membership(std::size_t vertex_count, const VertexSet& set) {
  std::vector<bool> mask(vertex_count, false);
  for (const auto v : set) mask.at(v) = true;
  return mask;
}

VertexVector restrict_to(std::span<const double> f, const VertexSet& domain) {
  VertexVector out(f.size(), 0.0);
  for (const auto v : domain) out.at(v) = f[v];
  return out;
}

}  // namespace dgff
