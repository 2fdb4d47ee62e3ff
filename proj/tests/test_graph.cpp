#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "dgff/error.hpp"
#include "dgff/graph.hpp"
#include "dgff/graph_io.hpp"
#include "test_support.hpp"

namespace dgff {
namespace {

ErrorCode parse_error_code(std::string_view text, GraphFormat format = GraphFormat::EdgeList) {
  try {
    parse_graph(text, format);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error for: " << text;
  return ErrorCode::IoError;
}

Graph p4(double c01 = 1.0) {
  return Graph::build({"v0", "v1", "v2", "v3"}, {"v0", "v3"},
                      {{"v0", "v1", c01}, {"v1", "v2", 1.0}, {"v2", "v3", 1.0}});
}

VertexVector delta(const Graph& g, std::string_view id) {
  VertexVector f(g.vertex_count(), 0.0);
  f[g.index_of(id)] = 1.0;
  return f;
}

TEST(GraphParse, EdgeListPath) {
  const auto g = parse_graph("v0 v1 1.0\nv1 v2 1.0\nv2 v3 1.0\n", GraphFormat::EdgeList);
  EXPECT_EQ(g.vertex_count(), 4u);
  EXPECT_EQ(g.edge_count(), 3u);
  EXPECT_DOUBLE_EQ(g.pi(g.index_of("v1")), 2.0);
  EXPECT_DOUBLE_EQ(g.pi(g.index_of("v0")), 1.0);
  EXPECT_TRUE(g.exterior().empty());
}

TEST(GraphParse, CommentsAndExteriorDirective) {
  const auto g = parse_graph("# a path\n!exterior v0 v3\nv0 v1 1\n\nv1 v2 1 # mid\nv2 v3 1\n",
                             GraphFormat::EdgeList);
  EXPECT_TRUE(g.is_exterior(g.index_of("v0")));
  EXPECT_TRUE(g.is_exterior(g.index_of("v3")));
  EXPECT_EQ(g.interior(), (VertexSet{g.index_of("v1"), g.index_of("v2")}));
}

TEST(GraphParse, ValidationErrors) {
  EXPECT_EQ(parse_error_code("v0 v1 1.0\nv1 v2 -1.0\n"), ErrorCode::NonPositiveConductance);
  EXPECT_EQ(parse_error_code("v0 v1 0\n"), ErrorCode::NonPositiveConductance);
  EXPECT_EQ(parse_error_code("v0 v1 nan\n"), ErrorCode::NonPositiveConductance);
  EXPECT_EQ(parse_error_code("a b 1\nc d 1\n"), ErrorCode::Disconnected);
  EXPECT_EQ(parse_error_code("a a 1\n"), ErrorCode::SelfLoop);
  EXPECT_EQ(parse_error_code("a b 1\nb a 2\n"), ErrorCode::ConflictingEdge);
  EXPECT_EQ(parse_error_code("a b\n"), ErrorCode::ParseError);
  EXPECT_EQ(parse_error_code("a b 1x\n"), ErrorCode::ParseError);
  EXPECT_EQ(parse_error_code("!ground a\na b 1\n"), ErrorCode::ParseError);
  // An id named only by !exterior is an isolated vertex.
  EXPECT_EQ(parse_error_code("!exterior z\na b 1\n"), ErrorCode::Disconnected);
  EXPECT_EQ(parse_error_code(R"({"vertices":["a","b"],"exterior":["z"],
                                 "edges":[{"u":"a","v":"b","c":1}]})",
                             GraphFormat::Json),
            ErrorCode::UnknownVertex);
  EXPECT_EQ(parse_error_code(""), ErrorCode::ParseError);
}

TEST(GraphParse, IdenticalDuplicateCollapses) {
  const auto g = parse_graph("a b 1\nb a 1\n", GraphFormat::EdgeList);
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_DOUBLE_EQ(g.pi(0), 1.0);
}

TEST(GraphParse, JsonFormat) {
  const auto g = parse_graph(
      R"({"vertices":["a","b","c"],"exterior":["c"],
          "edges":[{"u":"a","v":"b","c":2.5},{"u":"b","v":"c","c":1}]})",
      GraphFormat::Json);
  EXPECT_DOUBLE_EQ(g.conductance(0, 1), 2.5);
  EXPECT_DOUBLE_EQ(g.conductance(0, 2), 0.0);
  EXPECT_DOUBLE_EQ(g.pi(1), 3.5);
  EXPECT_EQ(parse_error_code(R"({"vertices":["a","a"],"edges":[]})", GraphFormat::Json),
            ErrorCode::DuplicateVertex);
  EXPECT_EQ(parse_error_code(R"({"vertices":"a"})", GraphFormat::Json),
            ErrorCode::ParseError);
}

TEST(GraphIo, MissingFileIsIoError) {
  try {
    load_graph("/nonexistent/graph.edges");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
  }
}

TEST(GraphIo, FixturesLoad) {
  const auto g = load_graph(testing::fixture_path("grid5.json"));
  EXPECT_EQ(g.vertex_count(), 25u);
  EXPECT_EQ(g.exterior().size(), 16u);
  EXPECT_EQ(load_graph(testing::fixture_path("grid13.edges")).interior().size(), 121u);
  EXPECT_EQ(load_graph(testing::fixture_path("bintree.edges")).exterior().size(), 8u);
}

TEST(Coboundary, ConstantsInKernel) {
  const auto g = p4();
  const auto df = coboundary(g, VertexVector(4, 3.7));
  for (double v : df.values) EXPECT_EQ(v, 0.0);
}

TEST(Coboundary, DeltaOnP4) {
  const auto g = p4();
  const auto df = coboundary(g, delta(g, "v1"));
  EXPECT_DOUBLE_EQ(df.at(g, 0, 1), -1.0);
  EXPECT_DOUBLE_EQ(df.at(g, 1, 0), 1.0);
  EXPECT_DOUBLE_EQ(df.at(g, 1, 2), 1.0);
  EXPECT_DOUBLE_EQ(df.at(g, 2, 3), 0.0);
}

TEST(Coboundary, ScalesBySqrtConductance) {
  const auto g = p4(4.0);
  EXPECT_DOUBLE_EQ(coboundary(g, delta(g, "v1")).at(g, 0, 1), -2.0);
}

TEST(BoundaryAdjoint, DeltaOnP4) {
  const auto g = p4();
  const auto r = boundary_adjoint(g, coboundary(g, delta(g, "v1")));
  EXPECT_DOUBLE_EQ(r[0], -1.0);
  EXPECT_DOUBLE_EQ(r[1], 2.0);
  EXPECT_DOUBLE_EQ(r[2], -1.0);
  EXPECT_DOUBLE_EQ(r[3], 0.0);
  const auto z = boundary_adjoint(g, EdgeField{std::vector<double>(3, 0.0)});
  for (double v : z) EXPECT_EQ(v, 0.0);
}

TEST(BoundaryAdjoint, IsAdjointOfCoboundaryOnRandomFields) {
  const auto g = load_graph(testing::fixture_path("grid5_weighted.edges"));
  std::mt19937_64 rng(17);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 10; ++trial) {
    VertexVector f(g.vertex_count());
    for (auto& v : f) v = normal(rng);
    EdgeField phi{std::vector<double>(g.edge_count())};
    for (auto& v : phi.values) v = normal(rng);
    double lhs = edge_inner(coboundary(g, f), phi);
    double rhs = 0.0;
    const auto ds = boundary_adjoint(g, phi);
    for (std::size_t x = 0; x < f.size(); ++x) rhs += f[x] * ds[x];
    EXPECT_NEAR(lhs, rhs, 1e-12 * (std::abs(lhs) + 1.0));

    // d*d f(x) = sum_y c(x,y) (f(x) - f(y))
    const auto ddf = boundary_adjoint(g, coboundary(g, f));
    for (std::size_t x = 0; x < f.size(); ++x) {
      double expect = 0.0;
      for (const auto& nb : g.neighbors(x)) {
        expect += g.conductance(x, nb.vertex) * (f[x] - f[nb.vertex]);
      }
      EXPECT_NEAR(ddf[x], expect, 1e-12);
    }
  }
}

TEST(DirichletInner, P4Values) {
  const auto g = p4();
  const auto interior = g.interior();
  const auto d1 = delta(g, "v1");
  EXPECT_DOUBLE_EQ(dirichlet_inner(g, d1, d1, interior), 2.0);
  EXPECT_DOUBLE_EQ(dirichlet_inner(g, VertexVector(4, 1.0), VertexVector(4, 1.0),
                                   {0, 1, 2, 3}),
                   0.0);
  VertexVector f{0.3, -1.2, 2.0, 0.7};
  VertexVector f2 = f;
  for (auto& v : f2) v *= 2.0;
  EXPECT_NEAR(dirichlet_inner(g, f2, f2, interior), 4.0 * dirichlet_inner(g, f, f, interior),
              1e-12);
}

TEST(DirichletInner, MasksOutsideDomain) {
  const auto g = p4();
  // Values on the exterior must be ignored.
  VertexVector f{5.0, 1.0, 0.0, -3.0};
  EXPECT_DOUBLE_EQ(dirichlet_inner(g, f, f, g.interior()), 2.0);
}

}  // namespace
}  // namespace dgff
