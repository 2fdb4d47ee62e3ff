#include <cmath>

#include <gtest/gtest.h>

#include "dgff/error.hpp"
#include "dgff/linalg.hpp"
#include "dgff/operators.hpp"
#include "test_support.hpp"

namespace dgff {
namespace {

constexpr double kExact = 1e-12;

TEST(Laplacian, P4Cluster) {
  const auto fx = testing::load_fixture("p4");
  const auto lap = laplacian(fx.graph, fx.foliation.cluster(fx.graph, 1));
  EXPECT_EQ(lap(0, 0), 2.0);
  EXPECT_EQ(lap(0, 1), -1.0);
  EXPECT_EQ(lap(1, 0), -1.0);
  EXPECT_EQ(lap(1, 1), 2.0);
}

TEST(Laplacian, SingletonIsPi) {
  const auto fx = testing::load_fixture("grid5_weighted");
  const auto centre = fx.graph.index_of("r2c2");
  const auto lap = laplacian(fx.graph, VertexSet{centre});
  EXPECT_EQ(lap.dim(), 1u);
  EXPECT_EQ(lap(0, 0), fx.graph.pi(centre));
}

TEST(Laplacian, CycleWithoutExteriorIsNotPD) {
  const auto g = Graph::build({"a", "b", "c", "d", "e"}, {},
                              {{"a", "b", 1}, {"b", "c", 1}, {"c", "d", 1}, {"d", "e", 1},
                               {"e", "a", 1}});
  try {
    laplacian(g, VertexSet{0, 1, 2, 3, 4});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPD);
  }
}

TEST(Green, SingletonIsOne) {
  const auto fx = testing::load_fixture("bintree");
  const auto k = green(fx.graph, fx.foliation.cluster(fx.graph, 0));
  ASSERT_EQ(k.vertices.size(), 1u);
  EXPECT_NEAR(k.unnormalized(0, 0), 1.0, kExact);
  EXPECT_NEAR(k.normalized(0, 0), 1.0 / fx.graph.pi(k.vertices[0]), kExact);
}

TEST(Green, P4Values) {
  const auto fx = testing::load_fixture("p4");
  const auto k = green(fx.graph, fx.foliation.cluster(fx.graph, 1));
  EXPECT_NEAR(k.normalized(0, 0), 2.0 / 3.0, kExact);
  EXPECT_NEAR(k.normalized(0, 1), 1.0 / 3.0, kExact);
  EXPECT_NEAR(k.normalized(1, 1), 2.0 / 3.0, kExact);
  EXPECT_NEAR(k.unnormalized(0, 1), 2.0 / 3.0, kExact);
  EXPECT_NEAR(k.unnormalized(0, 0), 4.0 / 3.0, kExact);
  const auto k0 = green(fx.graph, fx.foliation.cluster(fx.graph, 0));
  EXPECT_NEAR(k0.normalized(0, 0), 0.5, kExact);
}

TEST(Green, SymmetryWithNonUnitConductance) {
  const auto g = Graph::build({"v0", "v1", "v2", "v3"}, {"v0", "v3"},
                              {{"v0", "v1", 3}, {"v1", "v2", 1}, {"v2", "v3", 1}});
  const auto k = green(g, VertexSet{1, 2});
  EXPECT_NEAR(g.pi(1) * k.unnormalized(0, 1), g.pi(2) * k.unnormalized(1, 0), kExact);
  EXPECT_NE(k.unnormalized(0, 1), k.unnormalized(1, 0));
  EXPECT_LE(green_symmetry_residual(g, k), kExact);
}

TEST(Green, InverseAndSymmetryOnAllFixtures) {
  for (const char* name : testing::kSmallFixtures) {
    const auto fx = testing::load_fixture(name);
    for (std::size_t n = 0; n <= fx.foliation.top(); ++n) {
      const auto c = fx.foliation.cluster(fx.graph, n);
      const auto k = green(fx.graph, c);
      EXPECT_LE(green_inverse_residual(laplacian(fx.graph, c), k), 1e-10) << name << n;
      EXPECT_LE(green_symmetry_residual(fx.graph, k), 1e-10) << name << n;
    }
  }
}

TEST(Poisson, P4Value) {
  const auto fx = testing::load_fixture("p4");
  const auto p = poisson(fx.graph, fx.foliation.cluster(fx.graph, 1), fx.foliation.layer(1));
  ASSERT_EQ(p.values.rows(), 2u);
  ASSERT_EQ(p.values.cols(), 1u);
  EXPECT_NEAR(p.values(0, 0), 0.5, kExact);
  EXPECT_EQ(p.values(1, 0), 1.0);
}

TEST(Poisson, LayerEqualsDomainGivesIdentity) {
  const auto fx = testing::load_fixture("grid5");
  const auto& layer = fx.foliation.layer(1);
  const auto p = poisson(fx.graph, layer, layer);
  EXPECT_EQ(max_abs_diff(p.values, Matrix::identity(layer.size())), 0.0);
}

TEST(Poisson, LayerOutsideDomainRejected) {
  const auto fx = testing::load_fixture("grid5");
  EXPECT_THROW(poisson(fx.graph, fx.foliation.layer(0), fx.foliation.layer(1)), Error);
}

TEST(Poisson, MaximumPrincipleAndHarmonicity) {
  for (const char* name : testing::kSmallFixtures) {
    const auto fx = testing::load_fixture(name);
    for (std::size_t n = 0; n <= fx.foliation.top(); ++n) {
      const auto p = poisson(fx.graph, fx.foliation.cluster(fx.graph, n), fx.foliation.layer(n));
      const auto chk = check_poisson(fx.graph, p);
      EXPECT_EQ(chk.boundary_residual, 0.0);
      EXPECT_LE(chk.harmonic_residual, 1e-10) << name << n;
      EXPECT_GE(chk.min_entry, -kExact);
      EXPECT_LE(chk.max_entry, 1.0 + kExact);
      EXPECT_LE(chk.max_row_sum, 1.0 + kExact) << name << n;
    }
  }
}

TEST(BoundaryGreen, P4AndFullRestriction) {
  const auto fx = testing::load_fixture("p4");
  const auto k1 = green(fx.graph, fx.foliation.cluster(fx.graph, 1));
  const auto bg = boundary_green(k1, fx.foliation.layer(1));
  ASSERT_EQ(bg.values.dim(), 1u);
  EXPECT_NEAR(bg.values(0, 0), 2.0 / 3.0, kExact);

  const auto g5 = testing::load_fixture("grid5");
  const auto k0 = green(g5.graph, g5.foliation.cluster(g5.graph, 0));
  EXPECT_EQ(max_abs_diff(boundary_green(k0, g5.foliation.layer(0)).values.matrix(),
                         k0.normalized),
            0.0);
}

TEST(BoundaryGreen, PositiveSpectrumOnGrid) {
  const auto fx = testing::load_fixture("grid5_weighted");
  for (std::size_t n = 0; n <= fx.foliation.top(); ++n) {
    const auto k = green(fx.graph, fx.foliation.cluster(fx.graph, n));
    const auto bg = boundary_green(k, fx.foliation.layer(n));
    EXPECT_GT(jacobi_eigen(bg.values).values.front(), 0.0);
  }
}

TEST(GreenVariation, P4HandValue) {
  const auto fx = testing::load_fixture("p4");
  const OperatorFamily ops(fx.graph, fx.foliation);
  const auto& g1 = ops.at(1).green.unnormalized;
  const auto& g0 = ops.at(0).green.unnormalized;
  EXPECT_NEAR(g1(0, 0) - g0(0, 0), 1.0 / 3.0, kExact);
  EXPECT_NEAR(ops.at(1).poisson.values(0, 0) * g1(1, 0), 1.0 / 3.0, kExact);
  EXPECT_LE(verify_green_variation(fx.graph, fx.foliation, 1).residual, kExact);
}

TEST(GreenVariation, AllFixturesAndMonotone) {
  for (const char* name : testing::kSmallFixtures) {
    const auto fx = testing::load_fixture(name);
    for (std::size_t n = 1; n <= fx.foliation.top(); ++n) {
      const auto v = verify_green_variation(fx.graph, fx.foliation, n);
      EXPECT_LE(v.residual, 1e-10) << name << n;
      EXPECT_GE(v.min_increase, -1e-12) << name << n;
    }
  }
}

TEST(GreenVariation, IndexRange) {
  const auto fx = testing::load_fixture("p4");
  EXPECT_THROW(verify_green_variation(fx.graph, fx.foliation, 0), Error);
  EXPECT_THROW(verify_green_variation(fx.graph, fx.foliation, 2), Error);
}

TEST(ToAmbient, ZeroExtends) {
  Matrix local(1, 1, 2.5);
  const auto m = to_ambient(local, VertexSet{2}, VertexSet{1}, 4);
  EXPECT_EQ(m.rows(), 4u);
  EXPECT_EQ(m(2, 1), 2.5);
  EXPECT_EQ(m.max_abs(), 2.5);
  EXPECT_EQ(m.frobenius(), 2.5);
}

}  // namespace
}  // namespace dgff
