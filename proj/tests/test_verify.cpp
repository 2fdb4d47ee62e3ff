#include <gtest/gtest.h>
#include <json.hpp>

#include "dgff/error.hpp"
#include "dgff/verify.hpp"
#include "test_support.hpp"

namespace dgff {
namespace {

VerifyConfig quick(Tamper tamper = Tamper::None) {
  VerifyConfig c;
  c.trials = 20000;
  c.tamper = tamper;
  return c;
}

/// Every check before `name` passed and `name` itself failed.
void expect_first_failure(const VerifyReport& r, const std::string& name) {
  ASSERT_EQ(r.first_failure(), name);
  for (const auto& c : r.checks) {
    if (c.name == name) break;
    EXPECT_TRUE(c.passed) << c.name;
  }
}

TEST(Ladder, OrderIsFixed) {
  const auto& names = check_names();
  ASSERT_EQ(names.size(), 19u);
  EXPECT_EQ(names.front(), "graph");
  EXPECT_EQ(names[1], "foliation");
  EXPECT_EQ(names.back(), "sweep_moments");
}

TEST(Ladder, AllFixturesPass) {
  for (const char* name : testing::kSmallFixtures) {
    const auto fx = testing::load_fixture(name);
    const auto r = run_verification(fx.graph, fx.foliation.layers(), quick());
    EXPECT_TRUE(r.all_passed()) << name << " first failure " << r.first_failure().value_or("");
    EXPECT_EQ(r.checks.size(), check_names().size());
    for (std::size_t i = 0; i < r.checks.size(); ++i) {
      EXPECT_EQ(r.checks[i].name, check_names()[i]);
    }
  }
}

TEST(Ladder, DeterministicOnlyMode) {
  const auto fx = testing::load_fixture("grid13");
  auto cfg = quick();
  cfg.monte_carlo = false;
  const auto r = run_verification(fx.graph, fx.foliation.layers(), cfg);
  EXPECT_TRUE(r.all_passed());
  EXPECT_EQ(r.interior_count, 121u);
  EXPECT_EQ(r.find("dgff_covariance"), nullptr);
}

TEST(NegativeControl, AsymmetricGreen) {
  const auto fx = testing::load_fixture("grid5");
  expect_first_failure(
      run_verification(fx.graph, fx.foliation.layers(), quick(Tamper::AsymmetricGreen)),
      "green_symmetry");
}

TEST(NegativeControl, WrongLayer) {
  const auto fx = testing::load_fixture("grid5");
  const auto r = run_verification(fx.graph, fx.foliation.layers(), quick(Tamper::WrongLayer));
  expect_first_failure(r, "foliation");
  EXPECT_NE(r.find("foliation")->detail.find("LocalityViolation"), std::string::npos);
}

TEST(NegativeControl, WrongLayerFixtureFile) {
  const auto fx = testing::load_fixture("grid5");
  const auto bad = wrong_layer_assignment(fx.graph, fx.foliation.layers());
  const auto file = load_graph(testing::fixture_path("grid5.json"));
  EXPECT_NE(bad, fx.foliation.layers());
  EXPECT_THROW(Foliation::validate(file, bad), Error);
}

TEST(NegativeControl, WrongLayerNeedsThreeLayers) {
  const auto fx = testing::load_fixture("p4");
  EXPECT_THROW(wrong_layer_assignment(fx.graph, fx.foliation.layers()), Error);
}

TEST(NegativeControl, FlipConductance) {
  const auto fx = testing::load_fixture("grid5");
  const auto r =
      run_verification(fx.graph, fx.foliation.layers(), quick(Tamper::FlipConductance));
  expect_first_failure(r, "graph");
  EXPECT_FALSE(r.all_passed());
}

TEST(Tamper, Names) {
  for (auto t : {Tamper::None, Tamper::AsymmetricGreen, Tamper::WrongLayer,
                 Tamper::FlipConductance}) {
    EXPECT_EQ(parse_tamper(to_string(t)), t);
  }
  EXPECT_FALSE(parse_tamper("bogus").has_value());
}

TEST(Report, JsonSchema) {
  const auto fx = testing::load_fixture("p4");
  const auto r = run_verification(fx.graph, fx.foliation.layers(), quick());
  const auto doc = nlohmann::json::parse(to_json(r));
  EXPECT_EQ(doc.at("schema"), 1);
  EXPECT_EQ(doc.at("passed"), true);
  EXPECT_TRUE(doc.at("first_failure").is_null());
  EXPECT_EQ(doc.at("checks").size(), check_names().size());
  EXPECT_EQ(doc.at("seed"), 42);
}

}  // namespace
}  // namespace dgff
