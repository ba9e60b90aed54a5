#include <gtest/gtest.h>

#include "properties.hpp"

using namespace pfsm::testing;

namespace {

void expect_ok(const SuiteResult& r) {
  EXPECT_GE(r.cases, 100) << r.name;
  EXPECT_EQ(r.failures, 0) << describe(r);
}

}  // namespace

TEST(Properties, ProfitIdentity) { expect_ok(profit_identity_suite()); }
TEST(Properties, TimeDecomposition) { expect_ok(time_decomposition_suite()); }
TEST(Properties, TimelineCausalityAndConservation) { expect_ok(timeline_suite()); }
TEST(Properties, DecodeStructure) { expect_ok(structural_suite()); }
TEST(Properties, WrapIdempotence) { expect_ok(wrap_suite()); }
TEST(Properties, DifferentialEvolutionNonDecrease) { expect_ok(de_nondecrease_suite()); }
TEST(Properties, EntropyWeights) { expect_ok(ewm_suite()); }
TEST(Properties, TentMap) { expect_ok(tent_suite()); }
TEST(Properties, QuantileRoundTrip) { expect_ok(quantile_suite()); }
TEST(Properties, BprMonotone) { expect_ok(bpr_suite()); }

// Different seeds must hold too; the suites are not tuned to one stream.
TEST(Properties, OtherSeeds) {
  expect_ok(timeline_suite(100, 1234));
  expect_ok(structural_suite(100, 99));
  expect_ok(tent_suite(100, 777));
}
