#include "dividend/oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "test_support.hpp"

namespace dividend {
namespace {

CharacteristicGame jigsaw(int n) {
  // Worth 1 once pieces 0 and 1 are both present.
  return {n, [](const std::vector<bool>& s) { return Rational(s[0] && s[1] ? 1 : 0); }};
}

CharacteristicGame additive(const std::vector<int>& weights) {
  return {static_cast<int>(weights.size()), [weights](const std::vector<bool>& s) {
            Rational v(0);
            for (std::size_t i = 0; i < s.size(); ++i) {
              if (s[i]) v += weights[i];
            }
            return v;
          }};
}

TEST(ExactShapley, Jigsaw) {
  const auto v = exact_shapley_all(jigsaw(5));
  EXPECT_EQ(v, (std::vector<Rational>{Rational(1, 2), Rational(1, 2), 0, 0, 0}));
  EXPECT_EQ(exact_shapley(jigsaw(5), 1), Rational(1, 2));
}

TEST(ExactShapley, AdditiveGameGivesWeights) {
  EXPECT_EQ(exact_shapley_all(additive({3, -1, 4, 1})),
            (std::vector<Rational>{3, -1, 4, 1}));
}

TEST(ExactShapley, GuardRefusesLargeGames) {
  EXPECT_THROW(exact_shapley_all(jigsaw(11)), GuardRefusal);
  OracleGuard guard;
  guard.override = true;
  EXPECT_EQ(exact_shapley(jigsaw(11), 0, guard), Rational(1, 2));
  guard.max_players = 11;
  guard.override = false;
  EXPECT_NO_THROW(exact_shapley(jigsaw(11), 2, guard));
}

TEST(ExactOwen, QuotientAndInnerSplit) {
  // Pieces 0 and 1 sit in different unions with bystanders.
  const std::vector<std::vector<int>> unions = {{0, 2}, {1, 3, 4}};
  const auto v = exact_owen_all(jigsaw(5), unions);
  EXPECT_EQ(v, (std::vector<Rational>{Rational(1, 2), Rational(1, 2), 0, 0, 0}));
}

TEST(ExactOwen, AsymmetricUnions) {
  // v(S) = 1 when S holds player 0 and at least one of 1, 2.
  CharacteristicGame g{3, [](const std::vector<bool>& s) {
                         return Rational(s[0] && (s[1] || s[2]) ? 1 : 0);
                       }};
  EXPECT_EQ(exact_shapley_all(g),
            (std::vector<Rational>{Rational(2, 3), Rational(1, 6), Rational(1, 6)}));
  // With {1, 2} merged the quotient game is a two-player jigsaw.
  EXPECT_EQ(exact_owen_all(g, {{0}, {1, 2}}),
            (std::vector<Rational>{Rational(1, 2), Rational(1, 4), Rational(1, 4)}));
  EXPECT_EQ(exact_owen(g, {{0}, {1, 2}}, 2), Rational(1, 4));
}

TEST(ExactOwen, GuardRefusesLargeStructures) {
  std::vector<std::vector<int>> many;
  for (int c = 0; c < 6; ++c) many.push_back({c});
  EXPECT_THROW(exact_owen_all(jigsaw(6), many), GuardRefusal);
  EXPECT_THROW(exact_owen_all(jigsaw(6), {{0, 1, 2, 3, 4, 5}}), GuardRefusal);
  EXPECT_THROW(exact_owen_all(jigsaw(4), {{0, 1}, {2}}), PreconditionError);
}

TEST(Sampler, SameSeedSameStream) {
  PermutationSampler a(99), b(99);
  for (int i = 0; i < 50; ++i) ASSERT_EQ(a.permutation(7), b.permutation(7));
  EXPECT_EQ(PermutationSampler::kVersion, 1);
}

TEST(Sampler, BelowStaysInRange) {
  PermutationSampler s(5);
  for (std::uint64_t bound : {1ULL, 2ULL, 3ULL, 7ULL, 1000000007ULL}) {
    for (int i = 0; i < 200; ++i) ASSERT_LT(s.below(bound), bound);
  }
}

TEST(Sampler, PermutationsAreUniform) {
  PermutationSampler s(2024);
  const int draws = 120000;
  std::map<std::vector<int>, int> counts;
  for (int i = 0; i < draws; ++i) ++counts[s.permutation(5)];
  ASSERT_EQ(counts.size(), 120u);
  const double p = 1.0 / 120;
  const double sigma = std::sqrt(draws * p * (1 - p));
  for (const auto& [perm, c] : counts) {
    EXPECT_LE(std::abs(c - draws * p), 5 * sigma);
  }
}

TEST(MonteCarlo, JigsawWithinThreeStandardErrors) {
  const auto est = mc_shapley(jigsaw(6), 0, 20000, 17);
  EXPECT_EQ(est.samples, 20000u);
  EXPECT_EQ(est.seed, 17u);
  EXPECT_GT(est.standard_error, 0);
  EXPECT_LE(std::abs(est.estimate - 0.5), 3 * est.standard_error);
  EXPECT_EQ(est, mc_shapley(jigsaw(6), 0, 20000, 17));
}

TEST(MonteCarlo, ConstantGameIsZero) {
  CharacteristicGame g{4, [](const std::vector<bool>&) { return Rational(7); }};
  const auto est = mc_shapley(g, 2, 500, 3);
  EXPECT_EQ(est.estimate, 0);
  EXPECT_EQ(est.standard_error, 0);
}

TEST(Games, FrequencyGameCountsBinMembers) {
  Dataset d;
  d.examples = {testing::binned(1, "y"), testing::binned(2, "n"),
                testing::binned(3, "y", "b1")};
  const std::vector<FrequencyValueFunction> vfs = {
      FrequencyValueFunction::majority(1, -1, 0)};
  const auto g = frequency_game(d, {testing::bin_query("b0", "y")}, vfs);
  EXPECT_EQ(g.value_of({true, false, true}), Rational(1));
  EXPECT_EQ(g.value_of({true, true, true}), Rational(0));
  EXPECT_EQ(g.value_of({false, true, false}), Rational(-1));
}

}  // namespace
}  // namespace dividend
