#include "dividend/combinatorics.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "dividend/oracle.hpp"

namespace dividend {
namespace {

TEST(Binom, Examples) {
  EXPECT_EQ(binom(5, 2), 10);
  EXPECT_EQ(binom(3, 5), 0);
  EXPECT_EQ(binom(6, -1), 0);
  EXPECT_EQ(binom(0, 0), 1);
  EXPECT_EQ(binom(-1, 0), 0);
}

TEST(Binom, PascalIdentity) {
  for (long a = 1; a <= 60; ++a) {
    for (long b = 0; b <= a; ++b) {
      ASSERT_EQ(binom(a, b), binom(a - 1, b - 1) + binom(a - 1, b)) << a << "," << b;
    }
  }
}

TEST(Binom, BeyondFixedWidth) {
  // C(100, 50) does not fit in 64 bits.
  EXPECT_EQ(binom(100, 50).str(), "100891344545564193334812497256");
}

TEST(LogBinom, Examples) {
  EXPECT_NEAR(log_binom(5, 2), std::log(10.0), 1e-15);
  EXPECT_EQ(log_binom(3, 5), -std::numeric_limits<double>::infinity());
  EXPECT_EQ(log_binom(7, 0), 0.0);
}

// Reference: ln of the exact big integer, via its leading digits.
double log_of(const BigInt& x) {
  const std::string digits = x.str();
  const std::size_t keep = std::min<std::size_t>(30, digits.size());
  const long double lead = std::stold(digits.substr(0, keep));
  return static_cast<double>(std::log(lead) + (digits.size() - keep) * std::log(10.0L));
}

TEST(LogBinom, MatchesExactForLargeArguments) {
  const std::vector<std::pair<long, long>> cases = {
      {1000000, 500000}, {1000000, 1}, {1000000, 65}, {1000000, 1001},
      {1000000, 999999}, {20000, 7},   {123457, 60000}, {500, 250}};
  for (const auto& [a, b] : cases) {
    const double expected = log_of(binom(a, b));
    EXPECT_LE(std::abs(log_binom(a, b) - expected), 1e-12 * std::abs(expected))
        << a << "," << b;
  }
}

TEST(PrecedeProbability, Examples) {
  const std::vector<long> sizes = {2, 1};
  const std::vector<long> chosen = {1, 0};
  EXPECT_EQ(precede_probability(sizes, chosen), Rational(1, 6));
  EXPECT_EQ(precede_probability({}, {}), Rational(1));
  const std::vector<long> one = {2};
  for (long s = 0; s <= 2; ++s) {
    const std::vector<long> c = {s};
    EXPECT_EQ(precede_probability(one, c), Rational(1, 3));
  }
}

TEST(PrecedeProbability, RejectsOutOfRange) {
  const std::vector<long> sizes = {2};
  const std::vector<long> chosen = {3};
  EXPECT_THROW(precede_probability(sizes, chosen), PreconditionError);
}

// Every vector of chosen counts for the given sizes.
std::vector<std::vector<long>> all_choices(const std::vector<long>& sizes) {
  std::vector<std::vector<long>> out{{}};
  for (long size : sizes) {
    std::vector<std::vector<long>> next;
    for (const auto& prefix : out) {
      for (long s = 0; s <= size; ++s) {
        auto v = prefix;
        v.push_back(s);
        next.push_back(std::move(v));
      }
    }
    out = std::move(next);
  }
  return out;
}

// Sizes of three sets, possibly empty, with total at most max_total.
std::vector<std::vector<long>> size_vectors(long max_total) {
  std::vector<std::vector<long>> out;
  for (long total = 0; total <= max_total; ++total) {
    for (long x = 0; x <= total; ++x) {
      for (long y = 0; x + y <= total; ++y) {
        out.push_back({x, y, total - x - y});
      }
    }
  }
  return out;
}

TEST(PrecedeProbability, SumsToOne) {
  for (const auto& sizes : size_vectors(8)) {  // t <= 9
    Rational total(0);
    for (const auto& c : all_choices(sizes)) total += precede_probability(sizes, c);
    ASSERT_EQ(total, Rational(1));
  }
}

TEST(PrecedeProbability, MatchesPermutationEnumeration) {
  for (const auto& sizes : size_vectors(6)) {  // t <= 7
    // Element 0 is i; the sets follow in order.
    std::vector<int> group = {-1};
    for (std::size_t h = 0; h < sizes.size(); ++h) {
      for (long e = 0; e < sizes[h]; ++e) group.push_back(static_cast<int>(h));
    }
    std::vector<int> order(group.size());
    std::iota(order.begin(), order.end(), 0);
    std::map<std::vector<long>, long> hits;
    long total = 0;
    do {
      std::vector<long> before(sizes.size(), 0);
      for (int e : order) {
        if (e == 0) break;
        ++before[group[e]];
      }
      ++hits[before];
      ++total;
    } while (std::next_permutation(order.begin(), order.end()));
    for (const auto& c : all_choices(sizes)) {
      ASSERT_EQ(precede_probability(sizes, c), Rational(hits[c], total));
    }
  }
}

TEST(PrecedenceCount, UniformOverZeroToSetSize) {
  // A fixed element outside T is preceded by 0..|T| members of T equally often.
  for (int t_size = 0; t_size <= 6; ++t_size) {
    for (int extra = 0; extra <= 1; ++extra) {
      const int n = t_size + 1 + extra;  // T, the element, maybe one outsider
      std::vector<int> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::vector<long> counts(t_size + 1, 0);
      do {
        int seen = 0;
        for (int e : order) {
          if (e == t_size) break;
          if (e < t_size) ++seen;
        }
        ++counts[seen];
      } while (std::next_permutation(order.begin(), order.end()));
      for (long c : counts) ASSERT_EQ(c, counts[0]);
    }
  }
}

TEST(ScalarOps, FloatAgreesWithExact) {
  for (long n = 1; n <= 40; n += 3) {
    for (long a = 0; a <= n - 1; a += 2) {
      const long b = (n - 1 - a) / 2;
      const auto exact = ScalarOps<Rational>::binomial_fraction(
          {{a, a / 2}, {n - 1 - a, b}}, {{n - 1, a / 2 + b}}, n);
      const double approx = ScalarOps<double>::binomial_fraction(
          {{a, a / 2}, {n - 1 - a, b}}, {{n - 1, a / 2 + b}}, n);
      EXPECT_NEAR(approx, exact.convert_to<double>(),
                  1e-12 * exact.convert_to<double>());
    }
  }
}

TEST(NumericMode, Names) {
  EXPECT_EQ(numeric_mode_from_string("exact"), NumericMode::exact);
  EXPECT_EQ(numeric_mode_from_string("float"), NumericMode::floating);
  EXPECT_EQ(to_string(NumericMode::floating), "float");
  EXPECT_THROW(numeric_mode_from_string("fast"), ConfigError);
}

}  // namespace
}  // namespace dividend
