#ifndef DIVIDEND_FREQ_OWEN_HPP
#define DIVIDEND_FREQ_OWEN_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "dividend/combinatorics.hpp"
#include "dividend/freq_shapley.hpp"
#include "dividend/model.hpp"
#include "dividend/value_table.hpp"

namespace dividend {

// Label counts (relative to the query) that one coalition contributes.
struct CoalitionTally {
  long match = 0;
  long mismatch = 0;

  friend bool operator==(const CoalitionTally&, const CoalitionTally&) = default;
  friend auto operator<=>(const CoalitionTally&, const CoalitionTally&) = default;
};

// Entry (a, b): probability that the coalitions ordered before the target
// coalition contribute a matching and b mismatching examples.
template <class Scalar>
using PrecedeDistribution = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Which coalition holds the example that must precede the target.
enum class PrecedeBase {
  none,         // no such example, start from the empty ordering
  first_holds,  // others[0] must precede the target
};

struct CountCaps {
  long match;
  long mismatch;
};

// Coalition-order DP. Coalitions are inserted one at a time into a uniformly
// random ordering; layer[s] holds the joint mass of "s inserted coalitions
// precede the target" and the (a, b) they contribute. Inserting the j-th
// coalition into an ordering where s of the previous j - 1 precede the target
// puts it in front of the target with probability (s + 1) / (j + 1).
// With caps, states beyond them are dropped; transitions never decrease
// (a, b), so retained entries are exact.
template <class Scalar>
PrecedeDistribution<Scalar> coalition_precede_dp(std::span<const CoalitionTally> others,
                                                 PrecedeBase base,
                                                 std::optional<CountCaps> caps) {
  using Matrix = PrecedeDistribution<Scalar>;
  using Ops = ScalarOps<Scalar>;
  if (base == PrecedeBase::first_holds && others.empty()) {
    throw PreconditionError("coalition_precede_dp: first_holds needs a coalition");
  }
  long rows = 0;
  long cols = 0;
  for (const CoalitionTally& t : others) {
    rows += t.match;
    cols += t.mismatch;
  }
  if (caps) {
    rows = std::min(rows, caps->match);
    cols = std::min(cols, caps->mismatch);
  }
  ++rows;
  ++cols;

  std::vector<Matrix> layer;
  std::size_t start = 0;
  if (base == PrecedeBase::none) {
    layer.assign(1, Matrix::Zero(rows, cols));
    layer[0](0, 0) = Scalar(1);
  } else {
    // Only the half of the orderings with others[0] in front is kept.
    layer.assign(2, Matrix::Zero(rows, cols));
    if (others[0].match < rows && others[0].mismatch < cols) {
      layer[1](others[0].match, others[0].mismatch) = Ops::ratio(1, 2);
    }
    start = 1;
  }

  for (std::size_t idx = start; idx < others.size(); ++idx) {
    const long j = static_cast<long>(idx) + 1;
    const long da = others[idx].match;
    const long db = others[idx].mismatch;
    std::vector<Matrix> next(j + 1, Matrix::Zero(rows, cols));
    for (long s = 0; s < j; ++s) {
      const Matrix& prev = layer[s];
      next[s] += Ops::ratio(j - s, j + 1) * prev;
      if (da < rows && db < cols) {
        next[s + 1].bottomRightCorner(rows - da, cols - db) +=
            Ops::ratio(s + 1, j + 1) * prev.topLeftCorner(rows - da, cols - db);
      }
    }
    layer = std::move(next);
  }

  Matrix total = Matrix::Zero(rows, cols);
  for (const Matrix& m : layer) total += m;
  return total;
}

// Distribution of what the other m - 1 coalitions placed before the target
// contribute.
template <class Scalar>
PrecedeDistribution<Scalar> owen_precede_distribution(
    std::span<const CoalitionTally> others) {
  return coalition_precede_dp<Scalar>(others, PrecedeBase::none, std::nullopt);
}

// Probability that exactly a' matching and b' mismatching members of the
// target coalition (in-bin members other than the example) come before the
// example, indexed [a'][b'].
template <class Scalar>
PrecedeDistribution<Scalar> within_coalition_weights(long match, long mismatch) {
  using Ops = ScalarOps<Scalar>;
  const long t = match + mismatch + 1;
  PrecedeDistribution<Scalar> w(match + 1, mismatch + 1);
  for (long a = 0; a <= match; ++a) {
    for (long b = 0; b <= mismatch; ++b) {
      w(a, b) = Ops::binomial_fraction({{match, a}, {mismatch, b}}, {{t - 1, a + b}}, t);
    }
  }
  return w;
}

// Owen value of one in-bin example of the target coalition, given the
// distribution of preceding coalitions' counts and the target's in-bin
// match/mismatch counts excluding the example.
template <class Scalar>
Scalar owen_frequency_single(const PrecedeDistribution<Scalar>& preceding,
                             const CoalitionTally& target_rest,
                             const FrequencyValueFunction& vf, bool label_matches) {
  using Ops = ScalarOps<Scalar>;
  const long other_a = preceding.rows() - 1;
  const long other_b = preceding.cols() - 1;
  const auto inner = within_coalition_weights<Scalar>(target_rest.match,
                                                      target_rest.mismatch);
  Scalar value(0);
  for (const CriticalPoint& r :
       critical_set(vf, other_a + target_rest.match, other_b + target_rest.mismatch,
                    label_matches)) {
    Scalar weight(0);
    const long a_lo = std::max(0L, r.a - other_a);
    const long a_hi = std::min(r.a, target_rest.match);
    const long b_lo = std::max(0L, r.b - other_b);
    const long b_hi = std::min(r.b, target_rest.mismatch);
    for (long a = a_lo; a <= a_hi; ++a) {
      for (long b = b_lo; b <= b_hi; ++b) {
        weight += preceding(r.a - a, r.b - b) * inner(a, b);
      }
    }
    value += weight * Ops::from_money(r.delta);
  }
  return value;
}

template <class Scalar>
Scalar owen_frequency_single(std::span<const CoalitionTally> others,
                             const CoalitionTally& target_rest,
                             const FrequencyValueFunction& vf, bool label_matches) {
  return owen_frequency_single<Scalar>(owen_precede_distribution<Scalar>(others),
                                       target_rest, vf, label_matches);
}

// Per-example Owen values summed over queries. Coalitions without in-bin
// members are left out of the DP; they never change the preceding counts.
template <class Scalar>
ValueTable<Scalar> owen_frequency_values(const Dataset& data,
                                         const CoalitionStructure& coalitions,
                                         const std::vector<Query>& queries,
                                         std::span<const FrequencyValueFunction> vfs,
                                         const ReportOptions& options = {}) {
  data.validate_frequency();
  validate_query_labels(data, queries);
  const std::vector<std::size_t> owner = coalitions.membership(data);
  const std::size_t m = coalitions.size();
  ValueTable<Scalar> table(data.size());
  std::map<std::tuple<std::size_t, BinId, Label, bool, std::size_t>, Scalar> cache;
  for (const Query& q : queries) {
    detail::require_known_bin(data, q);
    const FrequencyValueFunction& vf = detail::value_function_for(vfs, q);
    std::vector<CoalitionTally> tallies(m);
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto& e = data.examples[i];
      if (*e.bin != *q.bin) continue;
      if (e.label == q.label) {
        ++tallies[owner[i]].match;
      } else {
        ++tallies[owner[i]].mismatch;
      }
    }
    std::map<std::size_t, PrecedeDistribution<Scalar>> preceding;
    auto compute = [&](std::size_t c, bool matches) {
      auto it = preceding.find(c);
      if (it == preceding.end()) {
        std::vector<CoalitionTally> others;
        for (std::size_t h = 0; h < m; ++h) {
          if (h != c && tallies[h] != CoalitionTally{}) others.push_back(tallies[h]);
        }
        it = preceding.emplace(c, owen_precede_distribution<Scalar>(others)).first;
      }
      CoalitionTally rest = tallies[c];
      if (matches) {
        --rest.match;
      } else {
        --rest.mismatch;
      }
      return owen_frequency_single<Scalar>(it->second, rest, vf, matches);
    };
    std::vector<Scalar> values(data.size(), Scalar(0));
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto& e = data.examples[i];
      if (*e.bin != *q.bin) continue;
      const bool matches = e.label == q.label;
      if (!options.cache) {
        values[i] = compute(owner[i], matches);
        continue;
      }
      auto key = std::make_tuple(owner[i], *q.bin, q.label, matches, q.value_function);
      auto it = cache.find(key);
      if (it == cache.end()) it = cache.emplace(std::move(key), compute(owner[i], matches)).first;
      values[i] = it->second;
    }
    table.add_query(std::move(values), options.per_query);
  }
  return table;
}

}  // namespace dividend

#endif  // DIVIDEND_FREQ_OWEN_HPP
