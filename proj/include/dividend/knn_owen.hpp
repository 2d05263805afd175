#ifndef DIVIDEND_KNN_OWEN_HPP
#define DIVIDEND_KNN_OWEN_HPP

#include <algorithm>
#include <array>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "dividend/combinatorics.hpp"
#include "dividend/freq_owen.hpp"
#include "dividend/knn_shapley.hpp"
#include "dividend/model.hpp"
#include "dividend/value_table.hpp"

namespace dividend {

// Coalition-order distribution for the k-NN Owen terms, truncated to
// a <= caps.match, b <= caps.mismatch. With PrecedeBase::first_holds the
// first coalition holds the displaced voter, and only orderings in which it
// precedes the target carry mass (total 1/2 before truncation).
template <class Scalar>
PrecedeDistribution<Scalar> knn_owen_distribution(std::span<const CoalitionTally> counts,
                                                  PrecedeBase base, CountCaps caps) {
  return coalition_precede_dp<Scalar>(counts, base, caps);
}

namespace detail {

// Sum over the ways the target coalition can supply a matching and b
// mismatching predecessors of example i so that, with the preceding
// coalitions, the k - 1 voters nearer than the displaced voter j are tied.
template <class Scalar>
Scalar knn_change_weight(const PrecedeDistribution<Scalar>& q, long a_m, long b_m,
                         long half, bool j_in_target) {
  using Ops = ScalarOps<Scalar>;
  Scalar total(0);
  for (long a = 0; a <= std::min(a_m, half); ++a) {
    for (long b = 0; b <= std::min(b_m, half); ++b) {
      const long qa = half - a;
      const long qb = half - b;
      if (qa >= q.rows() || qb >= q.cols()) continue;
      if (q(qa, qb) == Scalar(0)) continue;
      const Scalar w =
          j_in_target
              ? Ops::binomial_fraction({{a_m, a}, {b_m, b}}, {{a_m + b_m + 1, a + b + 1}},
                                       a_m + b_m + 2)
              : Ops::binomial_fraction({{a_m, a}, {b_m, b}}, {{a_m + b_m, a + b}},
                                       a_m + b_m + 1);
      total += q(qa, qb) * w;
    }
  }
  return total;
}

inline Money label_swing(const OutcomeValues& ov, bool label_matches) {
  return label_matches ? ov.correct - ov.wrong : ov.wrong - ov.correct;
}

}  // namespace detail

// Change portion of the Owen value of the example at rank `i_rank`, summed
// directly over every farther example of the other label. `owner` maps
// dataset positions to coalition indices in [0, m).
template <class Scalar>
Scalar knn_owen_change(std::size_t i_rank, const RankedNeighborhood& ranking,
                       const std::vector<std::size_t>& owner, std::size_t m, int k,
                       const OutcomeValues& ov) {
  using Ops = ScalarOps<Scalar>;
  validate_k(k);
  const long half = (k - 1) / 2;
  const std::size_t n = ranking.size();
  const std::size_t target = owner[ranking.order[i_rank]];
  const bool ui = ranking.matches[i_rank];
  Scalar total(0);
  for (std::size_t j = i_rank + 1; j < n; ++j) {
    if (ranking.matches[j] == ui) continue;
    std::vector<CoalitionTally> counts(m);
    for (std::size_t r = 0; r < j; ++r) {
      if (r == i_rank) continue;
      auto& t = counts[owner[ranking.order[r]]];
      if (ranking.matches[r]) {
        ++t.match;
      } else {
        ++t.mismatch;
      }
    }
    const std::size_t cj = owner[ranking.order[j]];
    const bool j_in_target = cj == target;
    std::vector<CoalitionTally> others;
    if (!j_in_target) others.push_back(counts[cj]);
    for (std::size_t h = 0; h < m; ++h) {
      if (h != target && h != cj) others.push_back(counts[h]);
    }
    const auto q = knn_owen_distribution<Scalar>(
        others, j_in_target ? PrecedeBase::none : PrecedeBase::first_holds,
        CountCaps{half, half});
    total += detail::knn_change_weight<Scalar>(q, counts[target].match,
                                               counts[target].mismatch, half, j_in_target);
  }
  return total * Ops::from_money(detail::label_swing(ov, ui));
}

// Creation portion: the example arrives as the k-th voter. `target_rest` is
// the target coalition's match/mismatch counts without the example and
// `others` the counts of every other coalition.
template <class Scalar>
Scalar knn_owen_creation(std::span<const CoalitionTally> others,
                         const CoalitionTally& target_rest, bool label_matches, int k,
                         const OutcomeValues& ov) {
  using Ops = ScalarOps<Scalar>;
  validate_k(k);
  const auto q = knn_owen_distribution<Scalar>(others, PrecedeBase::none,
                                               CountCaps{k - 1, k - 1});
  const long a_m = target_rest.match;
  const long b_m = target_rest.mismatch;
  const long size = a_m + b_m + 1;
  const long self = label_matches ? 1 : 0;
  const Scalar to_wrong = Ops::from_money(ov.wrong) - Ops::from_money(ov.none);
  const Scalar to_right = Ops::from_money(ov.correct) - Ops::from_money(ov.none);
  Scalar total(0);
  for (long a = 0; a < q.rows(); ++a) {
    for (long b = 0; b < q.cols() && a + b <= k - 1; ++b) {
      if (q(a, b) == Scalar(0)) continue;
      const long inside = k - 1 - a - b;
      for (long a2 = 0; a2 <= std::min(inside, a_m); ++a2) {
        const long b2 = inside - a2;
        if (b2 > b_m) continue;
        const Scalar w = Ops::binomial_fraction({{a_m, a2}, {b_m, b2}},
                                                {{size - 1, inside}}, size);
        const bool correct = 2 * (a + a2 + self) > k;
        total += q(a, b) * w * (correct ? to_right : to_wrong);
      }
    }
  }
  return total;
}

// Owen values for all examples and queries. Per query the change portion is
// accumulated as suffix sums over rank: the term for a displaced voter j
// depends on the displacing example only through its coalition and label.
template <class Scalar>
ValueTable<Scalar> knn_owen_values(const Dataset& data,
                                   const CoalitionStructure& coalitions,
                                   const std::vector<Query>& queries,
                                   const KnnConfig& config,
                                   const ReportOptions& options = {}) {
  using Ops = ScalarOps<Scalar>;
  using Key = std::pair<bool, std::vector<std::pair<long, long>>>;
  validate_k(config.k);
  data.validate_knn();
  validate_query_labels(data, queries);
  const std::vector<std::size_t> owner = coalitions.membership(data);
  const std::size_t m = coalitions.size();
  const std::size_t n = data.size();
  const int k = config.k;
  const long half = (k - 1) / 2;
  const std::array<Scalar, 2> swing{
      Ops::from_money(detail::label_swing(config.values, false)),
      Ops::from_money(detail::label_swing(config.values, true))};

  // Counts above a cap can only push a state past it, so they are all
  // equivalent for the truncated DP.
  auto capped = [half](const CoalitionTally& t) {
    return (t.match > half || t.mismatch > half) ? std::pair{half + 1, half + 1}
                                                 : std::pair{t.match, t.mismatch};
  };
  std::map<Key, PrecedeDistribution<Scalar>> dp_cache;
  auto change_distribution = [&](Key key) -> const PrecedeDistribution<Scalar>& {
    auto it = dp_cache.find(key);
    if (it == dp_cache.end()) {
      std::vector<CoalitionTally> tallies;
      for (const auto& [a, b] : key.second) tallies.push_back({a, b});
      auto dist = knn_owen_distribution<Scalar>(
          tallies, key.first ? PrecedeBase::first_holds : PrecedeBase::none,
          CountCaps{half, half});
      it = dp_cache.emplace(std::move(key), std::move(dist)).first;
    }
    return it->second;
  };

  ValueTable<Scalar> table(n);
  for (const Query& q : queries) {
    if (!q.features) throw InputError("k-NN query has no features");
    const RankedNeighborhood ranking =
        rank_by_distance(data, *q.features, q.label, config.metric);
    std::vector<CoalitionTally> totals(m);
    for (std::size_t r = 0; r < n; ++r) {
      auto& t = totals[owner[ranking.order[r]]];
      if (ranking.matches[r]) {
        ++t.match;
      } else {
        ++t.mismatch;
      }
    }

    // creation[c][u]
    std::vector<std::array<Scalar, 2>> creation(m, {Scalar(0), Scalar(0)});
    for (std::size_t c = 0; c < m; ++c) {
      std::vector<CoalitionTally> others;
      for (std::size_t h = 0; h < m; ++h) {
        if (h != c && totals[h] != CoalitionTally{}) others.push_back(totals[h]);
      }
      std::sort(others.begin(), others.end());
      for (int u = 0; u < 2; ++u) {
        CoalitionTally rest = totals[c];
        long& own = u ? rest.match : rest.mismatch;
        if (own == 0) continue;
        --own;
        creation[c][u] = knn_owen_creation<Scalar>(others, rest, u == 1, k, config.values);
      }
    }

    // term[j][c * 2 + u]: contribution of displaced voter j to an example of
    // coalition c and label class u ranked before j.
    std::vector<std::vector<Scalar>> term(n);
    std::vector<CoalitionTally> before(m);
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t cj = owner[ranking.order[j]];
      const int uj = ranking.matches[j] ? 1 : 0;
      const int u = 1 - uj;
      term[j].assign(2 * m, Scalar(0));
      for (std::size_t c = 0; c < m; ++c) {
        CoalitionTally rest = before[c];
        long& own = u ? rest.match : rest.mismatch;
        if (own == 0) continue;
        --own;
        const bool j_in_target = cj == c;
        Key key{!j_in_target, {}};
        if (!j_in_target) key.second.push_back(capped(before[cj]));
        const std::size_t first_sorted = key.second.size();
        for (std::size_t h = 0; h < m; ++h) {
          if (h == c || h == cj || before[h] == CoalitionTally{}) continue;
          key.second.push_back(capped(before[h]));
        }
        std::sort(key.second.begin() + first_sorted, key.second.end());
        const auto& dist = change_distribution(std::move(key));
        term[j][2 * c + u] =
            detail::knn_change_weight<Scalar>(dist, rest.match, rest.mismatch, half,
                                              j_in_target) *
            swing[u];
      }
      if (uj) {
        ++before[cj].match;
      } else {
        ++before[cj].mismatch;
      }
    }

    std::vector<Scalar> values(n, Scalar(0));
    std::vector<Scalar> suffix(2 * m, Scalar(0));
    for (std::size_t r = n; r-- > 0;) {
      const std::size_t pos = ranking.order[r];
      const std::size_t slot = 2 * owner[pos] + (ranking.matches[r] ? 1 : 0);
      values[pos] = creation[owner[pos]][ranking.matches[r] ? 1 : 0] + suffix[slot];
      for (std::size_t s = 0; s < 2 * m; ++s) suffix[s] += term[r][s];
    }
    table.add_query(std::move(values), options.per_query);
  }
  return table;
}

}  // namespace dividend

#endif  // DIVIDEND_KNN_OWEN_HPP
