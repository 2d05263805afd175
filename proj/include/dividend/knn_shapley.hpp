#ifndef DIVIDEND_KNN_SHAPLEY_HPP
#define DIVIDEND_KNN_SHAPLEY_HPP

#include <array>
#include <vector>

#include "dividend/combinatorics.hpp"
#include "dividend/model.hpp"
#include "dividend/value_table.hpp"

namespace dividend {

struct KnnConfig {
  int k = 1;
  OutcomeValues values;
  Metric metric = euclidean_metric();
};

// Value an example earns by being the k-th arrival, which turns "no decision"
// into a vote. `others_match` is the number of other examples carrying the
// query label. Zero when n < k.
template <class Scalar>
Scalar knn_creation_value(long n, long others_match, bool label_matches, int k,
                          const OutcomeValues& ov) {
  using Ops = ScalarOps<Scalar>;
  validate_k(k);
  if (n < 1) throw PreconditionError("knn_creation_value: n must be positive");
  if (n < k) return Scalar(0);
  const long others_mismatch = n - 1 - others_match;
  const long wrong_max = (k - 1) / 2 - (label_matches ? 1 : 0);
  Scalar wrong(0);
  Scalar right(0);
  for (long a = 0; a <= k - 1; ++a) {
    Scalar w = Ops::binomial_fraction({{others_match, a}, {others_mismatch, k - 1 - a}},
                                      {{n - 1, k - 1}}, n);
    if (a <= wrong_max) {
      wrong += w;
    } else {
      right += w;
    }
  }
  return wrong * Ops::from_money(ov.wrong) + right * Ops::from_money(ov.correct) -
         Ops::from_money(ov.none) / Scalar(n);
}

// Value every example earns by displacing a farther voter of the other label
// and flipping a tied vote, indexed by rank. One reverse sweep keeps a running
// suffix sum per label class of the example doing the displacing.
template <class Scalar>
std::vector<Scalar> knn_change_values_all(const RankedNeighborhood& ranking, int k,
                                          const OutcomeValues& ov) {
  using Ops = ScalarOps<Scalar>;
  validate_k(k);
  const long n = static_cast<long>(ranking.size());
  const long half = (k - 1) / 2;
  const Scalar swing = Ops::from_money(ov.correct) - Ops::from_money(ov.wrong);
  std::vector<Scalar> g(n, Scalar(0));
  // suffix[u]: sum over ranks j > i with label class != u of the precedence
  // weight, where u = 1 means "carries the query label".
  std::array<Scalar, 2> suffix{Scalar(0), Scalar(0)};
  for (long i = n - 2; i >= 0; --i) {
    const long j = i + 1;
    const long aj = ranking.prefix_match[j];
    const long bj = ranking.prefix_mismatch[j];
    const int u_excluded = ranking.matches[j] ? 1 : 0;
    const int u = 1 - u_excluded;
    // Example i of class u is among the a_j + b_j closer examples.
    suffix[u] += Ops::binomial_fraction({{aj - u, half}, {bj - (1 - u), half}},
                                        {{aj + bj, k}}, aj + bj + 1);
    const int ui = ranking.matches[i] ? 1 : 0;
    g[i] = ui ? suffix[1] * swing : suffix[0] * -swing;
  }
  return g;
}

// Shapley values for all examples and queries; each query costs one sort plus
// a linear sweep.
template <class Scalar>
ValueTable<Scalar> knn_shapley_values(const Dataset& data,
                                      const std::vector<Query>& queries,
                                      const KnnConfig& config,
                                      const ReportOptions& options = {}) {
  validate_k(config.k);
  data.validate_knn();
  validate_query_labels(data, queries);
  const long n = static_cast<long>(data.size());
  ValueTable<Scalar> table(data.size());
  for (const Query& q : queries) {
    if (!q.features) throw InputError("k-NN query has no features");
    const RankedNeighborhood ranking =
        rank_by_distance(data, *q.features, q.label, config.metric);
    std::vector<Scalar> values(data.size(), Scalar(0));
    if (n >= config.k) {
      const long total_match =
          n > 0 ? ranking.prefix_match[n - 1] + (ranking.matches[n - 1] ? 1 : 0) : 0;
      const std::array<Scalar, 2> creation{
          knn_creation_value<Scalar>(n, total_match, false, config.k, config.values),
          knn_creation_value<Scalar>(n, total_match - 1, true, config.k, config.values)};
      const std::vector<Scalar> change =
          knn_change_values_all<Scalar>(ranking, config.k, config.values);
      for (long r = 0; r < n; ++r) {
        values[ranking.order[r]] = creation[ranking.matches[r] ? 1 : 0] + change[r];
      }
    }
    table.add_query(std::move(values), options.per_query);
  }
  return table;
}

}  // namespace dividend

#endif  // DIVIDEND_KNN_SHAPLEY_HPP
