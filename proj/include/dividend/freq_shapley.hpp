#ifndef DIVIDEND_FREQ_SHAPLEY_HPP
#define DIVIDEND_FREQ_SHAPLEY_HPP

#include <map>
#include <span>
#include <tuple>
#include <vector>

#include "dividend/combinatorics.hpp"
#include "dividend/model.hpp"
#include "dividend/value_table.hpp"

namespace dividend {

// A label-count configuration (a, b) of the other in-bin examples at which
// adding the example changes the action value by `delta`.
struct CriticalPoint {
  long a = 0;
  long b = 0;
  Money delta = 0;

  friend bool operator==(const CriticalPoint&, const CriticalPoint&) = default;
};

using CriticalSet = std::vector<CriticalPoint>;

// Exhaustive scan of [0, size_a] x [0, size_b], in row-major (a, b) order.
CriticalSet critical_set_scan(const FrequencyValueFunction& vf, long size_a,
                              long size_b, bool label_matches);

// Same set as the scan; the majority family only changes value on the two
// diagonals next to a tie, so those are enumerated directly.
CriticalSet critical_set(const FrequencyValueFunction& vf, long size_a, long size_b,
                         bool label_matches);

// Shapley value of one in-bin example for one query. `tally` counts the whole
// bin including the example; `label_matches` is the example's agreement with
// the query label.
template <class Scalar>
Scalar shapley_frequency_single(const BinTally& tally, const FrequencyValueFunction& vf,
                                bool label_matches) {
  using Ops = ScalarOps<Scalar>;
  if (tally.n < 1) throw PreconditionError("shapley_frequency_single: empty bin");
  const long size_a = tally.n_match - (label_matches ? 1 : 0);
  const long size_b = tally.n_mismatch - (label_matches ? 0 : 1);
  if (size_a < 0 || size_b < 0) {
    throw PreconditionError("shapley_frequency_single: example label not in tally");
  }
  Scalar value(0);
  for (const CriticalPoint& r : critical_set(vf, size_a, size_b, label_matches)) {
    value += Ops::binomial_fraction({{size_a, r.a}, {size_b, r.b}},
                                    {{tally.n - 1, r.a + r.b}}, tally.n) *
             Ops::from_money(r.delta);
  }
  return value;
}

namespace detail {

// Throws InputError if the query bin does not occur in the dataset.
inline void require_known_bin(const Dataset& data, const Query& q) {
  if (!q.bin) throw InputError("frequency query has no bin");
  for (const auto& e : data.examples) {
    if (e.bin && *e.bin == *q.bin) return;
  }
  throw InputError("query bin '" + *q.bin + "' is unknown to the bin scheme");
}

inline const FrequencyValueFunction& value_function_for(
    std::span<const FrequencyValueFunction> vfs, const Query& q) {
  if (q.value_function >= vfs.size()) {
    throw InputError("query refers to a missing value function");
  }
  return vfs[q.value_function];
}

}  // namespace detail

// Per-example Shapley values summed over queries. Examples outside a query's
// bin get zero for that query. With caching on, one value is computed per
// (bin, example label, query label, value function) class.
template <class Scalar>
ValueTable<Scalar> shapley_frequency_values(const Dataset& data,
                                            const std::vector<Query>& queries,
                                            std::span<const FrequencyValueFunction> vfs,
                                            const ReportOptions& options = {}) {
  data.validate_frequency();
  validate_query_labels(data, queries);
  ValueTable<Scalar> table(data.size());
  std::map<std::tuple<BinId, Label, bool, std::size_t>, Scalar> cache;
  for (const Query& q : queries) {
    detail::require_known_bin(data, q);
    const FrequencyValueFunction& vf = detail::value_function_for(vfs, q);
    const BinTally tally = tally_bin(data, *q.bin, q.label);
    std::vector<Scalar> values(data.size(), Scalar(0));
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto& e = data.examples[i];
      if (*e.bin != *q.bin) continue;
      const bool matches = e.label == q.label;
      if (!options.cache) {
        values[i] = shapley_frequency_single<Scalar>(tally, vf, matches);
        continue;
      }
      auto key = std::make_tuple(*q.bin, q.label, matches, q.value_function);
      auto it = cache.find(key);
      if (it == cache.end()) {
        it = cache.emplace(std::move(key),
                           shapley_frequency_single<Scalar>(tally, vf, matches))
                 .first;
      }
      values[i] = it->second;
    }
    table.add_query(std::move(values), options.per_query);
  }
  return table;
}

}  // namespace dividend

#endif  // DIVIDEND_FREQ_SHAPLEY_HPP
