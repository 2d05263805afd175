#ifndef DIVIDEND_VALUE_TABLE_HPP
#define DIVIDEND_VALUE_TABLE_HPP

#include <cstddef>
#include <vector>

namespace dividend {

// Per-example values by dataset position, optionally broken down per query.
template <class Scalar>
struct ValueTable {
  std::vector<Scalar> totals;
  std::vector<std::vector<Scalar>> per_query;  // [query][example], when kept

  explicit ValueTable(std::size_t examples = 0) : totals(examples, Scalar(0)) {}

  // Adds one query's values; totals accumulate in query order.
  void add_query(std::vector<Scalar> values, bool keep) {
    for (std::size_t i = 0; i < totals.size(); ++i) totals[i] += values[i];
    if (keep) per_query.push_back(std::move(values));
  }
};

struct ReportOptions {
  bool per_query = false;
  // Reuse one value per equivalence class of (bin, labels, coalition).
  bool cache = true;
};

}  // namespace dividend

#endif  // DIVIDEND_VALUE_TABLE_HPP
