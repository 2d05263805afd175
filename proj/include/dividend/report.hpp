#ifndef DIVIDEND_REPORT_HPP
#define DIVIDEND_REPORT_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dividend/combinatorics.hpp"
#include "dividend/model.hpp"
#include "dividend/value_table.hpp"

namespace dividend {

struct ValueReport {
  struct Meta {
    std::string method;
    NumericMode numeric = NumericMode::floating;
    std::optional<int> k;
    std::size_t query_count = 0;
    double wall_seconds = 0;
    std::map<std::string, std::string> extra;
  };
  struct ExampleValue {
    ExampleId id = 0;
    double value = 0;
    std::optional<std::string> exact;  // "p/q", exact mode only
    std::optional<CoalitionId> coalition;
    std::optional<double> standard_error;
  };
  struct CoalitionValue {
    CoalitionId id;
    double value = 0;
    std::optional<std::string> exact;
  };
  struct QueryValues {
    std::vector<double> values;       // by example, in report order
    std::vector<std::string> exact;   // empty in float mode
  };

  Meta meta;
  std::vector<ExampleValue> examples;
  std::vector<CoalitionValue> coalitions;
  std::optional<std::vector<QueryValues>> per_query;
};

namespace detail {

inline std::optional<std::string> exact_text(const double&) { return std::nullopt; }
inline std::optional<std::string> exact_text(const Rational& x) { return x.str(); }

}  // namespace detail

// Assembles a report in dataset order. Coalition totals are summed in the
// scalar type, in dataset order, before conversion.
template <class Scalar>
ValueReport build_report(const std::string& method, NumericMode mode, const Dataset& data,
                         const CoalitionStructure* coalitions,
                         const ValueTable<Scalar>& table, std::size_t query_count,
                         std::optional<int> k = std::nullopt) {
  ValueReport report;
  report.meta.method = method;
  report.meta.numeric = mode;
  report.meta.k = k;
  report.meta.query_count = query_count;
  std::vector<std::size_t> owner;
  if (coalitions) owner = coalitions->membership(data);
  for (std::size_t i = 0; i < data.size(); ++i) {
    ValueReport::ExampleValue ev;
    ev.id = data.examples[i].id;
    ev.value = to_double(table.totals[i]);
    ev.exact = detail::exact_text(table.totals[i]);
    if (coalitions) ev.coalition = coalitions->groups()[owner[i]].first;
    report.examples.push_back(std::move(ev));
  }
  if (coalitions) {
    std::vector<Scalar> sums(coalitions->size(), Scalar(0));
    for (std::size_t i = 0; i < data.size(); ++i) sums[owner[i]] += table.totals[i];
    for (std::size_t c = 0; c < coalitions->size(); ++c) {
      report.coalitions.push_back({coalitions->groups()[c].first, to_double(sums[c]),
                                   detail::exact_text(sums[c])});
    }
  }
  if (!table.per_query.empty()) {
    std::vector<ValueReport::QueryValues> per;
    for (const auto& row : table.per_query) {
      ValueReport::QueryValues qv;
      for (const Scalar& x : row) {
        qv.values.push_back(to_double(x));
        if (auto e = detail::exact_text(x)) qv.exact.push_back(*e);
      }
      per.push_back(std::move(qv));
    }
    report.per_query = std::move(per);
  }
  return report;
}

// Throws std::logic_error if a coalition total differs from the sum of its
// members (exactly, in the report's numeric mode).
void verify_coalition_totals(const ValueReport& report);

nlohmann::ordered_json report_to_json(const ValueReport& report);
ValueReport report_from_json(const nlohmann::ordered_json& doc);

std::string report_to_string(const ValueReport& report);
void write_report(const ValueReport& report, const std::string& path);
ValueReport read_report(const std::string& path);

// id,value[,exact][,coalition] rows in report order.
std::string examples_csv(const ValueReport& report);

}  // namespace dividend

#endif  // DIVIDEND_REPORT_HPP
