#ifndef DIVIDEND_MODEL_HPP
#define DIVIDEND_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dividend/errors.hpp"

namespace dividend {

using Money = double;
using ExampleId = std::int64_t;
using Label = std::string;
using BinId = std::string;
using CoalitionId = std::string;

struct InSampleExample {
  ExampleId id = 0;
  Label label;
  std::optional<BinId> bin;
  std::optional<Eigen::VectorXd> features;
  std::optional<CoalitionId> coalition;
};

struct Dataset {
  std::vector<InSampleExample> examples;

  std::size_t size() const { return examples.size(); }
  // Distinct label symbols in order of first appearance.
  std::vector<Label> label_symbols() const;
  // Throws InputError on duplicate ids or more than two label symbols.
  void validate() const;
  void validate_frequency() const;
  void validate_knn() const;
  std::optional<std::size_t> index_of(ExampleId id) const;
};

struct Query {
  std::optional<BinId> bin;
  std::optional<Eigen::VectorXd> features;
  Label label;
  // Index into the value-function list supplied alongside the queries
  // (frequency mode); 0 is the run's default.
  std::size_t value_function = 0;
};

// Throws InputError when a query label is not one of the dataset's symbols
// (a dataset with a single symbol admits one extra symbol).
void validate_query_labels(const Dataset& data, const std::vector<Query>& queries);

struct OutcomeValues {
  Money correct = 0;
  Money wrong = 0;
  Money none = 0;
};

OutcomeValues operator+(const OutcomeValues& x, const OutcomeValues& y);
OutcomeValues operator*(double c, const OutcomeValues& x);

// v(a, b): value of the action for a query whose bin holds a examples that
// carry the query's label and b that do not.
class FrequencyValueFunction {
 public:
  using Table = std::map<std::pair<long, long>, Money>;

  static FrequencyValueFunction majority(Money correct, Money wrong, Money none);
  static FrequencyValueFunction majority(const OutcomeValues& values);
  // A table must resolve (0, 0) through an entry or the default.
  static FrequencyValueFunction table(Table entries,
                                      std::optional<Money> fallback = std::nullopt);

  bool is_majority() const { return is_majority_; }
  const OutcomeValues& majority_values() const { return majority_; }
  const Table& entries() const { return entries_; }
  const std::optional<Money>& fallback() const { return fallback_; }

  Money operator()(long a, long b) const;

 private:
  FrequencyValueFunction() = default;

  bool is_majority_ = true;
  OutcomeValues majority_;
  Table entries_;
  std::optional<Money> fallback_;
};

Money frequency_value(const FrequencyValueFunction& vf, long a, long b);

// v(a + 1, b) - v(a, b) when the added example carries the query label,
// v(a, b + 1) - v(a, b) otherwise.
Money delta_value(const FrequencyValueFunction& vf, long a, long b,
                  bool label_matches);

// Partition of example ids into coalitions, kept in order of first
// appearance of each coalition id.
class CoalitionStructure {
 public:
  CoalitionStructure() = default;
  explicit CoalitionStructure(
      std::vector<std::pair<CoalitionId, std::vector<ExampleId>>> groups);

  static CoalitionStructure from_dataset(const Dataset& data);
  static CoalitionStructure grand(const Dataset& data);
  static CoalitionStructure singletons(const Dataset& data);

  std::size_t size() const { return groups_.size(); }
  const std::vector<std::pair<CoalitionId, std::vector<ExampleId>>>& groups() const {
    return groups_;
  }

  // Throws InputError unless the groups partition the dataset's ids.
  void validate(const Dataset& data) const;
  // Coalition index of every example, by dataset position.
  std::vector<std::size_t> membership(const Dataset& data) const;

 private:
  std::vector<std::pair<CoalitionId, std::vector<ExampleId>>> groups_;
};

struct BinTally {
  long n = 0;
  long n_match = 0;
  long n_mismatch = 0;

  friend bool operator==(const BinTally&, const BinTally&) = default;
};

BinTally tally_bin(const Dataset& data, const BinId& bin, const Label& query_label);

// Any real function of (example input, query input); need not be symmetric.
using Metric = std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>;

Metric euclidean_metric();
Metric metric_from_name(const std::string& name);

// Examples in ascending distance to a query; exact ties go to the smaller id.
struct RankedNeighborhood {
  std::vector<std::size_t> order;   // dataset positions, nearest first
  std::vector<bool> matches;        // label == query label, by rank
  std::vector<long> prefix_match;   // a_j: matches strictly before rank j
  std::vector<long> prefix_mismatch;

  std::size_t size() const { return order.size(); }
  std::vector<ExampleId> ids(const Dataset& data) const;
};

RankedNeighborhood rank_by_distance(const Dataset& data,
                                    const Eigen::VectorXd& query_features,
                                    const Label& query_label, const Metric& metric);

// Rebuilds a neighborhood from an explicit order; used when distances are
// given directly.
RankedNeighborhood neighborhood_from_order(std::vector<std::size_t> order,
                                           std::vector<bool> match_by_example);

// Throws ConfigError unless k is odd and positive.
void validate_k(int k);

// Characteristic function of the k-NN game: v_none below k members, else the
// outcome of a majority vote among the k members nearest the query.
// `members` is indexed by dataset position.
Money knn_subset_value(const std::vector<bool>& members,
                       const RankedNeighborhood& ranking, int k,
                       const OutcomeValues& values);

}  // namespace dividend

#endif  // DIVIDEND_MODEL_HPP
