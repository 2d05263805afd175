#include "dividend/model.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace dividend {

std::vector<Label> Dataset::label_symbols() const {
  std::vector<Label> symbols;
  for (const auto& e : examples) {
    if (std::find(symbols.begin(), symbols.end(), e.label) == symbols.end()) {
      symbols.push_back(e.label);
    }
  }
  return symbols;
}

void Dataset::validate() const {
  std::unordered_set<ExampleId> seen;
  std::vector<Label> symbols;
  for (const auto& e : examples) {
    if (e.id < 0) throw InputError("negative example id " + std::to_string(e.id));
    if (!seen.insert(e.id).second) {
      throw InputError("duplicate example id " + std::to_string(e.id));
    }
    if (std::find(symbols.begin(), symbols.end(), e.label) == symbols.end()) {
      symbols.push_back(e.label);
      if (symbols.size() > 2) {
        throw InputError("labels must be binary; found third label '" + e.label + "'");
      }
    }
  }
}

void Dataset::validate_frequency() const {
  validate();
  for (const auto& e : examples) {
    if (!e.bin) throw InputError("example " + std::to_string(e.id) + " has no bin");
  }
}

void Dataset::validate_knn() const {
  validate();
  std::optional<Eigen::Index> dim;
  for (const auto& e : examples) {
    if (!e.features) {
      throw InputError("example " + std::to_string(e.id) + " has no features");
    }
    if (dim && e.features->size() != *dim) {
      throw InputError("feature dimension mismatch at example " + std::to_string(e.id));
    }
    dim = e.features->size();
  }
}

std::optional<std::size_t> Dataset::index_of(ExampleId id) const {
  for (std::size_t i = 0; i < examples.size(); ++i) {
    if (examples[i].id == id) return i;
  }
  return std::nullopt;
}

void validate_query_labels(const Dataset& data, const std::vector<Query>& queries) {
  std::vector<Label> symbols = data.label_symbols();
  for (const auto& q : queries) {
    if (std::find(symbols.begin(), symbols.end(), q.label) != symbols.end()) continue;
    if (symbols.size() < 2) {
      symbols.push_back(q.label);
      continue;
    }
    throw InputError("query label '" + q.label + "' is not one of the dataset labels");
  }
}

OutcomeValues operator+(const OutcomeValues& x, const OutcomeValues& y) {
  return {x.correct + y.correct, x.wrong + y.wrong, x.none + y.none};
}

OutcomeValues operator*(double c, const OutcomeValues& x) {
  return {c * x.correct, c * x.wrong, c * x.none};
}

FrequencyValueFunction FrequencyValueFunction::majority(Money correct, Money wrong,
                                                        Money none) {
  return majority(OutcomeValues{correct, wrong, none});
}

FrequencyValueFunction FrequencyValueFunction::majority(const OutcomeValues& values) {
  FrequencyValueFunction vf;
  vf.is_majority_ = true;
  vf.majority_ = values;
  return vf;
}

FrequencyValueFunction FrequencyValueFunction::table(Table entries,
                                                     std::optional<Money> fallback) {
  if (!fallback && !entries.contains({0, 0})) {
    throw InputError("value table must define v(0,0) or a default");
  }
  FrequencyValueFunction vf;
  vf.is_majority_ = false;
  vf.entries_ = std::move(entries);
  vf.fallback_ = fallback;
  return vf;
}

Money FrequencyValueFunction::operator()(long a, long b) const {
  if (a < 0 || b < 0) throw PreconditionError("v(a,b) requires a, b >= 0");
  if (is_majority_) {
    if (a > b) return majority_.correct;
    if (a < b) return majority_.wrong;
    return majority_.none;
  }
  if (auto it = entries_.find({a, b}); it != entries_.end()) return it->second;
  if (fallback_) return *fallback_;
  throw MissingValueError("value table has no entry for (" + std::to_string(a) + "," +
                          std::to_string(b) + ") and no default");
}

Money frequency_value(const FrequencyValueFunction& vf, long a, long b) {
  return vf(a, b);
}

Money delta_value(const FrequencyValueFunction& vf, long a, long b, bool label_matches) {
  return label_matches ? vf(a + 1, b) - vf(a, b) : vf(a, b + 1) - vf(a, b);
}

CoalitionStructure::CoalitionStructure(
    std::vector<std::pair<CoalitionId, std::vector<ExampleId>>> groups)
    : groups_(std::move(groups)) {}

CoalitionStructure CoalitionStructure::from_dataset(const Dataset& data) {
  std::vector<std::pair<CoalitionId, std::vector<ExampleId>>> groups;
  std::unordered_map<CoalitionId, std::size_t> index;
  for (const auto& e : data.examples) {
    if (!e.coalition) {
      throw InputError("example " + std::to_string(e.id) + " has no coalition");
    }
    auto [it, fresh] = index.try_emplace(*e.coalition, groups.size());
    if (fresh) groups.emplace_back(*e.coalition, std::vector<ExampleId>{});
    groups[it->second].second.push_back(e.id);
  }
  return CoalitionStructure(std::move(groups));
}

CoalitionStructure CoalitionStructure::grand(const Dataset& data) {
  std::vector<ExampleId> all;
  for (const auto& e : data.examples) all.push_back(e.id);
  return CoalitionStructure({{"all", std::move(all)}});
}

CoalitionStructure CoalitionStructure::singletons(const Dataset& data) {
  std::vector<std::pair<CoalitionId, std::vector<ExampleId>>> groups;
  for (const auto& e : data.examples) groups.push_back({std::to_string(e.id), {e.id}});
  return CoalitionStructure(std::move(groups));
}

void CoalitionStructure::validate(const Dataset& data) const {
  if (groups_.empty()) throw InputError("coalition structure is empty");
  std::unordered_set<ExampleId> ids;
  for (const auto& e : data.examples) ids.insert(e.id);
  std::unordered_set<ExampleId> covered;
  std::unordered_set<CoalitionId> names;
  for (const auto& [name, members] : groups_) {
    if (!names.insert(name).second) {
      throw InputError("coalition '" + name + "' listed twice");
    }
    for (ExampleId id : members) {
      if (!ids.contains(id)) {
        throw InputError("coalition '" + name + "' names unknown example " +
                         std::to_string(id));
      }
      if (!covered.insert(id).second) {
        throw InputError("example " + std::to_string(id) +
                         " belongs to more than one coalition");
      }
    }
  }
  if (covered.size() != ids.size()) {
    for (ExampleId id : ids) {
      if (!covered.contains(id)) {
        throw InputError("example " + std::to_string(id) + " belongs to no coalition");
      }
    }
  }
}

std::vector<std::size_t> CoalitionStructure::membership(const Dataset& data) const {
  validate(data);
  std::unordered_map<ExampleId, std::size_t> owner;
  for (std::size_t c = 0; c < groups_.size(); ++c) {
    for (ExampleId id : groups_[c].second) owner[id] = c;
  }
  std::vector<std::size_t> result;
  result.reserve(data.size());
  for (const auto& e : data.examples) result.push_back(owner.at(e.id));
  return result;
}

BinTally tally_bin(const Dataset& data, const BinId& bin, const Label& query_label) {
  BinTally t;
  for (const auto& e : data.examples) {
    if (!e.bin || *e.bin != bin) continue;
    ++t.n;
    if (e.label == query_label) {
      ++t.n_match;
    } else {
      ++t.n_mismatch;
    }
  }
  return t;
}

Metric euclidean_metric() {
  return [](const Eigen::VectorXd& x, const Eigen::VectorXd& q) { return (x - q).norm(); };
}

Metric metric_from_name(const std::string& name) {
  if (name == "euclidean") return euclidean_metric();
  throw ConfigError("unknown metric '" + name + "' (available: euclidean)");
}

std::vector<ExampleId> RankedNeighborhood::ids(const Dataset& data) const {
  std::vector<ExampleId> out;
  out.reserve(order.size());
  for (std::size_t pos : order) out.push_back(data.examples[pos].id);
  return out;
}

RankedNeighborhood neighborhood_from_order(std::vector<std::size_t> order,
                                           std::vector<bool> match_by_example) {
  RankedNeighborhood r;
  const std::size_t n = order.size();
  r.matches.resize(n);
  r.prefix_match.resize(n);
  r.prefix_mismatch.resize(n);
  long a = 0;
  long b = 0;
  for (std::size_t j = 0; j < n; ++j) {
    r.prefix_match[j] = a;
    r.prefix_mismatch[j] = b;
    const bool m = match_by_example[order[j]];
    r.matches[j] = m;
    if (m) {
      ++a;
    } else {
      ++b;
    }
  }
  r.order = std::move(order);
  return r;
}

RankedNeighborhood rank_by_distance(const Dataset& data,
                                    const Eigen::VectorXd& query_features,
                                    const Label& query_label, const Metric& metric) {
  const std::size_t n = data.size();
  std::vector<double> distance(n);
  std::vector<bool> match(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& e = data.examples[i];
    if (!e.features || e.features->size() != query_features.size()) {
      throw InputError("feature dimension mismatch between example " +
                       std::to_string(e.id) + " and query");
    }
    distance[i] = metric(*e.features, query_features);
    match[i] = e.label == query_label;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (distance[x] != distance[y]) return distance[x] < distance[y];
    return data.examples[x].id < data.examples[y].id;
  });
  return neighborhood_from_order(std::move(order), std::move(match));
}

void validate_k(int k) {
  if (k < 1) throw ConfigError("k must be positive");
  if (k % 2 == 0) throw ConfigError("k must be odd");
}

Money knn_subset_value(const std::vector<bool>& members,
                       const RankedNeighborhood& ranking, int k,
                       const OutcomeValues& values) {
  validate_k(k);
  int seen = 0;
  int correct = 0;
  for (std::size_t j = 0; j < ranking.size() && seen < k; ++j) {
    if (!members[ranking.order[j]]) continue;
    ++seen;
    if (ranking.matches[j]) ++correct;
  }
  if (seen < k) return values.none;
  return 2 * correct > k ? values.correct : values.wrong;
}

}  // namespace dividend
