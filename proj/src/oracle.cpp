#include "dividend/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace dividend {
namespace {

std::vector<bool> members_of(std::uint64_t mask, int n) {
  std::vector<bool> members(n);
  for (int p = 0; p < n; ++p) members[p] = (mask >> p) & 1U;
  return members;
}

BigInt factorial(long n) {
  BigInt f = 1;
  for (long i = 2; i <= n; ++i) f *= i;
  return f;
}

class MemoGame {
 public:
  explicit MemoGame(const CharacteristicGame& game) : game_(game) {}

  const Rational& operator()(std::uint64_t mask) {
    auto it = memo_.find(mask);
    if (it == memo_.end()) {
      it = memo_.emplace(mask, game_.value_of(members_of(mask, game_.player_count))).first;
    }
    return it->second;
  }

 private:
  const CharacteristicGame& game_;
  std::unordered_map<std::uint64_t, Rational> memo_;
};

}  // namespace

std::vector<Rational> exact_shapley_all(const CharacteristicGame& game,
                                        const OracleGuard& guard) {
  const int n = game.player_count;
  if (n > guard.max_players && !guard.override) {
    throw GuardRefusal("exact Shapley enumeration refused for " + std::to_string(n) +
                       " players (limit " + std::to_string(guard.max_players) +
                       "); an explicit override is required");
  }
  if (n > 24) throw GuardRefusal("exact Shapley enumeration supports at most 24 players");
  if (n == 0) return {};

  const std::uint64_t subsets = std::uint64_t{1} << n;
  std::vector<Rational> value(subsets);
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    value[mask] = game.value_of(members_of(mask, n));
  }

  // count[p * subsets + mask]: orderings in which exactly `mask` precedes p.
  std::vector<std::uint64_t> count(static_cast<std::size_t>(n) * subsets, 0);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  do {
    std::uint64_t prefix = 0;
    for (int p : order) {
      ++count[static_cast<std::size_t>(p) * subsets + prefix];
      prefix |= std::uint64_t{1} << p;
    }
  } while (std::next_permutation(order.begin(), order.end()));

  const BigInt orderings = factorial(n);
  std::vector<Rational> result(n);
  for (int p = 0; p < n; ++p) {
    const std::uint64_t bit = std::uint64_t{1} << p;
    Rational sum(0);
    for (std::uint64_t mask = 0; mask < subsets; ++mask) {
      const std::uint64_t c = count[static_cast<std::size_t>(p) * subsets + mask];
      if (c == 0) continue;
      sum += Rational(BigInt(c)) * (value[mask | bit] - value[mask]);
    }
    result[p] = sum / Rational(orderings);
  }
  return result;
}

Rational exact_shapley(const CharacteristicGame& game, int player,
                       const OracleGuard& guard) {
  if (player < 0 || player >= game.player_count) {
    throw PreconditionError("exact_shapley: player out of range");
  }
  return exact_shapley_all(game, guard)[player];
}

Rational exact_owen(const CharacteristicGame& game,
                    const std::vector<std::vector<int>>& coalitions, int player,
                    const OracleGuard& guard) {
  const int n = game.player_count;
  if (n > 62) throw GuardRefusal("exact Owen enumeration supports at most 62 players");
  const int m = static_cast<int>(coalitions.size());
  std::vector<int> owner(n, -1);
  int largest = 0;
  for (int c = 0; c < m; ++c) {
    largest = std::max(largest, static_cast<int>(coalitions[c].size()));
    for (int p : coalitions[c]) {
      if (p < 0 || p >= n || owner[p] != -1) {
        throw PreconditionError("exact_owen: coalitions must partition the players");
      }
      owner[p] = c;
    }
  }
  if (std::find(owner.begin(), owner.end(), -1) != owner.end()) {
    throw PreconditionError("exact_owen: coalitions must partition the players");
  }
  if (!guard.override &&
      (m > guard.max_coalitions || largest > guard.max_coalition_size)) {
    throw GuardRefusal("exact Owen enumeration refused for " + std::to_string(m) +
                       " coalitions with up to " + std::to_string(largest) +
                       " members; an explicit override is required");
  }
  if (player < 0 || player >= n) throw PreconditionError("exact_owen: player out of range");

  MemoGame v(game);
  const int home = owner[player];
  std::vector<std::uint64_t> coalition_mask(m, 0);
  for (int c = 0; c < m; ++c) {
    for (int p : coalitions[c]) coalition_mask[c] |= std::uint64_t{1} << p;
  }
  const std::uint64_t bit = std::uint64_t{1} << player;

  std::unordered_map<std::uint64_t, std::uint64_t> count;
  std::vector<int> outer(m);
  std::iota(outer.begin(), outer.end(), 0);
  std::vector<int> inner_base = coalitions[home];
  std::sort(inner_base.begin(), inner_base.end());
  do {
    std::uint64_t before = 0;
    for (int c : outer) {
      if (c == home) break;
      before |= coalition_mask[c];
    }
    std::vector<int> inner = inner_base;
    do {
      std::uint64_t prefix = before;
      for (int p : inner) {
        if (p == player) break;
        prefix |= std::uint64_t{1} << p;
      }
      ++count[prefix];
    } while (std::next_permutation(inner.begin(), inner.end()));
  } while (std::next_permutation(outer.begin(), outer.end()));

  // Deterministic combination order.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> terms(count.begin(), count.end());
  std::sort(terms.begin(), terms.end());
  Rational sum(0);
  for (const auto& [mask, c] : terms) {
    sum += Rational(BigInt(c)) * (v(mask | bit) - v(mask));
  }
  return sum / Rational(factorial(m) * factorial(static_cast<long>(inner_base.size())));
}

std::vector<Rational> exact_owen_all(const CharacteristicGame& game,
                                     const std::vector<std::vector<int>>& coalitions,
                                     const OracleGuard& guard) {
  std::vector<Rational> result(game.player_count);
  for (int p = 0; p < game.player_count; ++p) {
    result[p] = exact_owen(game, coalitions, p, guard);
  }
  return result;
}

PermutationSampler::PermutationSampler(std::uint64_t seed) : engine_(seed) {}

std::uint64_t PermutationSampler::below(std::uint64_t bound) {
  if (bound == 0) throw PreconditionError("PermutationSampler::below: zero bound");
  // Values under `threshold` would over-represent small residues.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = engine_();
    if (r >= threshold) return r % bound;
  }
}

std::vector<int> PermutationSampler::permutation(int n) {
  std::vector<int> order;
  order.reserve(n);
  for (int e = 0; e < n; ++e) {
    const auto slot = static_cast<std::ptrdiff_t>(below(static_cast<std::uint64_t>(e) + 1));
    order.insert(order.begin() + slot, e);
  }
  return order;
}

McEstimate mc_shapley(const CharacteristicGame& game, int player, std::size_t samples,
                      std::uint64_t seed) {
  if (samples < 2) throw PreconditionError("mc_shapley: need at least two samples");
  if (player < 0 || player >= game.player_count) {
    throw PreconditionError("mc_shapley: player out of range");
  }
  PermutationSampler sampler(seed);
  const int n = game.player_count;
  double mean = 0;
  double m2 = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    const std::vector<int> order = sampler.permutation(n);
    std::vector<bool> members(n, false);
    for (int p : order) {
      if (p == player) break;
      members[p] = true;
    }
    const Rational without = game.value_of(members);
    members[player] = true;
    const double marginal = (game.value_of(members) - without).convert_to<double>();
    // Welford update.
    const double delta = marginal - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (marginal - mean);
  }
  const double variance = m2 / static_cast<double>(samples - 1);
  return {mean, std::sqrt(variance / static_cast<double>(samples)), samples, seed};
}

CharacteristicGame frequency_game(const Dataset& data, const std::vector<Query>& queries,
                                  std::span<const FrequencyValueFunction> vfs) {
  data.validate_frequency();
  std::vector<FrequencyValueFunction> functions(vfs.begin(), vfs.end());
  for (const Query& q : queries) {
    if (!q.bin) throw InputError("frequency query has no bin");
    if (q.value_function >= functions.size()) {
      throw InputError("query refers to a missing value function");
    }
  }
  return {static_cast<int>(data.size()),
          [data, queries, functions](const std::vector<bool>& members) {
            Rational total(0);
            for (const Query& q : queries) {
              long a = 0;
              long b = 0;
              for (std::size_t p = 0; p < data.size(); ++p) {
                if (!members[p] || *data.examples[p].bin != *q.bin) continue;
                if (data.examples[p].label == q.label) {
                  ++a;
                } else {
                  ++b;
                }
              }
              total += Rational(functions[q.value_function](a, b));
            }
            return total;
          }};
}

CharacteristicGame knn_game(const Dataset& data, const std::vector<Query>& queries,
                            const KnnConfig& config) {
  validate_k(config.k);
  data.validate_knn();
  std::vector<RankedNeighborhood> rankings;
  for (const Query& q : queries) {
    if (!q.features) throw InputError("k-NN query has no features");
    rankings.push_back(rank_by_distance(data, *q.features, q.label, config.metric));
  }
  return {static_cast<int>(data.size()),
          [rankings, k = config.k, ov = config.values](const std::vector<bool>& members) {
            Rational total(0);
            for (const auto& r : rankings) total += Rational(knn_subset_value(members, r, k, ov));
            return total;
          }};
}

CharacteristicGame knn_game(const RankedNeighborhood& ranking, int k,
                            const OutcomeValues& values) {
  validate_k(k);
  return {static_cast<int>(ranking.size()),
          [ranking, k, values](const std::vector<bool>& members) {
            return Rational(knn_subset_value(members, ranking, k, values));
          }};
}

std::vector<std::vector<int>> coalition_players(const Dataset& data,
                                                const CoalitionStructure& coalitions) {
  const std::vector<std::size_t> owner = coalitions.membership(data);
  std::vector<std::vector<int>> players(coalitions.size());
  for (std::size_t p = 0; p < owner.size(); ++p) {
    players[owner[p]].push_back(static_cast<int>(p));
  }
  return players;
}

}  // namespace dividend
