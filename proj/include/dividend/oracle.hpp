#ifndef DIVIDEND_ORACLE_HPP
#define DIVIDEND_ORACLE_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "dividend/combinatorics.hpp"
#include "dividend/knn_shapley.hpp"
#include "dividend/model.hpp"

namespace dividend {

// A cooperative game on players 0..player_count-1. `value_of` receives a
// membership vector of length player_count and must be deterministic.
struct CharacteristicGame {
  int player_count = 0;
  std::function<Rational(const std::vector<bool>&)> value_of;
};

struct OracleGuard {
  int max_players = 10;     // exact Shapley
  int max_coalitions = 5;   // exact Owen
  int max_coalition_size = 5;
  bool override = false;
};

// Mean marginal contribution over all n! orderings. Throws GuardRefusal when
// the game exceeds the guard and no override is given.
Rational exact_shapley(const CharacteristicGame& game, int player,
                       const OracleGuard& guard = {});
std::vector<Rational> exact_shapley_all(const CharacteristicGame& game,
                                        const OracleGuard& guard = {});

// Nested mean over orderings of the coalitions and orderings of the
// player's own coalition. `coalitions` must partition the players.
Rational exact_owen(const CharacteristicGame& game,
                    const std::vector<std::vector<int>>& coalitions, int player,
                    const OracleGuard& guard = {});
std::vector<Rational> exact_owen_all(const CharacteristicGame& game,
                                     const std::vector<std::vector<int>>& coalitions,
                                     const OracleGuard& guard = {});

// Fixture-stable generator: std::mt19937_64 output (fully specified by the
// standard) with rejection sampling for bounded integers.
class PermutationSampler {
 public:
  static constexpr int kVersion = 1;

  explicit PermutationSampler(std::uint64_t seed);

  // Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  // Uniform permutation of 0..n-1 built by inserting each element at a
  // uniformly chosen slot of the ordering built so far.
  std::vector<int> permutation(int n);

 private:
  std::mt19937_64 engine_;
};

struct McEstimate {
  double estimate = 0;
  double standard_error = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const McEstimate&, const McEstimate&) = default;
};

McEstimate mc_shapley(const CharacteristicGame& game, int player, std::size_t samples,
                      std::uint64_t seed);

// Game whose value is the summed frequency-rule value over the queries.
CharacteristicGame frequency_game(const Dataset& data, const std::vector<Query>& queries,
                                  std::span<const FrequencyValueFunction> vfs);
// Game whose value is the summed k-NN outcome value over the queries.
CharacteristicGame knn_game(const Dataset& data, const std::vector<Query>& queries,
                            const KnnConfig& config);
// Same, for a single query given as an explicit ranking.
CharacteristicGame knn_game(const RankedNeighborhood& ranking, int k,
                            const OutcomeValues& values);

// Coalition structure as player-index lists.
std::vector<std::vector<int>> coalition_players(const Dataset& data,
                                                const CoalitionStructure& coalitions);

}  // namespace dividend

#endif  // DIVIDEND_ORACLE_HPP
