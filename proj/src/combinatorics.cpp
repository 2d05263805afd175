#include "dividend/combinatorics.hpp"

#include <gmp.h>

#include <algorithm>
#include <cmath>

#include "dividend/errors.hpp"

namespace dividend {

std::string to_string(NumericMode mode) {
  return mode == NumericMode::exact ? "exact" : "float";
}

NumericMode numeric_mode_from_string(const std::string& name) {
  if (name == "exact") return NumericMode::exact;
  if (name == "float") return NumericMode::floating;
  throw ConfigError("unknown numeric mode '" + name + "' (expected exact|float)");
}

BigInt binom(long a, long b) {
  if (b < 0 || b > a) return BigInt(0);
  BigInt result;
  mpz_bin_uiui(result.backend().data(), static_cast<unsigned long>(a),
               static_cast<unsigned long>(b));
  return result;
}

double log_binom(long a, long b) {
  if (b < 0 || b > a) return -std::numeric_limits<double>::infinity();
  const long k = std::min(b, a - b);
  // Short products are summed term by term; lgamma differences lose
  // absolute precision for large a, so the long form runs in extended
  // precision.
  if (k <= 64) {
    long double sum = 0.0L;
    for (long i = 0; i < k; ++i) {
      sum += std::log(static_cast<long double>(a - i)) -
             std::log(static_cast<long double>(i + 1));
    }
    return static_cast<double>(sum);
  }
  const long double la = static_cast<long double>(a);
  const long double lk = static_cast<long double>(k);
  return static_cast<double>(std::lgamma(la + 1.0L) - std::lgamma(lk + 1.0L) -
                             std::lgamma(la - lk + 1.0L));
}

Rational precede_probability(std::span<const long> set_sizes,
                             std::span<const long> chosen) {
  if (set_sizes.size() != chosen.size()) {
    throw PreconditionError("precede_probability: size mismatch");
  }
  long t = 1;
  long u = 0;
  BigInt ways = 1;
  for (std::size_t h = 0; h < set_sizes.size(); ++h) {
    if (chosen[h] < 0 || chosen[h] > set_sizes[h]) {
      throw PreconditionError("precede_probability: chosen count out of range");
    }
    t += set_sizes[h];
    u += chosen[h];
    ways *= binom(set_sizes[h], chosen[h]);
  }
  return Rational(ways, BigInt(t) * binom(t - 1, u));
}

}  // namespace dividend
