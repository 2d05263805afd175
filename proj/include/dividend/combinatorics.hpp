#ifndef DIVIDEND_COMBINATORICS_HPP
#define DIVIDEND_COMBINATORICS_HPP

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

namespace dividend {

// Expression templates are disabled so the types behave as plain values
// inside Eigen containers.
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;
using Rational =
    boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                  boost::multiprecision::et_off>;

enum class NumericMode { exact, floating };

std::string to_string(NumericMode mode);
NumericMode numeric_mode_from_string(const std::string& name);

// Relative tolerance that floating mode is expected to meet against exact mode.
inline constexpr double kFloatRelativeTolerance = 1e-9;

// C(a, b), zero when b < 0 or b > a (and hence for a < 0 as well).
BigInt binom(long a, long b);

// ln C(a, b); -infinity when C(a, b) = 0.
double log_binom(long a, long b);

// Probability that a uniformly random permutation of S_1 u ... u S_m u {i}
// places exactly chosen[h] elements of S_h before i, for every h.
Rational precede_probability(std::span<const long> set_sizes,
                             std::span<const long> chosen);

struct Binom {
  long n;
  long k;
};

// Scalar policy shared by every value computation. Each formula is written
// once against this interface and instantiated for Rational (exact) and
// double (floating).
template <class Scalar>
struct ScalarOps;

template <>
struct ScalarOps<double> {
  static double from_money(double m) { return m; }
  static double ratio(long num, long den) {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  static double to_double(double x) { return x; }

  // prod C(numer) / (prod C(denom) * divisor), evaluated as exp of a sum of
  // logs. Every denominator binomial must be non-zero.
  static double binomial_fraction(std::initializer_list<Binom> numer,
                                  std::initializer_list<Binom> denom,
                                  long divisor) {
    double log_sum = 0.0;
    for (const Binom& t : numer) {
      const double l = log_binom(t.n, t.k);
      if (l == -std::numeric_limits<double>::infinity()) return 0.0;
      log_sum += l;
    }
    for (const Binom& t : denom) log_sum -= log_binom(t.n, t.k);
    return std::exp(log_sum) / static_cast<double>(divisor);
  }
};

template <>
struct ScalarOps<Rational> {
  static Rational from_money(double m) { return Rational(m); }
  static Rational ratio(long num, long den) { return Rational(num, den); }
  static double to_double(const Rational& x) { return x.convert_to<double>(); }

  static Rational binomial_fraction(std::initializer_list<Binom> numer,
                                    std::initializer_list<Binom> denom,
                                    long divisor) {
    BigInt top = 1;
    for (const Binom& t : numer) {
      top *= binom(t.n, t.k);
      if (top == 0) return Rational(0);
    }
    BigInt bottom = divisor;
    for (const Binom& t : denom) bottom *= binom(t.n, t.k);
    return Rational(top, bottom);
  }
};

template <class Scalar>
double to_double(const Scalar& x) {
  return ScalarOps<Scalar>::to_double(x);
}

}  // namespace dividend

#endif  // DIVIDEND_COMBINATORICS_HPP
