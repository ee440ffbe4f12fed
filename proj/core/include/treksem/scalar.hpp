#pragma once

#include <gmpxx.h>

#include <cmath>
#include <string>
#include <string_view>

namespace treksem {

using Rational = mpq_class;

enum class ScalarKind { Exact, Float };

/// Uniform access to the two scalar kinds the numeric modules are
/// instantiated for.  Exact values are always canonical (lowest terms,
/// positive denominator).
template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr ScalarKind kind = ScalarKind::Exact;
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static Rational from_int(long v) { return Rational(v); }
  static Rational from_rational(const Rational& v) { return v; }
  static bool is_zero(const Rational& v) { return sgn(v) == 0; }
  static int sign(const Rational& v) { return sgn(v); }
  static Rational abs(const Rational& v) { return ::abs(v); }
  static double to_double(const Rational& v) { return v.get_d(); }
};

template <>
struct ScalarTraits<double> {
  static constexpr ScalarKind kind = ScalarKind::Float;
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  static double from_int(long v) { return static_cast<double>(v); }
  static double from_rational(const Rational& v) { return v.get_d(); }
  static bool is_zero(double v) { return v == 0.0; }
  static int sign(double v) { return (v > 0) - (v < 0); }
  static double abs(double v) { return std::fabs(v); }
  static double to_double(double v) { return v; }
};

/// Parses "p", "-p/q" (q != 0).  Throws Error(ParseError) otherwise.
Rational parse_rational(std::string_view text);

/// "p" for integers, "p/q" otherwise.
std::string format_rational(const Rational& value);

}  // namespace treksem
