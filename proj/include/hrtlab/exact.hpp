#pragma once

// Exact arithmetic for the restricted input grammar: rationals and quadratic
// surds a + b*sqrt(n) with rational a, b and square-free n.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace hrtlab {

class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num);  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t num, std::int64_t den);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  long double to_long_double() const {
    return static_cast<long double>(num_) / static_cast<long double>(den_);
  }

  /// "p/q", or "p" when the denominator is 1.
  std::string str() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const;
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend bool operator<(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::int64_t checked_lcm(std::int64_t a, std::int64_t b);

/// Parses "p/q" or "p".
Rational parse_rational(std::string_view text);

/// Closest rational with denominator <= maxDen (continued-fraction convergents
/// and semiconvergents).
Rational best_rational_approximation(long double x, std::int64_t maxDen);

/// n = s^2 * r with r square-free. Returns {s, r}; n must be >= 0.
std::pair<std::int64_t, std::int64_t> squarefree_split(std::int64_t n);

/// a + b*sqrt(r). Canonical form: r square-free >= 2 when b != 0, otherwise
/// b == 0 and r == 1.
class QuadSurd {
 public:
  QuadSurd() = default;
  QuadSurd(Rational a);  // NOLINT(google-explicit-constructor)
  QuadSurd(Rational a, Rational b, std::int64_t n);

  static QuadSurd sqrt_of(std::int64_t n);

  const Rational& rational_part() const { return a_; }
  const Rational& surd_coefficient() const { return b_; }
  std::int64_t radicand() const { return r_; }

  bool is_rational() const { return b_.is_zero(); }
  bool is_integer() const { return is_rational() && a_.is_integer(); }
  bool is_zero() const { return is_rational() && a_.is_zero(); }
  double to_double() const;
  long double to_long_double() const;
  std::string str() const;

  /// Field operations inside Q(sqrt r). Returns nullopt when the operands
  /// live in different quadratic fields.
  friend std::optional<QuadSurd> add(const QuadSurd& x, const QuadSurd& y);
  friend std::optional<QuadSurd> sub(const QuadSurd& x, const QuadSurd& y);
  friend std::optional<QuadSurd> mul(const QuadSurd& x, const QuadSurd& y);
  QuadSurd negated() const;

  friend bool operator==(const QuadSurd& x, const QuadSurd& y) = default;

 private:
  Rational a_;
  Rational b_;
  std::int64_t r_ = 1;
};

/// A real input value: always carries a double, and carries the exact
/// symbolic value when it was written in the exact grammar.
class Real {
 public:
  Real() = default;
  Real(double v) : value_(v) {}  // NOLINT(google-explicit-constructor)
  Real(const QuadSurd& exact) : value_(exact.to_double()), exact_(exact) {}  // NOLINT
  Real(const Rational& exact) : Real(QuadSurd(exact)) {}                      // NOLINT

  double value() const { return value_; }
  const std::optional<QuadSurd>& exact() const { return exact_; }
  bool is_exact() const { return exact_.has_value(); }
  std::string str() const;

  /// Equality on the stored representation: exact values compare exactly,
  /// otherwise the doubles compare bitwise-equal.
  friend bool same_value(const Real& a, const Real& b);

 private:
  double value_ = 0.0;
  std::optional<QuadSurd> exact_;
};

/// Parses an integer, a decimal literal (inexact), or an exact expression:
/// `a/b`, `sqrt(n)`, `a/b*sqrt(n)`, `a/b + c/d*sqrt(n)` and signed variants
/// such as `-sqrt(2)/3`.
Real parse_real(std::string_view text);

}  // namespace hrtlab
