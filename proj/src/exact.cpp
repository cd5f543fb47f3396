#include "hrtlab/exact.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <vector>

#include "hrtlab/error.hpp"

namespace hrtlab {

namespace {

using i128 = __int128;

std::int64_t narrow(i128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < -std::numeric_limits<std::int64_t>::max()) {
    throw Error(ErrorKind::Overflow, "rational arithmetic exceeds 64-bit range");
  }
  return static_cast<std::int64_t>(v);
}

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Rational make_reduced(i128 num, i128 den) {
  if (den == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational(narrow(num), narrow(den));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::int64_t parse_int(std::string_view s) {
  s = trim(s);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw Error(ErrorKind::ParseError, "expected integer, got '" + std::string(s) + "'");
  }
  return v;
}

// Recursive-descent parser over the exact grammar.
class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : s_(text) {}

  QuadSurd parse() {
    QuadSurd acc = parse_term();
    for (;;) {
      skip();
      if (pos_ >= s_.size()) break;
      char op = s_[pos_];
      if (op != '+' && op != '-') fail("expected '+' or '-'");
      ++pos_;
      QuadSurd rhs = parse_term();
      auto r = op == '+' ? add(acc, rhs) : sub(acc, rhs);
      if (!r) fail("surds with different radicands are outside the grammar");
      acc = *r;
    }
    return acc;
  }

 private:
  QuadSurd parse_term() {
    skip();
    bool negative = false;
    while (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
      if (s_[pos_] == '-') negative = !negative;
      ++pos_;
      skip();
    }
    QuadSurd acc = parse_atom();
    for (;;) {
      skip();
      if (pos_ >= s_.size()) break;
      char op = s_[pos_];
      if (op == '*') {
        ++pos_;
        auto r = mul(acc, parse_atom());
        if (!r) fail("product of surds with different radicands");
        acc = *r;
      } else if (op == '/') {
        ++pos_;
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        std::int64_t d = parse_int(s_.substr(start, pos_ - start));
        if (d == 0) fail("division by zero");
        auto r = mul(acc, QuadSurd(Rational(1, d)));
        acc = *r;
      } else {
        break;
      }
    }
    return negative ? acc.negated() : acc;
  }

  QuadSurd parse_atom() {
    skip();
    if (s_.substr(pos_, 4) == "sqrt") {
      pos_ += 4;
      skip();
      expect('(');
      std::size_t start = pos_;
      while (pos_ < s_.size() && s_[pos_] != ')') ++pos_;
      std::int64_t n = parse_int(s_.substr(start, pos_ - start));
      expect(')');
      if (n < 0) fail("sqrt of a negative integer");
      return QuadSurd::sqrt_of(n);
    }
    if (pos_ < s_.size() && s_[pos_] == '(') fail("parentheses are only allowed in sqrt(n)");
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer or sqrt(n)");
    return QuadSurd(Rational(parse_int(s_.substr(start, pos_ - start))));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  void expect(char c) {
    skip();
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::ParseError, what + " in '" + std::string(s_) + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Rational::Rational(std::int64_t num) : num_(num), den_(1) {}

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator");
  if (den < 0) {
    num = narrow(-static_cast<i128>(num));
    den = narrow(-static_cast<i128>(den));
  }
  std::int64_t g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  num_ = num;
  den_ = den;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  return make_reduced(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
                      static_cast<i128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  return make_reduced(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw Error(ErrorKind::InvalidArgument, "division by zero rational");
  return make_reduced(static_cast<i128>(a.num_) * b.den_, static_cast<i128>(a.den_) * b.num_);
}

Rational Rational::operator-() const { return Rational(narrow(-static_cast<i128>(num_)), den_); }

bool operator<(const Rational& a, const Rational& b) {
  return static_cast<i128>(a.num_) * b.den_ < static_cast<i128>(b.num_) * a.den_;
}

std::int64_t checked_lcm(std::int64_t a, std::int64_t b) {
  if (a == 0 || b == 0) return 0;
  i128 g = gcd128(a, b);
  i128 l = static_cast<i128>(a) / g * b;
  return narrow(l < 0 ? -l : l);
}

Rational parse_rational(std::string_view text) {
  text = trim(text);
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  std::int64_t den = parse_int(text.substr(slash + 1));
  if (den == 0) throw Error(ErrorKind::ParseError, "zero denominator in '" + std::string(text) + "'");
  return Rational(parse_int(text.substr(0, slash)), den);
}

Rational best_rational_approximation(long double x, std::int64_t maxDen) {
  if (maxDen < 1) throw Error(ErrorKind::InvalidArgument, "maxDen must be >= 1");
  if (!std::isfinite(x) || std::fabs(x) > 9.0e15L) {
    throw Error(ErrorKind::Overflow, "value out of range for rational approximation");
  }
  // Convergents p_k/q_k; the final candidate is the better of the last
  // convergent within the bound and the largest admissible semiconvergent.
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  long double r = x;
  for (int iter = 0; iter < 64; ++iter) {
    long double a_ld = std::floor(r);
    if (std::fabs(a_ld) > 9.0e15L) break;
    auto a = static_cast<std::int64_t>(a_ld);
    i128 q2 = static_cast<i128>(a) * q1 + q0;
    if (q2 > maxDen) {
      std::int64_t k = (maxDen - q0) / q1;
      Rational semi(narrow(static_cast<i128>(k) * p1 + p0), narrow(static_cast<i128>(k) * q1 + q0));
      Rational conv(p1, q1);
      long double es = std::fabs(x - semi.to_long_double());
      long double ec = std::fabs(x - conv.to_long_double());
      return es < ec ? semi : conv;
    }
    i128 p2 = static_cast<i128>(a) * p1 + p0;
    p0 = p1;
    q0 = q1;
    p1 = narrow(p2);
    q1 = narrow(q2);
    long double frac = r - a_ld;
    if (frac < 1e-30L) break;
    r = 1.0L / frac;
  }
  return Rational(p1, q1);
}

std::pair<std::int64_t, std::int64_t> squarefree_split(std::int64_t n) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "squarefree_split of negative integer");
  if (n == 0) return {0, 1};
  std::int64_t s = 1, r = 1;
  std::int64_t m = n;
  for (std::int64_t p = 2; p * p <= m; ++p) {
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    for (int i = 0; i < e / 2; ++i) s *= p;
    if (e % 2 == 1) r *= p;
  }
  r *= m;
  return {s, r};
}

QuadSurd::QuadSurd(Rational a) : a_(a) {}

QuadSurd::QuadSurd(Rational a, Rational b, std::int64_t n) : a_(a) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "negative radicand");
  auto [s, r] = squarefree_split(n);
  b = b * Rational(s);
  if (r == 1) a_ = a_ + b;  // b*sqrt(s^2) is rational
  if (b.is_zero() || r == 1) {
    b_ = Rational(0);
    r_ = 1;
    return;
  }
  b_ = b;
  r_ = r;
}

QuadSurd QuadSurd::sqrt_of(std::int64_t n) { return QuadSurd(Rational(0), Rational(1), n); }

double QuadSurd::to_double() const { return static_cast<double>(to_long_double()); }

long double QuadSurd::to_long_double() const {
  long double v = a_.to_long_double();
  if (!b_.is_zero()) v += b_.to_long_double() * std::sqrt(static_cast<long double>(r_));
  return v;
}

std::string QuadSurd::str() const {
  if (is_rational()) return a_.str();
  const Rational mag = b_ < Rational(0) ? -b_ : b_;
  std::string surd = (mag == Rational(1) ? std::string() : mag.str() + "*") + "sqrt(" + std::to_string(r_) + ")";
  const bool negative = b_ < Rational(0);
  if (a_.is_zero()) return negative ? "-" + surd : surd;
  return a_.str() + (negative ? " - " : " + ") + surd;
}

QuadSurd QuadSurd::negated() const {
  QuadSurd out = *this;
  out.a_ = -a_;
  out.b_ = -b_;
  return out;
}

std::optional<QuadSurd> add(const QuadSurd& x, const QuadSurd& y) {
  if (!x.is_rational() && !y.is_rational() && x.r_ != y.r_) return std::nullopt;
  std::int64_t r = x.is_rational() ? y.r_ : x.r_;
  return QuadSurd(x.a_ + y.a_, x.b_ + y.b_, r);
}

std::optional<QuadSurd> sub(const QuadSurd& x, const QuadSurd& y) { return add(x, y.negated()); }

std::optional<QuadSurd> mul(const QuadSurd& x, const QuadSurd& y) {
  if (x.is_rational()) return QuadSurd(x.a_ * y.a_, x.a_ * y.b_, y.r_);
  if (y.is_rational()) return QuadSurd(y.a_ * x.a_, y.a_ * x.b_, x.r_);
  if (x.r_ != y.r_) return std::nullopt;
  // (a + b sqrt r)(c + d sqrt r) = ac + bd r + (ad + bc) sqrt r
  return QuadSurd(x.a_ * y.a_ + x.b_ * y.b_ * Rational(x.r_), x.a_ * y.b_ + x.b_ * y.a_, x.r_);
}

std::string Real::str() const {
  if (exact_) return exact_->str();
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value_);
  return buf;
}

bool same_value(const Real& a, const Real& b) {
  if (a.exact_ && b.exact_) return *a.exact_ == *b.exact_;
  return a.value_ == b.value_;
}

Real parse_real(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw Error(ErrorKind::ParseError, "empty real literal");
  bool decimal = text.find_first_of(".eE") != std::string_view::npos && text.find("sqrt") == std::string_view::npos;
  if (decimal) {
    double v = 0.0;
    std::string_view body = text;
    if (!body.empty() && body.front() == '+') body.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
    if (ec != std::errc() || ptr != body.data() + body.size()) {
      throw Error(ErrorKind::ParseError, "malformed decimal '" + std::string(text) + "'");
    }
    if (!std::isfinite(v)) throw Error(ErrorKind::ParseError, "non-finite value '" + std::string(text) + "'");
    return Real(v);
  }
  return Real(ExprParser(text).parse());
}

}  // namespace hrtlab
