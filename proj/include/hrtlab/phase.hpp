#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>
#include <cstdint>

namespace hrtlab {

/// exp(-2 pi i * cycles), with the integer part of `cycles` removed before
/// the transcendental call.
inline std::complex<double> cis_neg(double cycles) {
  const double frac = cycles - std::nearbyint(cycles);
  const double angle = -2.0 * std::numbers::pi * frac;
  return {std::cos(angle), std::sin(angle)};
}

/// Table of exp(-2 pi i m / q), m = 0 .. q-1.
class RootTable {
 public:
  explicit RootTable(std::int64_t q) : q_(q), roots_(static_cast<std::size_t>(q)) {
    for (std::int64_t m = 0; m < q; ++m) {
      roots_[static_cast<std::size_t>(m)] = cis_neg(static_cast<double>(m) / static_cast<double>(q));
    }
  }

  std::int64_t order() const { return q_; }

  /// exp(-2 pi i m / q) for any integer m.
  const std::complex<double>& operator()(std::int64_t m) const {
    std::int64_t r = m % q_;
    if (r < 0) r += q_;
    return roots_[static_cast<std::size_t>(r)];
  }

 private:
  std::int64_t q_;
  std::vector<std::complex<double>> roots_;
};

}  // namespace hrtlab
