#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace hrtlab {

using cdouble = std::complex<double>;

enum class WindowKind { Gaussian, Box, TwoSidedExponential, Hermite, Custom };

std::string_view to_string(WindowKind kind);
WindowKind parse_window_kind(std::string_view name);

/// Closed-form generator t -> f(t), defined on all of R.
using WindowGenerator = std::function<cdouble(double)>;

/// A complex window sampled on t_j = -K + j/q, j = 0 .. 2Kq-1, i.e. on
/// [-K, K) with step h = 1/q. Values outside [-K, K) are zero by convention.
class SampledWindow {
 public:
  /// Throws ZeroWindow when every sample is zero, InvalidArgument when the
  /// sample count is not 2Kq or a sample is not finite.
  SampledWindow(WindowKind kind, std::int64_t q, std::int64_t K, std::vector<cdouble> samples,
                WindowGenerator generator = {}, int order = 0);

  WindowKind kind() const { return kind_; }
  int order() const { return order_; }
  std::int64_t q() const { return q_; }
  std::int64_t half_support() const { return K_; }
  double step() const { return 1.0 / static_cast<double>(q_); }
  std::size_t size() const { return samples_.size(); }
  std::span<const cdouble> samples() const { return samples_; }
  const cdouble& operator[](std::size_t j) const { return samples_[j]; }

  /// Grid time t_j, computed as (j - Kq) / q.
  double time(std::size_t j) const;

  bool analytic() const { return static_cast<bool>(generator_); }
  const WindowGenerator& generator() const { return generator_; }

  /// Generator value at t, zero outside [-K, K). Requires analytic().
  cdouble evaluate(double t) const;

  /// Riemann-sum L2 norm sqrt(h * sum |f_j|^2).
  double norm() const;

 private:
  WindowKind kind_;
  std::int64_t q_;
  std::int64_t K_;
  std::vector<cdouble> samples_;
  WindowGenerator generator_;
  int order_;
};

/// 1 / h must be an integer within 1e-12 (BadStep otherwise).
std::int64_t step_to_q(double h);

/// Gaussian 2^{1/4} exp(-pi t^2), box 1_[0,1), two-sided exponential
/// exp(-|t|), and the L2-normalised Hermite functions
/// h_n(t) = 2^{1/4} (2^n n!)^{-1/2} H_n(sqrt(2 pi) t) exp(-pi t^2).
SampledWindow make_window(WindowKind kind, double h, std::int64_t K, int hermiteOrder = 0);

/// Custom (non-analytic) window from samples on the standard grid.
SampledWindow make_custom_window(double h, std::int64_t K, std::vector<cdouble> samples);

/// The closed-form generator behind make_window; Custom has none.
WindowGenerator window_generator(WindowKind kind, int hermiteOrder = 0);

/// Nonzero complex coefficients c_1..c_N.
class CoefficientVector {
 public:
  explicit CoefficientVector(std::vector<cdouble> values);
  std::span<const cdouble> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  const cdouble& operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<cdouble> values_;
};

}  // namespace hrtlab
