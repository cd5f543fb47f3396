#pragma once

// The rotation sigma(z) = (z + gamma) mod 1 on [0,1)^2, orbit products of
// the trigonometric polynomial p along it, and toral lines.

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "hrtlab/exact.hpp"
#include "hrtlab/window.hpp"

namespace hrtlab {

/// x - floor(x), forced into [0, 1).
double wrap_unit(double x);

struct TorusPoint {
  double t = 0.0;
  double omega = 0.0;

  TorusPoint() = default;
  /// Reduces both components into [0, 1).
  TorusPoint(double t_, double omega_) : t(wrap_unit(t_)), omega(wrap_unit(omega_)) {}
};

struct Shift2 {
  double t = 0.0;
  double omega = 0.0;
};

/// Max of the per-coordinate wrap-around distances.
double torus_distance(const TorusPoint& a, const TorusPoint& b);

struct TrigTerm {
  cdouble c;
  double y = 0.0;  // frequency paired with t
  double x = 0.0;  // frequency paired with omega
};

/// p(t, w) = sum_k c_k exp(-2 pi i (y_k t + x_k w)).
class TrigPolynomial2 {
 public:
  /// At least one term, every c_k nonzero, no repeated (y_k, x_k).
  explicit TrigPolynomial2(std::vector<TrigTerm> terms);

  std::span<const TrigTerm> terms() const { return terms_; }

 private:
  std::vector<TrigTerm> terms_;
};

TorusPoint sigma_step(const TorusPoint& z, const Shift2& gamma);

/// [z, sigma z, ..., sigma^{n-1} z], generated by repeated sigma_step.
std::vector<TorusPoint> orbit(const TorusPoint& z, const Shift2& gamma, std::size_t n);

/// Smallest common period of the exact rational rotation (a, b): the lcm of
/// the reduced denominators.
std::int64_t rational_orbit_period(const Rational& gammaT, const Rational& gammaOmega);

cdouble eval_p2(const TrigPolynomial2& p, double t, double omega);
inline cdouble eval_p2(const TrigPolynomial2& p, const TorusPoint& z) { return eval_p2(p, z.t, z.omega); }

/// Kahan-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) {
    double y = v - carry_;
    double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

constexpr double kDefaultZeroThreshold = 1e-14;

struct OrbitProductLedger {
  Shift2 gamma;
  /// s_0 .. s_n with s_{j+1} = s_j + ln|p(sigma^j z)| (zero hits excluded).
  std::vector<double> logSums;
  /// Orbit indices j with |p(sigma^j z)| < epsZero.
  std::vector<std::size_t> zeroHits;
};

OrbitProductLedger orbit_log_product(const TrigPolynomial2& p, const TorusPoint& z, const Shift2& gamma,
                                     std::size_t n, double epsZero = kDefaultZeroThreshold);

/// |F(sigma^j z)| for j = 0..n, from |F(sigma z)| = |p(z)| |F(z)| with
/// |F(z)| = seed, by direct multiplication.
std::vector<double> propagate_F(double seed, const TrigPolynomial2& p, const Shift2& gamma, const TorusPoint& z,
                                std::size_t n);

/// Smallest n in [1, maxN] with torus_distance(sigma^n z, z) < eps.
std::optional<std::size_t> recurrence_probe(const TorusPoint& z, const Shift2& gamma, double eps, std::size_t maxN);

/// max over anchored boxes [0,a) x [0,b), a, b in {1/g, .., g/g}, of
/// |#points in box / N - a b|.
double discrepancy(std::span<const TorusPoint> points, std::size_t gridRes);

struct Segment {
  double t0 = 0.0, omega0 = 0.0, t1 = 0.0, omega1 = 0.0;
};

struct ToralLine {
  TorusPoint anchor;
  Shift2 direction;
  /// Maximal straight pieces in [0,1]^2, in traversal order.
  std::vector<Segment> segments;
  bool closed = false;
  /// Primitive integer direction (u, v) when closed.
  std::optional<std::array<std::int64_t, 2>> winding;
  /// Parameter length of one traversal along `direction` (one period when
  /// closed, the length covered by `segments` otherwise).
  double period = 0.0;

  /// anchor + s * direction, reduced mod 1.
  TorusPoint point_at(double s) const;
};

constexpr std::int64_t kLineMaxDenominator = 10000;

/// Closed when the slope of gamma is rational with denominator <= 1e4
/// (decided by the rational-relations detector; exact when both components
/// are given exactly).
ToralLine toral_line(const TorusPoint& lambda, const Shift2& gamma, std::size_t maxSegments);
ToralLine toral_line(const TorusPoint& lambda, const Real& gammaT, const Real& gammaOmega, std::size_t maxSegments);

struct ConstancyReport {
  double maxVariation = 0.0;
  double meanModulus = 0.0;
};

/// Samples |p| at `samples` equally spaced parameters over the line's period.
ConstancyReport p_constancy_on_line(const TrigPolynomial2& p, const ToralLine& line, std::size_t samples);

}  // namespace hrtlab
