#pragma once

// One-parameter diagonal flows xi -> e^{xi D} with D = diag(-2 pi i x_k),
// the matrix coefficient p(xi) = <e^{xi D} c, v>, and the product recurrences
// |F(xi + n)| = prod |p(xi + j)| |F(xi)| it drives.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hrtlab/window.hpp"

namespace hrtlab {

class DiagonalFlow {
 public:
  /// xs pairwise distinct and finite, one coefficient per x.
  DiagonalFlow(std::vector<double> xs, CoefficientVector cs);

  std::size_t size() const { return xs_.size(); }
  std::span<const double> xs() const { return xs_; }
  const CoefficientVector& cs() const { return cs_; }

  /// xs -> -xs, same coefficients.
  DiagonalFlow reversed() const;

 private:
  std::vector<double> xs_;
  CoefficientVector cs_;
};

/// sum_k c_k exp(-2 pi i x_k xi), computed as (e^{xi D} c) . (1, .., 1).
cdouble matrix_coefficient(const DiagonalFlow& flow, double xi);

enum class FlowClass { Converges, DivergesToZero, DivergesToInfinity, Indeterminate };

std::string_view to_string(FlowClass c);

constexpr double kDefaultSlopeThreshold = 1e-3;
/// Largest spread of the log trace over the trend window still read as a
/// settled limit.
constexpr double kConvergedSpread = 1.0;

struct ProductTrace {
  double xi = 0.0;
  /// s+_k = sum_{j=0}^{k-1} ln|p(xi + j)|, k = 0..n.
  std::vector<double> forwardLogs;
  /// s-_k = sum_{j=1}^{k} ln|p(xi - j)|, k = 0..n.
  std::vector<double> backwardLogs;
  /// Trend of ln(|F(xi + k)| / |F(xi)|) = s+_k.
  FlowClass classification = FlowClass::Indeterminate;
  /// Trend of ln(|F(xi - k)| / |F(xi)|) = -s-_k.
  FlowClass backwardClass = FlowClass::Indeterminate;
  /// Both sides decay: the only pattern compatible with square
  /// summability of F along xi + Z.
  bool l2Compatible = false;
  /// Least-squares slopes over the last half of each trend.
  double forwardSlope = 0.0;
  double backwardSlope = 0.0;
  /// Offsets j (forward, j >= 0) or -j (backward, j >= 1) where
  /// |p| < 1e-14; those factors are left out of the sums.
  std::vector<std::int64_t> zeroHits;
};

ProductTrace product_trace(const DiagonalFlow& flow, double xi, std::size_t n,
                           double delta = kDefaultSlopeThreshold);

/// product_trace for every xi, in input order.
std::vector<ProductTrace> product_traces(const DiagonalFlow& flow, std::span<const double> xis, std::size_t n,
                                         double delta = kDefaultSlopeThreshold, unsigned threads = 0);

struct SummabilityProbe {
  /// sum_{k=0}^{K} |F(xi + k)|^2 for K = 0..n.
  std::vector<double> forward;
  /// sum_{k=1}^{K} |F(xi - k)|^2 for K = 0..n.
  std::vector<double> backward;
  /// forward + backward: sum_{k=-K}^{K} |F(xi + k)|^2.
  std::vector<double> total;
  /// Some term had log|F|^2 > 700 and was recorded as +inf.
  bool overflow = false;
};

/// |F(xi + k)|^2 = exp(2 s+_k) seed^2 and |F(xi - k)|^2 = exp(-2 s-_k) seed^2.
SummabilityProbe summability_probe(const DiagonalFlow& flow, double xi, double seed, std::size_t n);

struct FourierRelationReport {
  /// max over interior bins of |p(xi) F(xi) - F(xi + 1)| / max |F|.
  double residual = 0.0;
  /// Band-edge magnitude max(|F(-q/2)|, |F(q/2 - 1/2K)|) / max |F|.
  double aliasing = 0.0;
  /// Edge sample magnitude max(|f(-K)|, |f(K - h)|) / max |f|.
  double truncation = 0.0;
};

/// F is the discrete Fourier transform h sum_j f(t_j) e^{-2 pi i xi t_j} on
/// the bins xi_m = m / 2K, m in [-Kq, Kq). A given spacing must equal 1/2K
/// (GridMismatch otherwise).
FourierRelationReport fourier_relation_residual(const SampledWindow& w, const DiagonalFlow& flow,
                                                std::optional<double> spacing = std::nullopt);

}  // namespace hrtlab
