#include "hrtlab/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hrtlab/error.hpp"
#include "hrtlab/parallel.hpp"
#include "hrtlab/phase.hpp"
#include "hrtlab/torus.hpp"

namespace hrtlab {

namespace {

constexpr double kZeroFactor = 1e-14;
constexpr double kLogOverflow = 700.0;

// Least-squares slope of ys[k] against k over k in [from, ys.size()).
double trend_slope(const std::vector<double>& ys, std::size_t from, double sign) {
  const std::size_t count = ys.size() - from;
  if (count < 2) return 0.0;
  double meanX = 0.0, meanY = 0.0;
  for (std::size_t k = from; k < ys.size(); ++k) {
    meanX += static_cast<double>(k);
    meanY += sign * ys[k];
  }
  meanX /= static_cast<double>(count);
  meanY /= static_cast<double>(count);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = from; k < ys.size(); ++k) {
    const double dx = static_cast<double>(k) - meanX;
    sxy += dx * (sign * ys[k] - meanY);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

FlowClass classify_trend(const std::vector<double>& ys, double sign, double delta, double& slope) {
  const std::size_t from = (ys.size() - 1) / 2;
  slope = trend_slope(ys, from, sign);
  if (slope < -delta) return FlowClass::DivergesToZero;
  if (slope > delta) return FlowClass::DivergesToInfinity;
  const auto [lo, hi] = std::minmax_element(ys.begin() + static_cast<std::ptrdiff_t>(from), ys.end());
  return (*hi - *lo) <= kConvergedSpread ? FlowClass::Converges : FlowClass::Indeterminate;
}

}  // namespace

DiagonalFlow::DiagonalFlow(std::vector<double> xs, CoefficientVector cs) : xs_(std::move(xs)), cs_(std::move(cs)) {
  if (xs_.empty()) throw Error(ErrorKind::InvalidArgument, "flow needs at least one translation");
  if (xs_.size() != cs_.size()) throw Error(ErrorKind::InvalidArgument, "flow needs one coefficient per translation");
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    if (!std::isfinite(xs_[i])) throw Error(ErrorKind::InvalidArgument, "flow translations must be finite");
    for (std::size_t j = 0; j < i; ++j) {
      if (xs_[i] == xs_[j]) throw Error(ErrorKind::DuplicatePoints, "flow translations must be distinct");
    }
  }
}

DiagonalFlow DiagonalFlow::reversed() const {
  std::vector<double> neg(xs_.size());
  std::transform(xs_.begin(), xs_.end(), neg.begin(), [](double x) { return -x; });
  return DiagonalFlow(std::move(neg), cs_);
}

cdouble matrix_coefficient(const DiagonalFlow& flow, double xi) {
  // Diagonal of e^{xi D} applied to c, then paired with v = (1, .., 1).
  std::vector<cdouble> moved(flow.size());
  for (std::size_t k = 0; k < flow.size(); ++k) moved[k] = flow.cs()[k] * cis_neg(flow.xs()[k] * xi);
  cdouble acc{};
  for (const auto& m : moved) acc += m;
  return acc;
}

std::string_view to_string(FlowClass c) {
  switch (c) {
    case FlowClass::Converges: return "converges";
    case FlowClass::DivergesToZero: return "diverges-to-zero";
    case FlowClass::DivergesToInfinity: return "diverges-to-infinity";
    case FlowClass::Indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

ProductTrace product_trace(const DiagonalFlow& flow, double xi, std::size_t n, double delta) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "product trace needs n >= 1");
  if (!(delta > 0.0)) throw Error(ErrorKind::InvalidArgument, "slope threshold must be positive");
  ProductTrace tr;
  tr.xi = xi;
  tr.forwardLogs.reserve(n + 1);
  tr.backwardLogs.reserve(n + 1);
  tr.forwardLogs.push_back(0.0);
  tr.backwardLogs.push_back(0.0);
  CompensatedSum fwd, bwd;
  for (std::size_t j = 0; j < n; ++j) {
    const double mod = std::abs(matrix_coefficient(flow, xi + static_cast<double>(j)));
    if (mod < kZeroFactor) {
      tr.zeroHits.push_back(static_cast<std::int64_t>(j));
    } else {
      fwd.add(std::log(mod));
    }
    tr.forwardLogs.push_back(fwd.value());
  }
  for (std::size_t j = 1; j <= n; ++j) {
    const double mod = std::abs(matrix_coefficient(flow, xi - static_cast<double>(j)));
    if (mod < kZeroFactor) {
      tr.zeroHits.push_back(-static_cast<std::int64_t>(j));
    } else {
      bwd.add(std::log(mod));
    }
    tr.backwardLogs.push_back(bwd.value());
  }
  tr.classification = classify_trend(tr.forwardLogs, 1.0, delta, tr.forwardSlope);
  tr.backwardClass = classify_trend(tr.backwardLogs, -1.0, delta, tr.backwardSlope);
  tr.l2Compatible =
      tr.classification == FlowClass::DivergesToZero && tr.backwardClass == FlowClass::DivergesToZero;
  return tr;
}

std::vector<ProductTrace> product_traces(const DiagonalFlow& flow, std::span<const double> xis, std::size_t n,
                                         double delta, unsigned threads) {
  std::vector<ProductTrace> out(xis.size());
  parallel_for(xis.size(), threads, [&](std::size_t i) { out[i] = product_trace(flow, xis[i], n, delta); });
  return out;
}

SummabilityProbe summability_probe(const DiagonalFlow& flow, double xi, double seed, std::size_t n) {
  if (!(seed > 0.0) || !std::isfinite(seed)) throw Error(ErrorKind::InvalidArgument, "seed must be positive");
  const ProductTrace tr = product_trace(flow, xi, n);
  SummabilityProbe probe;
  const double logSeed2 = 2.0 * std::log(seed);
  auto term = [&](double logValue) {
    if (logValue > kLogOverflow) {
      probe.overflow = true;
      return std::numeric_limits<double>::infinity();
    }
    return std::exp(logValue);
  };
  double f = 0.0, b = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    f += term(2.0 * tr.forwardLogs[k] + logSeed2);
    if (k > 0) b += term(-2.0 * tr.backwardLogs[k] + logSeed2);
    probe.forward.push_back(f);
    probe.backward.push_back(b);
    probe.total.push_back(f + b);
  }
  return probe;
}

FourierRelationReport fourier_relation_residual(const SampledWindow& w, const DiagonalFlow& flow,
                                                std::optional<double> spacing) {
  const std::int64_t K = w.half_support();
  const std::int64_t q = w.q();
  const double binSpacing = 1.0 / static_cast<double>(2 * K);
  if (spacing && std::fabs(*spacing - binSpacing) > 1e-12) {
    throw Error(ErrorKind::GridMismatch, "xi grid spacing must be 1/(2K) = " + std::to_string(binSpacing));
  }
  const std::int64_t n = 2 * K * q;
  RootTable roots(n);
  const double h = w.step();
  // xi_m t_j = -m/2 + m j / n, so e^{-2 pi i xi_m t_j} = (-1)^m root(m j).
  std::vector<cdouble> F(static_cast<std::size_t>(n));
  double peak = 0.0;
  for (std::int64_t m = -K * q; m < K * q; ++m) {
    cdouble acc{};
    for (std::int64_t j = 0; j < n; ++j) acc += w[static_cast<std::size_t>(j)] * roots(m * j);
    if (m % 2 != 0) acc = -acc;
    acc *= h;
    F[static_cast<std::size_t>(m + K * q)] = acc;
    peak = std::max(peak, std::abs(acc));
  }

  FourierRelationReport report;
  const std::int64_t shift = 2 * K;  // xi + 1
  for (std::int64_t idx = 0; idx + shift < n; ++idx) {
    const double xi = static_cast<double>(idx - K * q) * binSpacing;
    const cdouble lhs = matrix_coefficient(flow, xi) * F[static_cast<std::size_t>(idx)];
    report.residual = std::max(report.residual, std::abs(lhs - F[static_cast<std::size_t>(idx + shift)]));
  }
  report.residual /= peak;
  report.aliasing = std::max(std::abs(F.front()), std::abs(F.back())) / peak;
  double samplePeak = 0.0;
  for (const auto& s : w.samples()) samplePeak = std::max(samplePeak, std::abs(s));
  report.truncation = std::max(std::abs(w[0]), std::abs(w[w.size() - 1])) / samplePeak;
  return report;
}

}  // namespace hrtlab
