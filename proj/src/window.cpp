#include "hrtlab/window.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hrtlab/error.hpp"

namespace hrtlab {

std::string_view to_string(WindowKind kind) {
  switch (kind) {
    case WindowKind::Gaussian: return "gaussian";
    case WindowKind::Box: return "box";
    case WindowKind::TwoSidedExponential: return "two-sided-exponential";
    case WindowKind::Hermite: return "hermite";
    case WindowKind::Custom: return "custom";
  }
  return "custom";
}

WindowKind parse_window_kind(std::string_view name) {
  if (name == "gaussian") return WindowKind::Gaussian;
  if (name == "box") return WindowKind::Box;
  if (name == "two-sided-exponential" || name == "exponential") return WindowKind::TwoSidedExponential;
  if (name == "hermite" || name.starts_with("hermite-")) return WindowKind::Hermite;
  if (name == "custom") return WindowKind::Custom;
  throw Error(ErrorKind::InvalidArgument, "unknown window kind '" + std::string(name) + "'");
}

SampledWindow::SampledWindow(WindowKind kind, std::int64_t q, std::int64_t K, std::vector<cdouble> samples,
                             WindowGenerator generator, int order)
    : kind_(kind), q_(q), K_(K), samples_(std::move(samples)), generator_(std::move(generator)), order_(order) {
  if (q_ < 1 || K_ < 1) throw Error(ErrorKind::InvalidArgument, "window needs q >= 1 and K >= 1");
  if (samples_.size() != static_cast<std::size_t>(2 * K_ * q_)) {
    throw Error(ErrorKind::InvalidArgument, "sample count must equal 2K/h = " + std::to_string(2 * K_ * q_));
  }
  bool nonzero = false;
  for (const auto& s : samples_) {
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) {
      throw Error(ErrorKind::InvalidArgument, "window samples must be finite");
    }
    if (s != cdouble{}) nonzero = true;
  }
  if (!nonzero) throw Error(ErrorKind::ZeroWindow, "window has no nonzero sample");
}

double SampledWindow::time(std::size_t j) const {
  return (static_cast<double>(j) - static_cast<double>(K_ * q_)) / static_cast<double>(q_);
}

cdouble SampledWindow::evaluate(double t) const {
  if (!generator_) throw Error(ErrorKind::InvalidArgument, "window has no closed-form generator");
  const double K = static_cast<double>(K_);
  if (t < -K || t >= K) return {};
  return generator_(t);
}

double SampledWindow::norm() const {
  double acc = 0.0;
  for (const auto& s : samples_) acc += std::norm(s);
  return std::sqrt(acc / static_cast<double>(q_));
}

std::int64_t step_to_q(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorKind::BadStep, "step must be positive");
  double inv = 1.0 / h;
  double q = std::nearbyint(inv);
  if (q < 1.0 || std::fabs(inv - q) > 1e-12 * std::max(1.0, q)) {
    throw Error(ErrorKind::BadStep, "1/h = " + std::to_string(inv) + " is not an integer");
  }
  return static_cast<std::int64_t>(q);
}

WindowGenerator window_generator(WindowKind kind, int hermiteOrder) {
  static const double kQuarter = std::pow(2.0, 0.25);
  switch (kind) {
    case WindowKind::Gaussian:
      return [](double t) { return cdouble(kQuarter * std::exp(-std::numbers::pi * t * t), 0.0); };
    case WindowKind::Box:
      return [](double t) { return cdouble(t >= 0.0 && t < 1.0 ? 1.0 : 0.0, 0.0); };
    case WindowKind::TwoSidedExponential:
      return [](double t) { return cdouble(std::exp(-std::fabs(t)), 0.0); };
    case WindowKind::Hermite: {
      if (hermiteOrder < 0) throw Error(ErrorKind::InvalidArgument, "Hermite order must be >= 0");
      return [n = hermiteOrder](double t) {
        // Orthonormal recurrence in u = sqrt(2 pi) t.
        const double u = std::sqrt(2.0 * std::numbers::pi) * t;
        double prev = 0.0;
        double cur = kQuarter * std::exp(-std::numbers::pi * t * t);
        for (int k = 0; k < n; ++k) {
          double next = std::sqrt(2.0 / (k + 1)) * u * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
          prev = cur;
          cur = next;
        }
        return cdouble(cur, 0.0);
      };
    }
    case WindowKind::Custom:
      return {};
  }
  return {};
}

SampledWindow make_window(WindowKind kind, double h, std::int64_t K, int hermiteOrder) {
  if (kind == WindowKind::Custom) {
    throw Error(ErrorKind::InvalidArgument, "custom windows are built from samples");
  }
  const std::int64_t q = step_to_q(h);
  if (K < 1) throw Error(ErrorKind::InvalidArgument, "half support K must be >= 1");
  WindowGenerator gen = window_generator(kind, hermiteOrder);
  std::vector<cdouble> samples(static_cast<std::size_t>(2 * K * q));
  for (std::size_t j = 0; j < samples.size(); ++j) {
    samples[j] = gen((static_cast<double>(j) - static_cast<double>(K * q)) / static_cast<double>(q));
  }
  return SampledWindow(kind, q, K, std::move(samples), std::move(gen), hermiteOrder);
}

SampledWindow make_custom_window(double h, std::int64_t K, std::vector<cdouble> samples) {
  return SampledWindow(WindowKind::Custom, step_to_q(h), K, std::move(samples));
}

CoefficientVector::CoefficientVector(std::vector<cdouble> values) : values_(std::move(values)) {
  for (const auto& c : values_) {
    if (!(std::abs(c) > 0.0) || !std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw Error(ErrorKind::InvalidArgument, "coefficients must be finite and nonzero");
    }
  }
}

}  // namespace hrtlab
