#include "hrtlab/zak.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hrtlab/error.hpp"
#include "hrtlab/operators.hpp"
#include "hrtlab/phase.hpp"

namespace hrtlab {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t d = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --d;
  return d;
}

std::int64_t mod_q(std::int64_t a, std::int64_t q) { return a - floor_div(a, q) * q; }

std::int64_t require_grid_multiple(double v, std::int64_t q, const char* what) {
  const double scaled = v * static_cast<double>(q);
  const double m = std::nearbyint(scaled);
  if (std::fabs(scaled - m) > 1e-9) {
    throw Error(ErrorKind::GridMismatch, std::string(what) + " is not a multiple of 1/" + std::to_string(q));
  }
  return static_cast<std::int64_t>(m);
}

// exp(-2 pi i (a/q)(i/q)), the chirp factor of the functional equation.
cdouble chirp(std::int64_t a, std::int64_t i, std::int64_t q) {
  const std::int64_t qq = q * q;
  return cis_neg(static_cast<double>(mod_q(a * i, qq)) / static_cast<double>(qq));
}

}  // namespace

ZakImage::ZakImage(std::int64_t q, std::int64_t K, std::vector<cdouble> values, double truncationTail)
    : q_(q), K_(K), values_(std::move(values)), roots_(q > 0 ? q : 1), norm_(0.0), tail_(truncationTail) {
  if (q < 1 || K < 1) throw Error(ErrorKind::InvalidArgument, "Zak grid needs q >= 1 and K >= 1");
  if (2 * K > q) {
    throw Error(ErrorKind::GridMismatch,
                "Zak grid q = " + std::to_string(q) + " is smaller than the support 2K = " + std::to_string(2 * K));
  }
  if (values_.size() != static_cast<std::size_t>(q * q)) {
    throw Error(ErrorKind::InvalidArgument, "Zak image must hold q*q values");
  }
  double acc = 0.0;
  for (const auto& v : values_) acc += std::norm(v);
  norm_ = std::sqrt(acc) / static_cast<double>(q);
}

cdouble ZakImage::at(std::int64_t i, std::int64_t l) const {
  const std::int64_t m = floor_div(i, q_);
  const std::int64_t r = i - m * q_;
  const std::int64_t lr = mod_q(l, q_);
  return roots_(-m * lr) * (*this)(r, lr);
}

ZakImage zak_transform(const SampledWindow& w, std::int64_t q) {
  const std::int64_t K = w.half_support();
  const bool onGrid = w.q() == q;
  if (!onGrid && !w.analytic()) {
    throw Error(ErrorKind::GridMismatch,
                "window step 1/" + std::to_string(w.q()) + " does not match the Zak grid 1/" + std::to_string(q));
  }
  if (2 * K > q) {
    throw Error(ErrorKind::GridMismatch,
                "Zak grid q = " + std::to_string(q) + " is smaller than the support 2K = " + std::to_string(2 * K));
  }
  RootTable roots(q);
  std::vector<cdouble> values(static_cast<std::size_t>(q * q));
  std::vector<cdouble> column(static_cast<std::size_t>(2 * K));
  double tail = 0.0;
  for (std::int64_t i = 0; i < q; ++i) {
    for (std::int64_t k = -K; k < K; ++k) {
      cdouble v;
      if (onGrid) {
        v = w[static_cast<std::size_t>(i + (k + K) * q)];
      } else {
        v = w.evaluate(static_cast<double>(i) / static_cast<double>(q) + static_cast<double>(k));
      }
      column[static_cast<std::size_t>(k + K)] = v;
    }
    if (!onGrid) {
      // Mass of the generator just outside the truncated sum.
      double rowTail = 0.0;
      const double t = static_cast<double>(i) / static_cast<double>(q);
      for (std::int64_t k = 0; k < 4; ++k) {
        rowTail += std::abs(w.generator()(t + static_cast<double>(K + k)));
        rowTail += std::abs(w.generator()(t - static_cast<double>(K + 1 + k)));
      }
      tail = std::max(tail, rowTail);
    }
    for (std::int64_t l = 0; l < q; ++l) {
      cdouble acc{};
      for (std::int64_t k = -K; k < K; ++k) acc += column[static_cast<std::size_t>(k + K)] * roots(k * l);
      values[static_cast<std::size_t>(i * q + l)] = acc;
    }
  }
  return ZakImage(q, K, std::move(values), tail);
}

SampledWindow inverse_zak(const ZakImage& z) {
  const std::int64_t q = z.q();
  const std::int64_t K = z.half_support();
  RootTable roots(q);
  std::vector<cdouble> samples(static_cast<std::size_t>(2 * K * q));
  for (std::int64_t i = 0; i < q; ++i) {
    for (std::int64_t k = -K; k < K; ++k) {
      cdouble acc{};
      for (std::int64_t l = 0; l < q; ++l) acc += z(i, l) * roots(-k * l);
      samples[static_cast<std::size_t>(i + (k + K) * q)] = acc / static_cast<double>(q);
    }
  }
  return SampledWindow(WindowKind::Custom, q, K, std::move(samples));
}

cdouble zak_point(const SampledWindow& w, double t, double omega) {
  if (!w.analytic()) throw Error(ErrorKind::UnsupportedShift, "off-grid Zak evaluation needs an analytic window");
  const std::int64_t K = w.half_support();
  cdouble acc{};
  for (std::int64_t k = -K; k < K; ++k) {
    acc += w.evaluate(t + static_cast<double>(k)) * cis_neg(static_cast<double>(k) * omega);
  }
  return acc;
}

std::string_view to_string(ZakIdentity id) {
  switch (id) {
    case ZakIdentity::Translation: return "translation";
    case ZakIdentity::Modulation: return "modulation";
    case ZakIdentity::ModTrans: return "modtrans";
    case ZakIdentity::QuasiPeriodT: return "quasiperiod_t";
    case ZakIdentity::PeriodOmega: return "period_omega";
  }
  return "unknown";
}

double check_zak_identity(const ZakIdentityCase& which, const SampledWindow& w, std::int64_t q) {
  const ZakImage z = zak_transform(w, q);
  RootTable roots(q);
  double worst = 0.0;
  auto track = [&](cdouble lhs, cdouble rhs) { worst = std::max(worst, std::abs(lhs - rhs)); };

  switch (which.id) {
    case ZakIdentity::Translation: {
      const ZakImage zs = zak_transform(apply_tf_shift(w, 1.0, 0.0), q);
      for (std::int64_t i = 0; i < q; ++i)
        for (std::int64_t l = 0; l < q; ++l) track(zs(i, l), roots(l) * z(i, l));
      break;
    }
    case ZakIdentity::Modulation: {
      const ZakImage zm = zak_transform(apply_tf_shift(w, 0.0, 1.0), q);
      for (std::int64_t i = 0; i < q; ++i)
        for (std::int64_t l = 0; l < q; ++l) track(zm(i, l), roots(i) * z(i, l));
      break;
    }
    case ZakIdentity::ModTrans: {
      const double as = which.alpha * static_cast<double>(q);
      const double bs = which.beta * static_cast<double>(q);
      const bool onGrid = std::fabs(as - std::nearbyint(as)) <= 1e-9 && std::fabs(bs - std::nearbyint(bs)) <= 1e-9;
      if (!onGrid && !w.analytic()) {
        throw Error(ErrorKind::UnsupportedShift, "off-grid modulation/translation of a sampled window");
      }
      const ZakImage lhs = zak_transform(apply_tf_shift(w, which.beta, which.alpha), q);
      if (onGrid) {
        const auto a = static_cast<std::int64_t>(std::nearbyint(as));
        const auto b = static_cast<std::int64_t>(std::nearbyint(bs));
        for (std::int64_t i = 0; i < q; ++i)
          for (std::int64_t l = 0; l < q; ++l) track(lhs(i, l), chirp(a, i, q) * z.at(i - b, l + a));
      } else {
        for (std::int64_t i = 0; i < q; ++i) {
          const double t = static_cast<double>(i) / static_cast<double>(q);
          for (std::int64_t l = 0; l < q; ++l) {
            const double om = static_cast<double>(l) / static_cast<double>(q);
            track(lhs(i, l), cis_neg(which.alpha * t) * zak_point(w, t - which.beta, om + which.alpha));
          }
        }
      }
      break;
    }
    case ZakIdentity::QuasiPeriodT: {
      for (std::int64_t j = -2; j <= 2; ++j)
        for (std::int64_t i = 0; i < q; ++i)
          for (std::int64_t l = 0; l < q; ++l) track(z.at(i + j * q, l), roots(-j * l) * z(i, l));
      break;
    }
    case ZakIdentity::PeriodOmega: {
      for (std::int64_t j = -2; j <= 2; ++j)
        for (std::int64_t i = 0; i < q; ++i)
          for (std::int64_t l = 0; l < q; ++l) track(z.at(i, l + j * q), z(i, l));
      break;
    }
  }
  return worst;
}

double zak_equation_residual(const ZakImage& F, const TrigPolynomial2& p, double alpha, double beta,
                             std::optional<std::span<const std::array<std::int64_t, 2>>> points) {
  const std::int64_t q = F.q();
  const std::int64_t a = require_grid_multiple(alpha, q, "alpha");
  const std::int64_t b = require_grid_multiple(beta, q, "beta");
  const double qd = static_cast<double>(q);
  double worst = 0.0;
  auto visit = [&](std::int64_t i, std::int64_t l) {
    const cdouble lhs = eval_p2(p, static_cast<double>(i) / qd, static_cast<double>(l) / qd) * F(i, l);
    const cdouble rhs = chirp(a, i, q) * F.at(i - b, l + a);
    worst = std::max(worst, std::abs(lhs - rhs));
  };
  if (points) {
    for (const auto& pt : *points) visit(mod_q(pt[0], q), mod_q(pt[1], q));
  } else {
    for (std::int64_t i = 0; i < q; ++i)
      for (std::int64_t l = 0; l < q; ++l) visit(i, l);
  }
  return worst;
}

OrbitSynthesis synthesize_orbit_image(std::int64_t q, const TrigPolynomial2& p, double alpha, double beta,
                                      std::array<std::int64_t, 2> start, double seed, std::size_t steps) {
  if (q < 2) throw Error(ErrorKind::InvalidArgument, "synthesis grid needs q >= 2");
  if (steps < 1) throw Error(ErrorKind::InvalidArgument, "synthesis needs at least one step");
  const std::int64_t a = require_grid_multiple(alpha, q, "alpha");
  const std::int64_t b = require_grid_multiple(beta, q, "beta");
  const std::int64_t periodT = q / std::gcd(b, q);
  const std::int64_t periodW = q / std::gcd(a, q);
  const auto period = static_cast<std::size_t>(std::lcm(periodT, periodW));
  if (steps > period) {
    throw Error(ErrorKind::InvalidArgument,
                "steps = " + std::to_string(steps) + " exceeds the orbit period " + std::to_string(period));
  }

  const double qd = static_cast<double>(q);
  const TorusPoint z0(static_cast<double>(start[0]) / qd, static_cast<double>(start[1]) / qd);
  const auto moduli = propagate_F(seed, p, Shift2{-beta, alpha}, z0, steps - 1);

  RootTable roots(q);
  std::vector<cdouble> values(static_cast<std::size_t>(q * q));
  std::vector<std::array<std::int64_t, 2>> path;
  path.reserve(steps);
  std::int64_t i = mod_q(start[0], q);
  std::int64_t l = mod_q(start[1], q);
  cdouble current(seed, 0.0);
  values[static_cast<std::size_t>(i * q + l)] = current;
  path.push_back({i, l});
  for (std::size_t j = 1; j < steps; ++j) {
    // Z(sigma z) = e^{-2 pi i m w'} e^{2 pi i alpha t} p(z) Z(z), where
    // i - b = r + m q and w' = (l + a) / q.
    const std::int64_t m = floor_div(i - b, q);
    const std::int64_t ni = i - b - m * q;
    const std::int64_t nl = mod_q(l + a, q);
    const cdouble raw = roots(m * (l + a)) * std::conj(chirp(a, i, q)) *
                        eval_p2(p, static_cast<double>(i) / qd, static_cast<double>(l) / qd) * current;
    const double mod = std::abs(raw);
    current = mod > 0.0 ? raw / mod * moduli[j] : cdouble{};
    i = ni;
    l = nl;
    values[static_cast<std::size_t>(i * q + l)] = current;
    path.push_back({i, l});
  }
  return OrbitSynthesis{ZakImage(q, q / 2, std::move(values)), std::move(path)};
}

}  // namespace hrtlab
