#include "hrtlab/torus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "hrtlab/error.hpp"
#include "hrtlab/phase.hpp"
#include "hrtlab/relations.hpp"

namespace hrtlab {

double wrap_unit(double x) {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

double torus_distance(const TorusPoint& a, const TorusPoint& b) {
  auto wrapped = [](double u, double v) {
    double d = std::fabs(u - v);
    return std::min(d, 1.0 - d);
  };
  return std::max(wrapped(a.t, b.t), wrapped(a.omega, b.omega));
}

TrigPolynomial2::TrigPolynomial2(std::vector<TrigTerm> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw Error(ErrorKind::InvalidArgument, "trigonometric polynomial needs a term");
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (!(std::abs(terms_[i].c) > 0.0)) throw Error(ErrorKind::InvalidArgument, "coefficients must be nonzero");
    for (std::size_t j = 0; j < i; ++j) {
      if (terms_[i].y == terms_[j].y && terms_[i].x == terms_[j].x) {
        throw Error(ErrorKind::InvalidArgument, "repeated frequency in trigonometric polynomial");
      }
    }
  }
}

TorusPoint sigma_step(const TorusPoint& z, const Shift2& gamma) {
  return TorusPoint(z.t + gamma.t, z.omega + gamma.omega);
}

std::vector<TorusPoint> orbit(const TorusPoint& z, const Shift2& gamma, std::size_t n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "orbit length must be >= 1");
  std::vector<TorusPoint> out;
  out.reserve(n);
  out.push_back(z);
  for (std::size_t j = 1; j < n; ++j) out.push_back(sigma_step(out.back(), gamma));
  return out;
}

std::int64_t rational_orbit_period(const Rational& gammaT, const Rational& gammaOmega) {
  return checked_lcm(gammaT.den(), gammaOmega.den());
}

cdouble eval_p2(const TrigPolynomial2& p, double t, double omega) {
  cdouble acc{};
  for (const auto& term : p.terms()) acc += term.c * cis_neg(term.y * t + term.x * omega);
  return acc;
}

OrbitProductLedger orbit_log_product(const TrigPolynomial2& p, const TorusPoint& z, const Shift2& gamma,
                                     std::size_t n, double epsZero) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "orbit product length must be >= 1");
  if (!(epsZero > 0.0)) throw Error(ErrorKind::InvalidArgument, "zero threshold must be positive");
  OrbitProductLedger ledger;
  ledger.gamma = gamma;
  ledger.logSums.reserve(n + 1);
  ledger.logSums.push_back(0.0);
  CompensatedSum sum;
  TorusPoint cur = z;
  for (std::size_t j = 0; j < n; ++j) {
    const double mod = std::abs(eval_p2(p, cur));
    if (mod < epsZero) {
      ledger.zeroHits.push_back(j);
    } else {
      sum.add(std::log(mod));
    }
    ledger.logSums.push_back(sum.value());
    cur = sigma_step(cur, gamma);
  }
  return ledger;
}

std::vector<double> propagate_F(double seed, const TrigPolynomial2& p, const Shift2& gamma, const TorusPoint& z,
                                std::size_t n) {
  if (!(seed > 0.0)) throw Error(ErrorKind::InvalidArgument, "seed must be positive");
  std::vector<double> out;
  out.reserve(n + 1);
  out.push_back(seed);
  TorusPoint cur = z;
  for (std::size_t j = 0; j < n; ++j) {
    out.push_back(std::abs(eval_p2(p, cur)) * out.back());
    cur = sigma_step(cur, gamma);
  }
  return out;
}

std::optional<std::size_t> recurrence_probe(const TorusPoint& z, const Shift2& gamma, double eps,
                                            std::size_t maxN) {
  if (!(eps > 0.0) || maxN < 1) throw Error(ErrorKind::InvalidArgument, "recurrence probe needs eps > 0, maxN >= 1");
  TorusPoint cur = z;
  for (std::size_t n = 1; n <= maxN; ++n) {
    cur = sigma_step(cur, gamma);
    if (torus_distance(cur, z) < eps) return n;
  }
  return std::nullopt;
}

double discrepancy(std::span<const TorusPoint> points, std::size_t gridRes) {
  if (gridRes < 2) throw Error(ErrorKind::InvalidArgument, "gridRes must be >= 2");
  if (points.empty()) throw Error(ErrorKind::InvalidArgument, "discrepancy of an empty point set");
  const std::size_t g = gridRes;
  // counts[(a) * (g+1) + b] = #points with cell_t < a and cell_w < b.
  std::vector<std::size_t> counts((g + 1) * (g + 1), 0);
  for (const auto& z : points) {
    auto cell = [g](double v) {
      auto c = static_cast<std::size_t>(std::floor(v * static_cast<double>(g)));
      return std::min(c, g - 1);
    };
    counts[(cell(z.t) + 1) * (g + 1) + cell(z.omega) + 1] += 1;
  }
  for (std::size_t a = 1; a <= g; ++a) {
    for (std::size_t b = 1; b <= g; ++b) {
      counts[a * (g + 1) + b] += counts[(a - 1) * (g + 1) + b] + counts[a * (g + 1) + b - 1] -
                                 counts[(a - 1) * (g + 1) + b - 1];
    }
  }
  const double N = static_cast<double>(points.size());
  const double gd = static_cast<double>(g);
  double worst = 0.0;
  for (std::size_t a = 1; a <= g; ++a) {
    for (std::size_t b = 1; b <= g; ++b) {
      double frac = static_cast<double>(counts[a * (g + 1) + b]) / N;
      double area = (static_cast<double>(a) / gd) * (static_cast<double>(b) / gd);
      worst = std::max(worst, std::fabs(frac - area));
    }
  }
  return worst;
}

TorusPoint ToralLine::point_at(double s) const {
  return TorusPoint(anchor.t + s * direction.t, anchor.omega + s * direction.omega);
}

namespace {

std::int64_t sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

// Integer direction (u, v) with the signs of gamma, or nullopt when the slope
// is not rational within the bound.
std::optional<std::array<std::int64_t, 2>> float_winding(const Shift2& gamma) {
  if (gamma.t == 0.0) return std::array<std::int64_t, 2>{0, sign_of(gamma.omega)};
  if (gamma.omega == 0.0) return std::array<std::int64_t, 2>{sign_of(gamma.t), 0};
  const std::vector<Real> vals{Real(gamma.t), Real(gamma.omega)};
  auto cert = is_rationally_independent(vals, kLineMaxDenominator, 1e-12);
  if (cert.independent) return std::nullopt;
  // q1 gamma_t + q2 gamma_w = 0  =>  gamma proportional to (-q2, q1).
  std::int64_t u = -cert.relation->coefficients[1];
  std::int64_t v = cert.relation->coefficients[0];
  std::int64_t g = std::gcd(u, v);
  u /= g;
  v /= g;
  if (sign_of(static_cast<double>(u)) != sign_of(gamma.t)) {
    u = -u;
    v = -v;
  }
  return std::array<std::int64_t, 2>{u, v};
}

std::optional<std::optional<std::array<std::int64_t, 2>>> exact_winding(const Real& gt, const Real& gw) {
  if (!gt.is_exact() || !gw.is_exact()) return std::nullopt;
  const QuadSurd& a = *gt.exact();
  const QuadSurd& b = *gw.exact();
  if (a.is_zero() && b.is_zero()) throw Error(ErrorKind::ZeroDirection, "toral line direction is zero");
  if (a.is_zero()) return std::optional<std::array<std::int64_t, 2>>({0, sign_of(b.to_double())});
  if (b.is_zero()) return std::optional<std::array<std::int64_t, 2>>({sign_of(a.to_double()), 0});
  if (!a.is_rational() && !b.is_rational() && a.radicand() != b.radicand()) {
    return std::optional<std::array<std::int64_t, 2>>{};
  }
  // b = rho * a with rho rational?
  Rational rho;
  if (!a.rational_part().is_zero()) {
    rho = b.rational_part() / a.rational_part();
  } else {
    if (b.surd_coefficient().is_zero()) return std::optional<std::array<std::int64_t, 2>>{};
    rho = b.surd_coefficient() / a.surd_coefficient();
  }
  if (!(b.rational_part() == rho * a.rational_part()) || !(b.surd_coefficient() == rho * a.surd_coefficient())) {
    return std::optional<std::array<std::int64_t, 2>>{};
  }
  if (rho.den() > kLineMaxDenominator) return std::optional<std::array<std::int64_t, 2>>{};
  // (u, v) = sign(a) * (den, num)
  std::int64_t s = sign_of(a.to_double());
  return std::optional<std::array<std::int64_t, 2>>({s * rho.den(), s * rho.num()});
}

// Parameter of the next integer crossing of lambda_c + s d_c strictly after s.
double next_crossing(double lambda, double d, double s) {
  if (d == 0.0) return std::numeric_limits<double>::infinity();
  const double pos = lambda + s * d;
  double k = d > 0.0 ? std::floor(pos) + 1.0 : std::ceil(pos) - 1.0;
  double next = (k - lambda) / d;
  if (next <= s + 1e-13) {
    k += d > 0.0 ? 1.0 : -1.0;
    next = (k - lambda) / d;
  }
  return next;
}

// Parameter of the last integer crossing at or before 0.
double previous_crossing(double lambda, double d) {
  if (d == 0.0) return -std::numeric_limits<double>::infinity();
  const double k = d > 0.0 ? std::floor(lambda) : std::ceil(lambda);
  return (k - lambda) / d;
}

ToralLine build_line(const TorusPoint& lambda, const Shift2& dir, bool closed,
                     std::optional<std::array<std::int64_t, 2>> winding, std::size_t maxSegments) {
  ToralLine line;
  line.anchor = lambda;
  line.direction = dir;
  line.closed = closed;
  line.winding = winding;

  const double start = std::max(previous_crossing(lambda.t, dir.t), previous_crossing(lambda.omega, dir.omega));
  const double stop = closed ? start + 1.0 : std::numeric_limits<double>::infinity();
  const std::size_t limit = closed ? std::numeric_limits<std::size_t>::max() : maxSegments;
  double s = start;
  while (line.segments.size() < limit) {
    double next = std::min(next_crossing(lambda.t, dir.t, s), next_crossing(lambda.omega, dir.omega, s));
    if (closed && next > stop - 1e-12) next = stop;
    const double mid = 0.5 * (s + next);
    const double baseT = std::floor(lambda.t + mid * dir.t);
    const double baseW = std::floor(lambda.omega + mid * dir.omega);
    line.segments.push_back(Segment{lambda.t + s * dir.t - baseT, lambda.omega + s * dir.omega - baseW,
                                    lambda.t + next * dir.t - baseT, lambda.omega + next * dir.omega - baseW});
    s = next;
    if (closed && s >= stop) break;
  }
  line.period = closed ? 1.0 : s - start;
  return line;
}

}  // namespace

ToralLine toral_line(const TorusPoint& lambda, const Shift2& gamma, std::size_t maxSegments) {
  if (gamma.t == 0.0 && gamma.omega == 0.0) throw Error(ErrorKind::ZeroDirection, "toral line direction is zero");
  if (auto w = float_winding(gamma)) {
    Shift2 dir{static_cast<double>((*w)[0]), static_cast<double>((*w)[1])};
    return build_line(lambda, dir, true, w, maxSegments);
  }
  const double scale = std::max(std::fabs(gamma.t), std::fabs(gamma.omega));
  return build_line(lambda, Shift2{gamma.t / scale, gamma.omega / scale}, false, std::nullopt, maxSegments);
}

ToralLine toral_line(const TorusPoint& lambda, const Real& gammaT, const Real& gammaOmega, std::size_t maxSegments) {
  if (auto ex = exact_winding(gammaT, gammaOmega)) {
    if (*ex) {
      const auto& w = **ex;
      return build_line(lambda, Shift2{static_cast<double>(w[0]), static_cast<double>(w[1])}, true, w,
                        maxSegments);
    }
    const double scale = std::max(std::fabs(gammaT.value()), std::fabs(gammaOmega.value()));
    return build_line(lambda, Shift2{gammaT.value() / scale, gammaOmega.value() / scale}, false, std::nullopt,
                      maxSegments);
  }
  return toral_line(lambda, Shift2{gammaT.value(), gammaOmega.value()}, maxSegments);
}

ConstancyReport p_constancy_on_line(const TrigPolynomial2& p, const ToralLine& line, std::size_t samples) {
  if (samples < 2) throw Error(ErrorKind::InvalidArgument, "need at least two samples along the line");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  CompensatedSum sum;
  for (std::size_t k = 0; k < samples; ++k) {
    const double s = line.period * static_cast<double>(k) / static_cast<double>(samples);
    const double m = std::abs(eval_p2(p, line.point_at(s)));
    lo = std::min(lo, m);
    hi = std::max(hi, m);
    sum.add(m);
  }
  return ConstancyReport{hi - lo, sum.value() / static_cast<double>(samples)};
}

}  // namespace hrtlab
