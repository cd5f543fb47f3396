#include "hrtlab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hrtlab/error.hpp"
#include "hrtlab/parallel.hpp"
#include "hrtlab/phase.hpp"

namespace hrtlab {

namespace {

// Returns the index offset when x is a multiple of 1/q (within 1e-12).
std::optional<std::int64_t> grid_offset(double x, std::int64_t q) {
  double scaled = x * static_cast<double>(q);
  double m = std::nearbyint(scaled);
  if (std::fabs(scaled - m) <= 1e-12 * std::max(1.0, std::fabs(scaled))) return static_cast<std::int64_t>(m);
  return std::nullopt;
}

}  // namespace

SampledWindow apply_tf_shift(const SampledWindow& w, const TFPoint& pt) {
  return apply_tf_shift(w, pt.x.value(), pt.y.value());
}

SampledWindow apply_tf_shift(const SampledWindow& w, double x, double y) {
  const std::size_t n = w.size();
  std::vector<cdouble> out(n);
  auto offset = grid_offset(x, w.q());
  if (offset) {
    const auto m = *offset;
    for (std::size_t j = 0; j < n; ++j) {
      const std::int64_t src = static_cast<std::int64_t>(j) - m;
      if (src < 0 || src >= static_cast<std::int64_t>(n)) continue;
      out[j] = w[static_cast<std::size_t>(src)];
    }
  } else {
    if (!w.analytic()) {
      throw Error(ErrorKind::OffGridShift,
                  "shift x = " + std::to_string(x) + " is off the 1/" + std::to_string(w.q()) + " grid");
    }
    for (std::size_t j = 0; j < n; ++j) out[j] = w.evaluate(w.time(j) - x);
  }
  if (y != 0.0) {
    for (std::size_t j = 0; j < n; ++j) out[j] *= cis_neg(y * w.time(j));
  }

  WindowGenerator gen;
  if (w.analytic()) {
    gen = [base = w, x, y](double t) { return cis_neg(y * t) * base.evaluate(t - x); };
  }
  return SampledWindow(WindowKind::Custom, w.q(), w.half_support(), std::move(out), std::move(gen));
}

double shift_leakage(const SampledWindow& w, double x) {
  const auto n = static_cast<std::int64_t>(w.size());
  double total = 0.0;
  for (const auto& s : w.samples()) total += std::norm(s);
  double lost = 0.0;
  if (auto offset = grid_offset(x, w.q())) {
    for (std::int64_t i = 0; i < n; ++i) {
      std::int64_t dst = i + *offset;
      if (dst < 0 || dst >= n) lost += std::norm(w[static_cast<std::size_t>(i)]);
    }
  } else {
    if (!w.analytic()) throw Error(ErrorKind::OffGridShift, "off-grid shift of a sampled window");
    const std::int64_t reach = static_cast<std::int64_t>(std::ceil(std::fabs(x) * static_cast<double>(w.q()))) + 1;
    const double K = static_cast<double>(w.half_support());
    const double q = static_cast<double>(w.q());
    auto visit = [&](std::int64_t j) {
      double t = (static_cast<double>(j) - K * q) / q;
      lost += std::norm(w.evaluate(t - x));
    };
    for (std::int64_t j = -reach; j < 0; ++j) visit(j);
    for (std::int64_t j = n; j < n + reach; ++j) visit(j);
  }
  return lost / total;
}

GramMatrix::GramMatrix(std::size_t n, std::vector<cdouble> entries) : n_(n), entries_(std::move(entries)) {
  if (entries_.size() != n_ * n_) throw Error(ErrorKind::InvalidArgument, "Gram entries must be n*n");
  for (std::size_t i = 0; i < n_; ++i) {
    entries_[i * n_ + i] = cdouble(entries_[i * n_ + i].real(), 0.0);
    for (std::size_t j = i + 1; j < n_; ++j) entries_[j * n_ + i] = std::conj(entries_[i * n_ + j]);
  }
}

GramMatrix gram_matrix(std::span<const SampledWindow> windows) {
  const std::size_t n = windows.size();
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "Gram matrix of an empty family");
  for (const auto& w : windows) {
    if (w.q() != windows[0].q() || w.half_support() != windows[0].half_support()) {
      throw Error(ErrorKind::GridMismatch, "windows do not share step and support");
    }
  }
  const double h = windows[0].step();
  std::vector<cdouble> entries(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      cdouble acc{};
      auto a = windows[i].samples();
      auto b = windows[j].samples();
      for (std::size_t t = 0; t < a.size(); ++t) acc += std::conj(a[t]) * b[t];
      entries[i * n + j] = h * acc;
    }
  }
  return GramMatrix(n, std::move(entries));
}

std::vector<double> hermitian_eigenvalues(const GramMatrix& g) {
  const std::size_t n = g.dim();
  std::vector<cdouble> a(g.entries().begin(), g.entries().end());
  auto at = [&](std::size_t i, std::size_t j) -> cdouble& { return a[i * n + j]; };

  double frob = 0.0;
  for (const auto& v : a) frob += std::norm(v);
  frob = std::sqrt(frob);

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(at(p, q));
    }
    if (std::sqrt(off) <= 1e-300 || std::sqrt(off) <= 1e-17 * frob) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double mag = std::abs(at(p, q));
        if (mag == 0.0) continue;
        // Rotate the phase out of a_pq: conjugate by diag(1, .., e^{-i phi}
        // at q, ..) so that a_pq becomes real and positive.
        const cdouble phase = at(p, q) / mag;
        for (std::size_t r = 0; r < n; ++r) {
          at(r, q) *= std::conj(phase);
          at(q, r) *= phase;
        }
        at(q, q) = cdouble(at(q, q).real(), 0.0);
        at(p, q) = cdouble(mag, 0.0);
        at(q, p) = cdouble(mag, 0.0);

        // Real symmetric Jacobi rotation on the (p, q) plane.
        const double app = at(p, p).real();
        const double aqq = at(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const cdouble arp = at(r, p);
          const cdouble arq = at(r, q);
          at(r, p) = c * arp - s * arq;
          at(r, q) = s * arp + c * arq;
          at(p, r) = std::conj(at(r, p));
          at(q, r) = std::conj(at(r, q));
        }
        at(p, p) = cdouble(app - t * mag, 0.0);
        at(q, q) = cdouble(aqq + t * mag, 0.0);
        at(p, q) = cdouble{};
        at(q, p) = cdouble{};
      }
    }
  }
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = at(i, i).real();
  std::sort(eig.begin(), eig.end());
  return eig;
}

double min_singular(const GramMatrix& g) {
  const auto eig = hermitian_eigenvalues(g);
  return std::sqrt(std::max(0.0, eig.front()));
}

IndependenceReport independence_margin(const SampledWindow& w, const Configuration& cfg) {
  std::vector<SampledWindow> shifted;
  shifted.reserve(cfg.size());
  IndependenceReport report;
  for (const auto& pt : cfg.points()) {
    shifted.push_back(apply_tf_shift(w, pt));
    report.leakage = std::max(report.leakage, shift_leakage(w, pt.x.value()));
  }
  const auto eig = hermitian_eigenvalues(gram_matrix(shifted));
  const double lo = std::max(0.0, eig.front());
  const double hi = std::max(0.0, eig.back());
  report.minSingular = std::sqrt(lo);
  report.conditionNumber = lo > 0.0 ? std::sqrt(hi / lo) : std::numeric_limits<double>::infinity();
  report.gridStep = w.step();
  report.halfSupport = w.half_support();
  return report;
}

double dependency_residual(const SampledWindow& w, const Configuration& cfg, const CoefficientVector& c) {
  if (!cfg.distinguished()) {
    throw Error(ErrorKind::NoDistinguishedPoint, "dependency residual needs a distinguished point");
  }
  const std::size_t dist = *cfg.distinguished();
  if (c.size() + 1 != cfg.size()) {
    throw Error(ErrorKind::InvalidArgument, "need one coefficient per non-distinguished point");
  }
  std::vector<cdouble> acc(w.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < cfg.size(); ++i) {
    const SampledWindow s = apply_tf_shift(w, cfg[i]);
    const cdouble coef = i == dist ? cdouble(-1.0, 0.0) : c[k++];
    for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += coef * s[j];
  }
  double num = 0.0;
  for (const auto& v : acc) num += std::norm(v);
  num = std::sqrt(num * w.step());
  return num / w.norm();
}

std::vector<SweepRow> independence_sweep(const SampledWindow& w, const std::vector<TFPoint>& base,
                                         std::span<const double> alphas, std::span<const double> betas,
                                         unsigned threads) {
  // Validates the base set once up front.
  Configuration baseCfg(base);
  std::vector<SweepRow> rows(alphas.size() * betas.size());
  parallel_for(rows.size(), threads, [&](std::size_t idx) {
    const double alpha = alphas[idx / betas.size()];
    const double beta = betas[idx % betas.size()];
    TFPoint extra{Real(beta), Real(alpha)};
    std::vector<TFPoint> pts = base;
    bool coincident = std::any_of(base.begin(), base.end(), [&](const TFPoint& p) {
      return p.x.value() == beta && p.y.value() == alpha;
    });
    if (!coincident) pts.push_back(extra);
    rows[idx] = SweepRow{alpha, beta, independence_margin(w, Configuration(std::move(pts)))};
  });
  return rows;
}

}  // namespace hrtlab
