#pragma once

// Discrete Zak transform on the half-open torus grid [0,1)^2 with q points
// per axis:
//
//   Zf(i/q, l/q) = sum_{k=-K}^{K-1} f(i/q + k) exp(-2 pi i k l / q)
//
// With 2K <= q no two k share a residue mod q, which makes the transform an
// isometry between h * sum |f|^2 and (1/q^2) sum |Zf|^2, and inverse_zak a
// left inverse. It is a two-sided inverse only when 2K = q.

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hrtlab/phase.hpp"
#include "hrtlab/torus.hpp"
#include "hrtlab/window.hpp"

namespace hrtlab {

class ZakImage {
 public:
  /// values is q*q, row-major with index (i, l) -> Zf(i/q, l/q).
  /// Requires 2K <= q (GridMismatch otherwise).
  ZakImage(std::int64_t q, std::int64_t K, std::vector<cdouble> values, double truncationTail = 0.0);

  std::int64_t q() const { return q_; }
  std::int64_t half_support() const { return K_; }
  std::span<const cdouble> values() const { return values_; }
  const cdouble& operator()(std::int64_t i, std::int64_t l) const {
    return values_[static_cast<std::size_t>(i * q_ + l)];
  }

  /// Value at the grid point (i/q, l/q) for any integers i, l: the t-argument
  /// is reduced with Zf(t + m, w) = exp(2 pi i m w) Zf(t, w), the
  /// w-argument by periodicity.
  cdouble at(std::int64_t i, std::int64_t l) const;

  /// sqrt((1/q^2) sum |values|^2).
  double norm() const { return norm_; }
  /// Upper bound on the discarded |k| >= K terms (0 for sampled windows).
  double truncation_tail() const { return tail_; }

 private:
  std::int64_t q_;
  std::int64_t K_;
  std::vector<cdouble> values_;
  RootTable roots_;
  double norm_;
  double tail_;
};

/// GridMismatch unless the window step is 1/q or the window is analytic.
ZakImage zak_transform(const SampledWindow& w, std::int64_t q);

/// f(i/q + k) = (1/q) sum_l Z(i, l) exp(2 pi i k l / q) for k in [-K, K).
/// The result is a Custom window with step 1/q and the image's K.
SampledWindow inverse_zak(const ZakImage& z);

/// Zak transform at an arbitrary point, from the window's generator (with the
/// window's [-K, K) truncation). Requires an analytic window.
cdouble zak_point(const SampledWindow& w, double t, double omega);

enum class ZakIdentity { Translation, Modulation, ModTrans, QuasiPeriodT, PeriodOmega };

std::string_view to_string(ZakIdentity id);

struct ZakIdentityCase {
  ZakIdentity id = ZakIdentity::Translation;
  /// ModTrans parameters: checks Z(M_alpha T_beta f).
  double alpha = 0.0;
  double beta = 0.0;
};

/// Maximum over the torus grid of |LHS - RHS| for the selected identity.
///   Translation:  Z(T_1 f)(t,w)          = e^{-2 pi i w} Zf(t,w)
///   Modulation:   Z(M_1 f)(t,w)          = e^{-2 pi i t} Zf(t,w)
///   ModTrans:     Z(M_a T_b f)(t,w)      = e^{-2 pi i a t} Zf(t-b, w+a)
///   QuasiPeriodT: Zf(t+j,w)              = e^{2 pi i j w} Zf(t,w),  j in [-2,2]
///   PeriodOmega:  Zf(t,w+j)              = Zf(t,w),                 j in [-2,2]
/// ModTrans with (alpha, beta) off the 1/q grid requires an analytic window
/// (UnsupportedShift otherwise).
double check_zak_identity(const ZakIdentityCase& which, const SampledWindow& w, std::int64_t q);

/// max |p(t,w) F(t,w) - e^{-2 pi i alpha t} F(t - beta, w + alpha)| over the
/// grid, or over `points` (grid indices (i, l)) when given. alpha and beta
/// must be multiples of 1/q (GridMismatch otherwise).
double zak_equation_residual(const ZakImage& F, const TrigPolynomial2& p, double alpha, double beta,
                             std::optional<std::span<const std::array<std::int64_t, 2>>> points = std::nullopt);

struct OrbitSynthesis {
  ZakImage image;
  /// Grid indices of the orbit, in visiting order.
  std::vector<std::array<std::int64_t, 2>> orbit;
};

/// Builds F on the grid orbit of start under the rotation by
/// gamma = (-beta, alpha): moduli come from propagate_F, phases from the
/// functional equation. Every grid point off the orbit is zero. `steps` must
/// not exceed the orbit period.
OrbitSynthesis synthesize_orbit_image(std::int64_t q, const TrigPolynomial2& p, double alpha, double beta,
                                      std::array<std::int64_t, 2> start, double seed, std::size_t steps);

}  // namespace hrtlab
