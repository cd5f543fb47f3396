#pragma once

#include <span>
#include <vector>

#include "hrtlab/tf_core.hpp"
#include "hrtlab/window.hpp"

namespace hrtlab {

/// (M_y T_x f)(t) = exp(-2 pi i y t) f(t - x), sampled on the window's grid.
///
/// Grid-aligned x (a multiple of h within 1e-12) is applied as an exact index
/// shift. Otherwise the window must be analytic and f(t_j - x) is taken from
/// the generator (OffGridShift if it is not). Source values outside [-K, K)
/// are zero. The result is a Custom window; it stays analytic when the input
/// was.
SampledWindow apply_tf_shift(const SampledWindow& w, const TFPoint& pt);
SampledWindow apply_tf_shift(const SampledWindow& w, double x, double y);

/// Fraction of ||w||^2 that the shift by x pushes outside [-K, K).
double shift_leakage(const SampledWindow& w, double x);

/// Hermitian n x n matrix, stored row-major.
class GramMatrix {
 public:
  /// Symmetrises the input: the upper triangle wins, the diagonal is made real.
  GramMatrix(std::size_t n, std::vector<cdouble> entries);

  std::size_t dim() const { return n_; }
  const cdouble& operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  std::span<const cdouble> entries() const { return entries_; }

 private:
  std::size_t n_;
  std::vector<cdouble> entries_;
};

/// entries[i][j] = h * sum_t conj(w_i(t)) w_j(t). GridMismatch when the
/// windows do not share h and K.
GramMatrix gram_matrix(std::span<const SampledWindow> windows);

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations, ascending.
std::vector<double> hermitian_eigenvalues(const GramMatrix& g);

/// sqrt(max(0, lambda_min(G))).
double min_singular(const GramMatrix& g);

struct IndependenceReport {
  double minSingular = 0.0;
  /// sigma_max / sigma_min; +inf when sigma_min is 0.
  double conditionNumber = 0.0;
  double gridStep = 0.0;
  std::int64_t halfSupport = 0;
  /// Largest shift_leakage over the configuration's points.
  double leakage = 0.0;
};

IndependenceReport independence_margin(const SampledWindow& w, const Configuration& cfg);

/// ||sum_k c_k M_{y_k} T_{x_k} f - M_alpha T_beta f|| / ||f||, where the
/// distinguished point is (beta, alpha) and c runs over the remaining points
/// in order.
double dependency_residual(const SampledWindow& w, const Configuration& cfg, const CoefficientVector& c);

struct SweepRow {
  double alpha = 0.0;
  double beta = 0.0;
  IndependenceReport report;
};

/// Independence margins of base + {M_alpha T_beta}, i.e. the extra point
/// (x, y) = (beta, alpha), over the grid alphas x betas. Rows are row-major
/// with alpha outer. When the extra point coincides with a base point the
/// configuration is the base set itself. `threads` = 0 picks the hardware
/// concurrency.
std::vector<SweepRow> independence_sweep(const SampledWindow& w, const std::vector<TFPoint>& base,
                                         std::span<const double> alphas, std::span<const double> betas,
                                         unsigned threads = 1);

}  // namespace hrtlab
