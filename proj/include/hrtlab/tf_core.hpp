#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hrtlab/exact.hpp"

namespace hrtlab {

/// A time-frequency point (x, y): x is the time shift, y the frequency shift,
/// both in units of the lattice period. The shift operator it names is
/// f(t) -> exp(-2 pi i y t) f(t - x).
struct TFPoint {
  Real x;
  Real y;

  TFPoint() = default;
  TFPoint(Real x_, Real y_);
};

bool same_point(const TFPoint& a, const TFPoint& b);

/// Ordered, pairwise-distinct list of points. The optional distinguished index
/// marks the "extra" point (alpha, beta) of a dependency relation.
class Configuration {
 public:
  explicit Configuration(std::vector<TFPoint> points, std::optional<std::size_t> distinguished = std::nullopt);

  const std::vector<TFPoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  const TFPoint& operator[](std::size_t i) const { return points_[i]; }
  std::optional<std::size_t> distinguished() const { return distinguished_; }

 private:
  std::vector<TFPoint> points_;
  std::optional<std::size_t> distinguished_;
};

/// Parses {"points": [[x,y],...], "distinguished": i|null}. Each coordinate is
/// a JSON number or a string in the exact grammar (see parse_real).
Configuration parse_configuration_json(std::string_view json);

/// Parses a bare JSON array of points "[[x,y],...]".
std::vector<TFPoint> parse_points_json(std::string_view json);

enum class ConfigLabel { Lattice, OneZ2, Collinear1N, TwoTwo, General };

std::string_view to_string(ConfigLabel label);

/// Affine line {anchor + s * direction}.
struct Line {
  std::array<double, 2> anchor{};
  std::array<double, 2> direction{};
};

struct ConfigClass {
  ConfigLabel label = ConfigLabel::General;
  /// Every label whose defining condition holds, in priority order. `label`
  /// is the first entry.
  std::vector<ConfigLabel> matches;
  /// OneZ2: the single non-integer point. Collinear1N: the point off the line
  /// (absent when fully collinear).
  std::optional<std::size_t> offPoint;
  /// Collinear1N: the common line of the remaining points.
  std::optional<Line> line;
  bool fullyCollinear = false;
  /// Collinear1N data, also populated when Collinear1N is a secondary match.
  std::optional<std::size_t> collinearOffPoint;
  /// TwoTwo: the pairing, as two index pairs.
  std::optional<std::array<std::array<std::size_t, 2>, 2>> pairing;
  /// True when every integrality/collinearity decision was made exactly.
  bool exact = true;
};

constexpr double kIntegralityTolerance = 1e-9;

ConfigClass classify_configuration(const Configuration& cfg);

/// x' = A (x - v) with det A = 1.
struct AffineSymplecticMap {
  std::array<std::array<double, 2>, 2> matrix{{{1.0, 0.0}, {0.0, 1.0}}};
  std::array<double, 2> translation{};

  std::array<double, 2> apply(const std::array<double, 2>& p) const;
  std::array<double, 2> apply_inverse(const std::array<double, 2>& p) const;
  double determinant() const;
};

struct NormalizedConfiguration {
  Configuration config;
  AffineSymplecticMap map;
  /// The (a, 0) point's abscissa.
  double a = 0.0;
  /// Indices of the input points mapped to (0,0), (0,1) and (a,0).
  std::array<std::size_t, 3> anchors{};
};

/// Maps the configuration so that it contains (0,0), (0,1) and (a,0), a != 0,
/// using the first non-collinear triple in index order.
NormalizedConfiguration normalize_configuration(const Configuration& cfg);

/// Applies a linear map to every point. Integer matrices acting on exact
/// points stay exact; everything else is computed in double.
Configuration apply_linear(const Configuration& cfg, const std::array<std::array<double, 2>, 2>& matrix);

}  // namespace hrtlab
