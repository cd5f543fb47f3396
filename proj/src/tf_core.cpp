#include "hrtlab/tf_core.hpp"

#include <cmath>

#include <json.hpp>

#include "hrtlab/error.hpp"

namespace hrtlab {

namespace {

using Vec2 = std::array<double, 2>;

Vec2 as_vec(const TFPoint& p) { return {p.x.value(), p.y.value()}; }

bool is_integral(const Real& r, bool& exact) {
  if (r.exact()) return r.exact()->is_integer();
  exact = false;
  return std::fabs(r.value() - std::nearbyint(r.value())) <= kIntegralityTolerance;
}

bool is_lattice_point(const TFPoint& p, bool& exact) {
  bool ix = is_integral(p.x, exact);
  bool iy = is_integral(p.y, exact);
  return ix && iy;
}

// Exact cross product (q - p) x (r - p) when every coordinate is exact and
// lives in one quadratic field.
std::optional<bool> exact_cross_is_zero(const TFPoint& p, const TFPoint& q, const TFPoint& r) {
  for (const TFPoint* pt : {&p, &q, &r}) {
    if (!pt->x.is_exact() || !pt->y.is_exact()) return std::nullopt;
  }
  auto ax = sub(*q.x.exact(), *p.x.exact());
  auto ay = sub(*q.y.exact(), *p.y.exact());
  auto bx = sub(*r.x.exact(), *p.x.exact());
  auto by = sub(*r.y.exact(), *p.y.exact());
  if (!ax || !ay || !bx || !by) return std::nullopt;
  auto l = mul(*ax, *by);
  auto rr = mul(*ay, *bx);
  if (!l || !rr) return std::nullopt;
  auto c = sub(*l, *rr);
  if (!c) return std::nullopt;
  return c->is_zero();
}

double cross(const Vec2& a, const Vec2& b) { return a[0] * b[1] - a[1] * b[0]; }

Vec2 minus(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }

double norm2(const Vec2& a) { return std::hypot(a[0], a[1]); }

bool float_parallel(const Vec2& a, const Vec2& b) {
  double scale = std::max(1.0, norm2(a) * norm2(b));
  return std::fabs(cross(a, b)) <= kIntegralityTolerance * scale;
}

bool collinear3(const TFPoint& p, const TFPoint& q, const TFPoint& r, bool& exact) {
  if (auto e = exact_cross_is_zero(p, q, r)) return *e;
  exact = false;
  Vec2 pv = as_vec(p);
  return float_parallel(minus(as_vec(q), pv), minus(as_vec(r), pv));
}

// Whether the points at `idx` share one affine line. Fewer than three points
// always do.
bool all_collinear(const std::vector<TFPoint>& pts, const std::vector<std::size_t>& idx, bool& exact) {
  if (idx.size() < 3) return true;
  for (std::size_t k = 2; k < idx.size(); ++k) {
    if (!collinear3(pts[idx[0]], pts[idx[1]], pts[idx[k]], exact)) return false;
  }
  return true;
}

// Exact parallel test for segments (a,b) and (c,d): (b - a) x (d - c) == 0.
bool parallel_segments(const TFPoint& a, const TFPoint& b, const TFPoint& c, const TFPoint& d, bool& exact) {
  bool allExact = true;
  for (const TFPoint* pt : {&a, &b, &c, &d}) {
    if (!pt->x.is_exact() || !pt->y.is_exact()) allExact = false;
  }
  if (allExact) {
    auto ux = sub(*b.x.exact(), *a.x.exact());
    auto uy = sub(*b.y.exact(), *a.y.exact());
    auto vx = sub(*d.x.exact(), *c.x.exact());
    auto vy = sub(*d.y.exact(), *c.y.exact());
    if (ux && uy && vx && vy) {
      auto l = mul(*ux, *vy);
      auto r = mul(*uy, *vx);
      if (l && r) {
        if (auto diff = sub(*l, *r)) return diff->is_zero();
      }
    }
  }
  exact = false;
  return float_parallel(minus(as_vec(b), as_vec(a)), minus(as_vec(d), as_vec(c)));
}

Real real_from_json(const nlohmann::json& v) {
  if (v.is_number_integer()) return Real(Rational(v.get<std::int64_t>()));
  if (v.is_number()) return Real(v.get<double>());
  if (v.is_string()) return parse_real(v.get<std::string>());
  throw Error(ErrorKind::ParseError, "coordinate must be a number or a string, got " + v.dump());
}

std::vector<TFPoint> points_from_json(const nlohmann::json& arr) {
  if (!arr.is_array()) throw Error(ErrorKind::ParseError, "points must be a JSON array");
  std::vector<TFPoint> pts;
  for (const auto& p : arr) {
    if (!p.is_array() || p.size() != 2) throw Error(ErrorKind::ParseError, "each point must be [x, y]");
    pts.emplace_back(real_from_json(p[0]), real_from_json(p[1]));
  }
  return pts;
}

}  // namespace

TFPoint::TFPoint(Real x_, Real y_) : x(std::move(x_)), y(std::move(y_)) {
  if (!std::isfinite(x.value()) || !std::isfinite(y.value())) {
    throw Error(ErrorKind::InvalidArgument, "time-frequency point components must be finite");
  }
}

bool same_point(const TFPoint& a, const TFPoint& b) { return same_value(a.x, b.x) && same_value(a.y, b.y); }

Configuration::Configuration(std::vector<TFPoint> points, std::optional<std::size_t> distinguished)
    : points_(std::move(points)), distinguished_(distinguished) {
  if (points_.empty()) throw Error(ErrorKind::InvalidArgument, "configuration needs at least one point");
  if (distinguished_ && *distinguished_ >= points_.size()) {
    throw Error(ErrorKind::InvalidArgument, "distinguished index out of range");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    for (std::size_t j = i + 1; j < points_.size(); ++j) {
      if (same_point(points_[i], points_[j])) {
        throw Error(ErrorKind::DuplicatePoints,
                    "points " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
      }
    }
  }
}

Configuration parse_configuration_json(std::string_view json) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  if (!doc.is_object() || !doc.contains("points")) {
    throw Error(ErrorKind::ParseError, "configuration must be an object with a \"points\" array");
  }
  std::optional<std::size_t> dist;
  if (doc.contains("distinguished") && !doc["distinguished"].is_null()) {
    dist = doc["distinguished"].get<std::size_t>();
  }
  return Configuration(points_from_json(doc["points"]), dist);
}

std::vector<TFPoint> parse_points_json(std::string_view json) {
  try {
    return points_from_json(nlohmann::json::parse(json));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

std::string_view to_string(ConfigLabel label) {
  switch (label) {
    case ConfigLabel::Lattice: return "Lattice";
    case ConfigLabel::OneZ2: return "OneZ2";
    case ConfigLabel::Collinear1N: return "Collinear1N";
    case ConfigLabel::TwoTwo: return "TwoTwo";
    case ConfigLabel::General: return "General";
  }
  return "General";
}

ConfigClass classify_configuration(const Configuration& cfg) {
  const auto& pts = cfg.points();
  const std::size_t n = pts.size();
  ConfigClass out;
  bool exact = true;

  // Lattice / OneZ2
  std::vector<std::size_t> offLattice;
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_lattice_point(pts[i], exact)) offLattice.push_back(i);
  }
  if (offLattice.empty()) out.matches.push_back(ConfigLabel::Lattice);
  std::optional<std::size_t> oneZ2Off;
  if (n >= 2 && offLattice.size() == 1) {
    out.matches.push_back(ConfigLabel::OneZ2);
    oneZ2Off = offLattice.front();
  }

  // Collinear1N
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  std::optional<std::size_t> colOff;
  bool fully = all_collinear(pts, all, exact);
  bool collinear1N = fully;
  if (!fully) {
    std::vector<std::size_t> order;
    if (cfg.distinguished()) order.push_back(*cfg.distinguished());
    for (std::size_t i = 0; i < n; ++i) {
      if (!cfg.distinguished() || i != *cfg.distinguished()) order.push_back(i);
    }
    for (std::size_t i : order) {
      std::vector<std::size_t> rest;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != i) rest.push_back(k);
      }
      if (rest.size() >= 2 && all_collinear(pts, rest, exact)) {
        // The remaining points are collinear and i is off their line because
        // the whole set is not collinear.
        colOff = i;
        collinear1N = true;
        break;
      }
    }
  }
  if (collinear1N) out.matches.push_back(ConfigLabel::Collinear1N);

  // TwoTwo
  std::optional<std::array<std::array<std::size_t, 2>, 2>> pairing;
  if (n == 4 && !fully) {
    const std::array<std::array<std::size_t, 4>, 3> splits{{{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}}};
    for (const auto& s : splits) {
      const TFPoint& a = pts[s[0]];
      const TFPoint& b = pts[s[1]];
      const TFPoint& c = pts[s[2]];
      const TFPoint& d = pts[s[3]];
      if (parallel_segments(a, b, c, d, exact) && !collinear3(a, b, c, exact)) {
        pairing = std::array<std::array<std::size_t, 2>, 2>{{{s[0], s[1]}, {s[2], s[3]}}};
        break;
      }
    }
  }
  if (pairing) out.matches.push_back(ConfigLabel::TwoTwo);
  out.matches.push_back(ConfigLabel::General);

  out.label = out.matches.front();
  out.exact = exact;
  out.pairing = pairing;
  out.fullyCollinear = fully;
  out.collinearOffPoint = colOff;
  if (collinear1N) {
    std::vector<std::size_t> rest;
    for (std::size_t k = 0; k < n; ++k) {
      if (!colOff || k != *colOff) rest.push_back(k);
    }
    Line line;
    line.anchor = as_vec(pts[rest[0]]);
    line.direction = rest.size() >= 2 ? minus(as_vec(pts[rest[1]]), line.anchor) : Vec2{1.0, 0.0};
    out.line = line;
  }
  if (out.label == ConfigLabel::OneZ2) {
    out.offPoint = oneZ2Off;
  } else if (out.label == ConfigLabel::Collinear1N) {
    out.offPoint = colOff;
  }
  return out;
}

std::array<double, 2> AffineSymplecticMap::apply(const std::array<double, 2>& p) const {
  double dx = p[0] - translation[0];
  double dy = p[1] - translation[1];
  return {matrix[0][0] * dx + matrix[0][1] * dy, matrix[1][0] * dx + matrix[1][1] * dy};
}

std::array<double, 2> AffineSymplecticMap::apply_inverse(const std::array<double, 2>& p) const {
  // det = 1, so the inverse is the adjugate.
  double x = matrix[1][1] * p[0] - matrix[0][1] * p[1];
  double y = -matrix[1][0] * p[0] + matrix[0][0] * p[1];
  return {x + translation[0], y + translation[1]};
}

double AffineSymplecticMap::determinant() const {
  return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0];
}

NormalizedConfiguration normalize_configuration(const Configuration& cfg) {
  const auto& pts = cfg.points();
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        bool exact = true;
        if (collinear3(pts[i], pts[j], pts[k], exact)) continue;
        Vec2 origin = as_vec(pts[i]);
        Vec2 d1 = minus(as_vec(pts[j]), origin);
        Vec2 d2 = minus(as_vec(pts[k]), origin);
        double det = cross(d1, d2);
        double a = -det;
        AffineSymplecticMap map;
        map.translation = origin;
        map.matrix = {{{d1[1], -d1[0]}, {d2[1] / det, -d2[0] / det}}};
        for (auto& row : map.matrix)
          for (auto& v : row) v += 0.0;  // no signed zeros in the output

        std::vector<TFPoint> out;
        out.reserve(n);
        for (std::size_t m = 0; m < n; ++m) {
          if (m == i) {
            out.emplace_back(Real(Rational(0)), Real(Rational(0)));
          } else if (m == j) {
            out.emplace_back(Real(Rational(0)), Real(Rational(1)));
          } else if (m == k) {
            out.emplace_back(Real(a), Real(Rational(0)));
          } else {
            Vec2 q = map.apply(as_vec(pts[m]));
            out.emplace_back(Real(q[0]), Real(q[1]));
          }
        }
        return NormalizedConfiguration{Configuration(std::move(out), cfg.distinguished()), map, a, {i, j, k}};
      }
    }
  }
  throw Error(ErrorKind::Collinear, "no three non-collinear points to normalize against");
}

Configuration apply_linear(const Configuration& cfg, const std::array<std::array<double, 2>, 2>& matrix) {
  bool integerMatrix = true;
  for (const auto& row : matrix) {
    for (double v : row) {
      if (v != std::nearbyint(v) || std::fabs(v) > 1e15) integerMatrix = false;
    }
  }
  std::vector<TFPoint> out;
  out.reserve(cfg.size());
  for (const auto& p : cfg.points()) {
    if (integerMatrix && p.x.is_exact() && p.y.is_exact()) {
      auto m00 = QuadSurd(Rational(static_cast<std::int64_t>(matrix[0][0])));
      auto m01 = QuadSurd(Rational(static_cast<std::int64_t>(matrix[0][1])));
      auto m10 = QuadSurd(Rational(static_cast<std::int64_t>(matrix[1][0])));
      auto m11 = QuadSurd(Rational(static_cast<std::int64_t>(matrix[1][1])));
      auto nx = add(*mul(m00, *p.x.exact()), *mul(m01, *p.y.exact()));
      auto ny = add(*mul(m10, *p.x.exact()), *mul(m11, *p.y.exact()));
      if (nx && ny) {
        out.emplace_back(Real(*nx), Real(*ny));
        continue;
      }
    }
    double x = matrix[0][0] * p.x.value() + matrix[0][1] * p.y.value();
    double y = matrix[1][0] * p.x.value() + matrix[1][1] * p.y.value();
    out.emplace_back(Real(x), Real(y));
  }
  return Configuration(std::move(out), cfg.distinguished());
}

}  // namespace hrtlab
