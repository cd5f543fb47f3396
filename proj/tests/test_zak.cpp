#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hrtlab/error.hpp"
#include "hrtlab/zak.hpp"

using namespace hrtlab;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvalidArgument;
}

SampledWindow custom_copy(const SampledWindow& w) {
  return make_custom_window(w.step(), w.half_support(), {w.samples().begin(), w.samples().end()});
}

double source_norm_sq(const SampledWindow& w) { return w.norm() * w.norm(); }

double image_norm_sq(const ZakImage& z) { return z.norm() * z.norm(); }

}  // namespace

TEST_CASE("box window has constant Zak transform") {
  const auto z = zak_transform(make_window(WindowKind::Box, 1.0 / 16.0, 2), 16);
  for (auto v : z.values()) CHECK(v == cdouble(1.0, 0.0));
}

TEST_CASE("a single spike at the origin") {
  const std::int64_t q = 8, K = 2;
  std::vector<cdouble> s(static_cast<std::size_t>(2 * K * q));
  s[static_cast<std::size_t>(K * q)] = 1.0;
  const auto z = zak_transform(make_custom_window(1.0 / q, K, s), q);
  for (std::int64_t i = 0; i < q; ++i)
    for (std::int64_t l = 0; l < q; ++l) CHECK(z(i, l) == cdouble(i == 0 ? 1.0 : 0.0, 0.0));
}

TEST_CASE("gaussian Zak transform matches a direct long double sum") {
  const std::int64_t q = 64;
  const auto g = make_window(WindowKind::Gaussian, 1.0 / 64.0, 8);
  const auto z = zak_transform(g, q);
  CHECK(std::fabs(image_norm_sq(z) - source_norm_sq(g)) <= 1e-9 * source_norm_sq(g));

  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::int64_t> idx(0, q - 1);
  const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  for (int trial = 0; trial < 10; ++trial) {
    const auto i = idx(rng), l = idx(rng);
    long double re = 0, im = 0;
    for (std::int64_t k = -8; k < 8; ++k) {
      const long double t = static_cast<long double>(i) / q + k;
      const long double gv = std::pow(2.0L, 0.25L) * std::exp(-std::numbers::pi_v<long double> * t * t);
      const long double ph = -two_pi * static_cast<long double>(k * l) / q;
      re += gv * std::cos(ph);
      im += gv * std::sin(ph);
    }
    CHECK(std::abs(z(i, l) - cdouble(static_cast<double>(re), static_cast<double>(im))) <= 1e-12);
  }
}

TEST_CASE("Zak transform is unitary for every preset") {
  const std::int64_t q = 32;
  for (auto kind : {WindowKind::Gaussian, WindowKind::Box, WindowKind::TwoSidedExponential, WindowKind::Hermite}) {
    const auto w = make_window(kind, 1.0 / q, 6, 3);
    const auto z = zak_transform(w, q);
    CHECK(std::fabs(image_norm_sq(z) - source_norm_sq(w)) <= 1e-9 * source_norm_sq(w));
  }
}

TEST_CASE("analytic windows can be transformed on a different grid") {
  const auto w = make_window(WindowKind::Gaussian, 1.0 / 16.0, 4);
  const auto z = zak_transform(w, 32);
  CHECK(z.q() == 32);
  CHECK(z.truncation_tail() < 1e-20);
  CHECK(kind_of([&] { (void)zak_transform(custom_copy(w), 32); }) == ErrorKind::GridMismatch);
}

TEST_CASE("2K must not exceed q") {
  CHECK(kind_of([] { ZakImage(8, 5, std::vector<cdouble>(64, 1.0)); }) == ErrorKind::GridMismatch);
  CHECK(kind_of([] { (void)zak_transform(make_window(WindowKind::Box, 1.0 / 4.0, 4), 4); }) ==
        ErrorKind::GridMismatch);
}

TEST_CASE("operator identities") {
  const std::int64_t q = 64;
  const auto g = make_window(WindowKind::Gaussian, 1.0 / 64.0, 8);
  CHECK(check_zak_identity({ZakIdentity::Translation}, g, q) <= 1e-9);
  CHECK(check_zak_identity({ZakIdentity::Modulation}, g, q) <= 1e-9);
  CHECK(check_zak_identity({ZakIdentity::ModTrans, 0.25, 0.5}, g, q) <= 1e-8);
  CHECK(check_zak_identity({ZakIdentity::ModTrans, 0.3, 0.1}, g, q) <= 1e-8);
  CHECK(check_zak_identity({ZakIdentity::QuasiPeriodT}, g, q) == 0.0);
  CHECK(check_zak_identity({ZakIdentity::PeriodOmega}, g, q) == 0.0);
}

TEST_CASE("translation identity holds for grid-aligned custom windows") {
  const std::int64_t q = 16;
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n01;
  std::vector<cdouble> s(static_cast<std::size_t>(2 * 4 * q));
  // Leave the last period empty so the unit translate stays inside.
  for (std::size_t j = 0; j + q < s.size(); ++j) s[j] = cdouble(n01(rng), n01(rng));
  const auto w = make_custom_window(1.0 / q, 4, s);
  CHECK(check_zak_identity({ZakIdentity::Translation}, w, q) <= 1e-9);
  CHECK(check_zak_identity({ZakIdentity::PeriodOmega}, w, q) == 0.0);
  CHECK(check_zak_identity({ZakIdentity::QuasiPeriodT}, w, q) == 0.0);
  CHECK(kind_of([&] { (void)check_zak_identity({ZakIdentity::ModTrans, 0.3, 0.1}, w, q); }) ==
        ErrorKind::UnsupportedShift);
}

TEST_CASE("identity names") {
  CHECK(to_string(ZakIdentity::Translation) == "translation");
  CHECK(to_string(ZakIdentity::PeriodOmega) == "period_omega");
}

TEST_CASE("quasi-periodic lookup") {
  const std::int64_t q = 8;
  std::vector<cdouble> v(64);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = cdouble(static_cast<double>(k), 1.0);
  const ZakImage z(q, 4, v);
  // t + 1 multiplies by e^{2 pi i w}, here w = 3/8.
  const cdouble expected = std::polar(1.0, 2.0 * std::numbers::pi * 3.0 / 8.0) * z(2, 3);
  CHECK(std::abs(z.at(10, 3) - expected) <= 1e-15);
  CHECK(z.at(2, 3 + 8) == z(2, 3));
  CHECK(z.at(2, -5) == z(2, 3));
}

TEST_CASE("inverse of the all-ones image is the box") {
  const std::int64_t q = 16;
  const ZakImage ones(q, 2, std::vector<cdouble>(q * q, 1.0));
  const auto w = inverse_zak(ones);
  const auto box = make_window(WindowKind::Box, 1.0 / 16.0, 2);
  REQUIRE(w.size() == box.size());
  for (std::size_t j = 0; j < w.size(); ++j) CHECK(std::abs(w[j] - box[j]) <= 1e-15);
}

TEST_CASE("round trip through the inverse") {
  const std::int64_t q = 64;
  const auto g = make_window(WindowKind::Gaussian, 1.0 / 64.0, 8);
  const auto back = inverse_zak(zak_transform(g, q));
  for (std::size_t j = 0; j < g.size(); ++j) CHECK(std::abs(back[j] - g[j]) <= 1e-10);
}

TEST_CASE("random images: norm and round trip") {
  // With 2K = q the transform is onto; for 2K < q only images of windows round-trip.
  const std::int64_t q = 32, K = 16;
  std::mt19937_64 rng(17);
  std::normal_distribution<double> n01;
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<cdouble> v(static_cast<std::size_t>(q * q));
    double sq = 0;
    for (auto& x : v) {
      x = cdouble(n01(rng), n01(rng));
      sq += std::norm(x);
    }
    const double scale = 1.0 / std::sqrt(sq / static_cast<double>(q * q));
    for (auto& x : v) x *= scale;
    const ZakImage z(q, K, v);
    CHECK(z.norm() == doctest::Approx(1.0).epsilon(1e-12));
    const auto w = inverse_zak(z);
    CHECK(std::fabs(w.norm() - 1.0) <= 1e-10);
    const auto again = zak_transform(w, q);
    for (std::size_t k = 0; k < v.size(); ++k) CHECK(std::abs(again.values()[k] - v[k]) <= 1e-10);
  }
}

TEST_CASE("functional equation: trivial case") {
  const ZakImage ones(8, 2, std::vector<cdouble>(64, 1.0));
  const TrigPolynomial2 one({{cdouble(1.0), 0.0, 0.0}});
  CHECK(zak_equation_residual(ones, one, 0.0, 0.0) == 0.0);
}

TEST_CASE("functional equation fails for the gaussian") {
  const auto z = zak_transform(make_window(WindowKind::Gaussian, 1.0 / 64.0, 8), 64);
  const TrigPolynomial2 p({{cdouble(1.0), 0.0, 0.0}, {cdouble(0.5, 0.2), 1.0, 0.0}, {cdouble(-0.3), 0.0, 1.0}});
  CHECK(zak_equation_residual(z, p, 0.25, 0.25) > 0.01);
  CHECK(kind_of([&] { (void)zak_equation_residual(z, p, 0.3, 0.25); }) == ErrorKind::GridMismatch);
}

TEST_CASE("an image built along a rational orbit satisfies the equation there") {
  const std::int64_t q = 16;
  const TrigPolynomial2 p({{cdouble(1.0), 0.0, 0.0}, {cdouble(0.4, 0.3), 1.0, 0.0}, {cdouble(0.2), 0.0, 1.0}});
  const double alpha = 3.0 / 16.0, beta = 5.0 / 16.0;
  const auto syn = synthesize_orbit_image(q, p, alpha, beta, {3, 7}, 0.8, 16);
  REQUIRE(syn.orbit.size() == 16);
  // Every point but the last has its successor on the image.
  std::span<const std::array<std::int64_t, 2>> inner(syn.orbit.data(), syn.orbit.size() - 1);
  CHECK(zak_equation_residual(syn.image, p, alpha, beta, inner) <= 1e-9);
  // Off the orbit the image is zero.
  std::size_t nonzero = 0;
  for (auto v : syn.image.values()) nonzero += v != cdouble{};
  CHECK(nonzero == 16);
  CHECK(kind_of([&] { (void)synthesize_orbit_image(q, p, alpha, beta, {0, 0}, 1.0, 17); }) ==
        ErrorKind::InvalidArgument);
}
