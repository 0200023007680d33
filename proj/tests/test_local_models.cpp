#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "convexform/local_models.hpp"

using namespace convexform;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Halton sequence in base 2 / 3 for quasi-random chart points.
double halton(int index, int base) {
  double f = 1.0, r = 0.0;
  for (int i = index; i > 0; i /= base) {
    f /= base;
    r += f * (i % base);
  }
  return r;
}

using Eval = std::function<FieldSample(double, double)>;

// Central-difference divergence of rho X using only sampled rho and X.
double fd_divergence(const Eval& eval, double u, double v, double h = 1e-4) {
  auto flux = [&](double a, double b, int i) {
    auto s = eval(a, b);
    return s.rho * s.X[i];
  };
  const double d1 = (flux(u + h, v, 0) - flux(u - h, v, 0)) / (2 * h);
  const double d2 = (flux(u, v + h, 1) - flux(u, v - h, 1)) / (2 * h);
  return (d1 + d2) / eval(u, v).rho;
}

// Simpson reference for the integral of the smooth step.
double simpson_step_integral(double t) {
  const int n = 20000;
  const double h = t / n;
  double sum = smooth_step(0.0) + smooth_step(t);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * smooth_step(i * h);
  return sum * h / 3.0;
}

template <class Domain>
void check_fd_divergence(const Eval& eval, Domain&& point, std::function<bool(double, double)> keep = {}, int n = 10000) {
  double worst = 0.0;
  for (int k = 1; k <= n; ++k) {
    auto [u, v] = point(halton(k, 2), halton(k, 3));
    if (keep && !keep(u, v)) continue;
    auto s = eval(u, v);
    const double err = std::abs(s.div - fd_divergence(eval, u, v)) / (1.0 + std::abs(s.div));
    worst = std::max(worst, err);
    ASSERT_NEAR(s.div, s.div_from_partials(), 1e-12 * (1.0 + std::abs(s.div))) << "at " << u << ", " << v;
  }
  EXPECT_LE(worst, 1e-6);
}

CollarSlopes large_slopes() { return {60.0, 60.0, 60.0, 60.0}; }

}  // namespace

// ------------------------------------------------------------ bump

TEST(Bump, BoundaryValues) {
  EXPECT_EQ(bump(0.2, 0.2, 0.7, BumpDirection::Rising), 0.0);
  EXPECT_EQ(bump(0.7, 0.2, 0.7, BumpDirection::Rising), 1.0);
  EXPECT_EQ(bump(-3.0, 0.2, 0.7, BumpDirection::Rising), 0.0);
  EXPECT_EQ(bump(0.2, 0.2, 0.7, BumpDirection::Falling), 1.0);
  EXPECT_EQ(bump(0.7, 0.2, 0.7, BumpDirection::Falling), 0.0);
}

TEST(Bump, SymmetricMidpoint) {
  EXPECT_EQ(bump(0.75, 0.5, 1.0, BumpDirection::Rising), 0.5);
  for (double t : {0.1, 0.3, 0.77}) EXPECT_NEAR(smooth_step(t) + smooth_step(1.0 - t), 1.0, 1e-15);
}

TEST(Bump, FlatEnds) {
  EXPECT_EQ(bump_derivative(0.2, 0.2, 0.7, BumpDirection::Rising), 0.0);
  EXPECT_EQ(bump_derivative(0.7, 0.2, 0.7, BumpDirection::Rising), 0.0);
  EXPECT_LT(std::abs(bump_derivative(0.2 + 1e-3, 0.2, 0.7, BumpDirection::Rising)), 1e-100);
}

TEST(Bump, MonotoneAndDerivativeMatchesDifferences) {
  double prev = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double x = -0.1 + 1.2 * i / 1000.0;
    const double b = bump(x, 0.0, 1.0, BumpDirection::Rising);
    EXPECT_GE(b, prev);
    EXPECT_GE(b, 0.0);
    EXPECT_LE(b, 1.0);
    prev = b;
    const double h = 1e-5;
    const double fd = (bump(x + h, 0.0, 1.0, BumpDirection::Rising) - bump(x - h, 0.0, 1.0, BumpDirection::Rising)) / (2 * h);
    EXPECT_NEAR(bump_derivative(x, 0.0, 1.0, BumpDirection::Rising), fd, 1e-8);
  }
}

TEST(Bump, DomainError) {
  EXPECT_THROW(bump(0.0, 1.0, 1.0, BumpDirection::Rising), Error);
  EXPECT_THROW(bump_derivative(0.0, 2.0, 1.0, BumpDirection::Falling), Error);
}

TEST(Bump, IntegralMatchesSimpson) {
  EXPECT_NEAR(smooth_step_integral(1.0), 0.5, 1e-15);
  for (double t : {0.05, 0.25, 0.5, 0.8, 0.999}) EXPECT_NEAR(smooth_step_integral(t), simpson_step_integral(t), 1e-13) << t;
}

// ------------------------------------------------------------ elliptic

TEST(EllipticModel, ClosedFormValues) {
  auto m = elliptic_model(1.0, Sign::Positive);
  auto s = m.eval(0.5, 1.0);
  EXPECT_DOUBLE_EQ(s.f, 0.75);
  EXPECT_DOUBLE_EQ(s.X[0], 1.0);
  EXPECT_EQ(s.X[1], 0.0);
  EXPECT_EQ(s.div, 4.0);
  EXPECT_LT(s.xf(), 0.0);
}

TEST(EllipticModel, SingularCenter) {
  auto s = elliptic_model(1.0, Sign::Positive).eval(0.0, 2.0);
  EXPECT_EQ(s.X[0], 0.0);
  EXPECT_EQ(s.X[1], 0.0);
}

TEST(EllipticModel, ContactDensityIsFourC) {
  // 4(c - r^2) + 4 r^2 = 4c
  auto m = elliptic_model(1.0, Sign::Positive);
  for (double r = 0.0; r <= 1.0; r += 0.125) EXPECT_NEAR(m.eval(r, 0.3).contact_density(), 4.0, 1e-15);
  auto neg = elliptic_model(-0.5, Sign::Negative);
  for (double r = 0.0; r <= 0.5; r += 0.125) {
    auto s = neg.eval(r, 0.0);
    EXPECT_EQ(s.div, -4.0);
    EXPECT_NEAR(s.contact_density(), 2.0, 1e-15);  // 4|c|
  }
}

TEST(EllipticModel, SignMismatch) {
  EXPECT_THROW(elliptic_model(-1.0, Sign::Positive), Error);
  EXPECT_THROW(elliptic_model(1.0, Sign::Negative), Error);
}

TEST(EllipticModel, FiniteDifferenceDivergence) {
  for (Sign sign : {Sign::Positive, Sign::Negative}) {
    auto m = elliptic_model(sign == Sign::Positive ? 1.0 : -1.0, sign);
    check_fd_divergence([&](double r, double t) { return m.eval(r, t); },
                        [](double a, double b) { return std::pair{0.01 + 0.99 * a, 2 * kPi * b}; });
  }
}

// ------------------------------------------------------------ saddle

TEST(SaddleModel, QuadraticVectorField) {
  auto m = saddle_model(1.0, Sign::Positive);
  auto s = m.eval(1.0, 0.0);
  EXPECT_EQ(s.X[0], 1.0);
  EXPECT_EQ(s.X[1], -3.0);
  auto o = m.eval(0.0, 0.0);
  EXPECT_EQ(o.X[0], 0.0);
  EXPECT_EQ(o.X[1], 0.0);
  // X(f) = 8xy - 12(x^2 + y^2) at (1, 1)
  EXPECT_EQ(m.eval(1.0, 1.0).xf(), -16.0);
  EXPECT_EQ(s.div, 2.0);
}

TEST(SaddleModel, NegativeModel) {
  auto m = saddle_model(-1.0, Sign::Negative);
  auto s = m.eval(1.0, 0.0);
  EXPECT_EQ(s.X[0], -1.0);
  EXPECT_EQ(s.X[1], -3.0);
  EXPECT_EQ(s.div, -2.0);
  EXPECT_THROW(saddle_model(1.0, Sign::Negative), Error);
}

TEST(SaddleModel, ContactDensityAtCenter) {
  auto m = saddle_model(0.7, Sign::Positive);
  EXPECT_DOUBLE_EQ(m.eval(0.0, 0.0).contact_density(), 2 * 0.7);
}

TEST(SaddleModel, NegativeGradientLikeOffOrigin) {
  for (Sign sign : {Sign::Positive, Sign::Negative}) {
    auto m = apply_boundary_surgery(saddle_model(sign == Sign::Positive ? 1.0 : -1.0, sign), large_slopes());
    const auto& G = m.geometry;
    for (int k = 1; k <= 10000; ++k) {
      const double x = -G.delta + 2 * G.delta * halton(k, 2);
      const double y = -G.delta + 2 * G.delta * halton(k, 3);
      if (!in_cross_domain(G, x, y)) continue;
      auto s = m.eval(x, y);
      EXPECT_LT(s.xf(), 0.0) << x << ", " << y;
      EXPECT_GT(sign_value(sign) * s.div, 0.0) << x << ", " << y;
    }
  }
}

TEST(SaddleModel, GeometryChecks) {
  SaddleGeometry bad{1.0, 0.4, 0.7, 0.05};  // delta1 < delta / 2 makes the collars overlap
  EXPECT_THROW(bad.check(), Error);
  EXPECT_NO_THROW(SaddleGeometry{}.check());
  EXPECT_DOUBLE_EQ(SaddleGeometry{}.epsilon(), 1.04);
}

TEST(SaddleModel, FiniteDifferenceDivergence) {
  for (Sign sign : {Sign::Positive, Sign::Negative}) {
    auto uncut = saddle_model(sign == Sign::Positive ? 2.0 : -2.0, sign);
    auto cut = apply_boundary_surgery(uncut, large_slopes());
    const double d = cut.geometry.delta;
    for (const auto* m : {&uncut, &cut})
      check_fd_divergence([&](double x, double y) { return m->eval(x, y); },
                          [&](double a, double b) { return std::pair{-d + 2 * d * a, -d + 2 * d * b}; },
                          [&](double x, double y) { return in_cross_domain(cut.geometry, x, y); });
  }
}

TEST(BoundarySurgery, IdentityOutsideCollars) {
  auto uncut = saddle_model(1.0, Sign::Positive);
  auto cut = apply_boundary_surgery(uncut, large_slopes());
  const double d1 = uncut.geometry.delta1;
  for (int k = 1; k <= 2000; ++k) {
    const double x = -d1 + 2 * d1 * halton(k, 2);
    const double y = -d1 + 2 * d1 * halton(k, 3);
    auto a = uncut.eval(x, y);
    auto b = cut.eval(x, y);
    EXPECT_EQ(a.X, b.X);
    EXPECT_EQ(a.dX, b.dX);
    EXPECT_EQ(a.div, b.div);
  }
}

TEST(BoundarySurgery, ParallelToStraightSegments) {
  auto cut = apply_boundary_surgery(saddle_model(1.0, Sign::Positive), large_slopes());
  const auto& G = cut.geometry;
  const double w_max = G.epsilon() / (4 * G.delta);
  for (int i = 0; i <= 50; ++i) {
    const double w = -w_max + 2 * w_max * i / 50;
    EXPECT_EQ(cut.eval(G.delta, w).X[0], 0.0);
    EXPECT_EQ(cut.eval(-G.delta, w).X[0], 0.0);
    EXPECT_EQ(cut.eval(w, G.delta).X[1], 0.0);
    EXPECT_EQ(cut.eval(w, -G.delta).X[1], 0.0);
    // Trace handed to the band at x = delta: X = (0, h + u), h + u < 0, increasing in y.
    auto e = cut.eval(G.delta, w);
    EXPECT_LT(e.X[1], 0.0);
    EXPECT_GT(e.dX[1][1], 0.0);
    EXPECT_EQ(cut.eval(G.delta - 0.5 * G.delta_prime, w).X[0], 0.0);
  }
}

TEST(BoundarySurgery, CollarDivergenceNearInnerEdge) {
  // For x in [delta1, delta2] the divergence is 2 + phi1(x) u' with phi2 = 1.
  auto cut = apply_boundary_surgery(saddle_model(1.0, Sign::Positive), large_slopes());
  const auto& G = cut.geometry;
  for (int i = 0; i <= 20; ++i) {
    const double x = G.delta1 + (G.delta2 - G.delta1) * i / 20;
    const double phi1 = bump(x, G.delta1, G.delta2, BumpDirection::Rising);
    EXPECT_NEAR(cut.eval(x, 0.1).div, 2.0 + phi1 * 60.0, 1e-12);
  }
}

TEST(BoundarySurgery, ZeroSlopeIsTooSmall) {
  // Uncut divergence deficit phi2' g dips below zero in [delta2, delta].
  auto m = saddle_model(1.0, Sign::Positive);
  try {
    apply_boundary_surgery(m, {0.0, 0.0, 0.0, 0.0});
    FAIL() << "expected SlopeTooSmall";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SlopeTooSmall);
  }
}

// ------------------------------------------------------------ band

TEST(Band, SymmetricBandIsConstantInT) {
  auto cut = apply_boundary_surgery(saddle_model(1.0, Sign::Positive), large_slopes());
  auto band = interpolate_band({cut, CrossSide::E}, {cut, CrossSide::E});
  for (double z : {-1.0, -0.3, 0.0, 0.8}) {
    const double g0 = band.trace(CrossSide::E, z).first;
    for (double t : {0.0, 0.3, 0.5, 0.9, 1.0}) EXPECT_EQ(band.eval(t, z).X[1], g0);
  }
}

TEST(Band, DivergenceInFlatMiddle) {
  auto cut = apply_boundary_surgery(saddle_model(1.0, Sign::Positive), large_slopes());
  auto band = interpolate_band({cut, CrossSide::E}, {cut, CrossSide::N}, 0.25, 4.0);
  for (double t : {0.3, 0.5, 0.7}) {
    const double beta = bump(t, 0.25, 0.75, BumpDirection::Rising);
    for (double z : {-1.0, 0.0, 0.5}) {
      auto s = band.eval(t, z);
      EXPECT_EQ(s.rho, 1.0);
      const double expected = (1 - beta) * band.trace(CrossSide::E, z).second + beta * band.trace(CrossSide::N, z).second;
      EXPECT_NEAR(s.div, expected, 1e-12);
      EXPECT_GT(s.div, 0.0);
    }
  }
}

TEST(Band, MatchesTracesAtEnds) {
  auto cut = apply_boundary_surgery(saddle_model(-1.5, Sign::Negative), large_slopes());
  auto band = interpolate_band({cut, CrossSide::W}, {cut, CrossSide::S}, 2.0, 3.0);
  for (double z : {-1.0, 0.2}) {
    EXPECT_EQ(band.eval(0.0, z).X[1], band.trace(CrossSide::W, z).first);
    EXPECT_EQ(band.eval(1.0, z).X[1], band.trace(CrossSide::S, z).first);
    EXPECT_EQ(band.eval(0.0, z).rho, 2.0);
    EXPECT_EQ(band.eval(1.0, z).rho, 3.0);
    EXPECT_LT(band.eval(0.5, z).div, 0.0);
  }
}

TEST(Band, TraceSignError) {
  // The uncut model is not parallel to the segment and its tangential trace keeps the wrong
  // derivative sign once the slope term is absent; a bad density is rejected too.
  auto cut = apply_boundary_surgery(saddle_model(1.0, Sign::Positive), large_slopes());
  auto flipped = cut;
  flipped.slopes = {-60.0, -60.0, -60.0, -60.0};
  flipped.surgery = true;
  EXPECT_THROW(interpolate_band({flipped, CrossSide::E}, {flipped, CrossSide::N}), Error);
  EXPECT_THROW(interpolate_band({cut, CrossSide::E}, {cut, CrossSide::N}, -1.0, 1.0), Error);
}

TEST(Band, FiniteDifferenceDivergence) {
  auto cut = apply_boundary_surgery(saddle_model(1.0, Sign::Positive), large_slopes());
  auto band = interpolate_band({cut, CrossSide::W}, {cut, CrossSide::N}, 0.3, 2.5);
  const double eps = band.epsilon();
  check_fd_divergence([&](double t, double z) { return band.eval(t, z); },
                      [&](double a, double b) { return std::pair{a, -eps + 2 * eps * b}; });
}

// ------------------------------------------------------------ annuli

TEST(ZeroAnnulus, DividingCircle) {
  auto m = zero_annulus_model(1.0, 0.5);
  auto s = m.eval(0.4, 0.0);
  EXPECT_EQ(s.f, 0.0);
  EXPECT_EQ(s.div, 0.0);
  EXPECT_EQ(s.xf(), -1.0);
  EXPECT_LT(s.X[1], 0.0);  // points out of the s > 0 side
  EXPECT_EQ(s.contact_density(), 1.0);
}

TEST(ZeroAnnulus, DivergenceAtSigma) {
  auto m = zero_annulus_model(2.0, 0.5);
  auto s = m.eval(0.0, 0.5);
  EXPECT_DOUBLE_EQ(s.div, 2.0 / 0.5);
  EXPECT_GT(s.f, 0.0);
}

TEST(ZeroAnnulus, ContactDensityBoundedByLambda) {
  auto m = zero_annulus_model(1.5, 0.5);
  for (int i = 0; i <= 200; ++i) {
    const double s = -1.0 + i / 100.0;
    EXPECT_GE(m.eval(0.0, s).contact_density(), 1.5);
  }
  EXPECT_THROW(zero_annulus_model(0.0, 0.5), Error);
}

TEST(ZeroAnnulus, FiniteDifferenceDivergence) {
  auto m = zero_annulus_model(1.0, 0.5);
  check_fd_divergence([&](double a, double b) { return m.eval(a, b); },
                      [](double a, double b) { return std::pair{2 * kPi * a, -1.0 + 2.0 * b}; });
}

TEST(SameSignAnnulus, ZeroLambdaIsPureContinuation) {
  auto m = rescale_same_sign_annulus({Sign::Positive, 0.5, 4.0}, {Sign::Positive, 1.5, 2.0}, 0.0);
  EXPECT_EQ(m.rescale_factor(), 1.0);
  for (double s : {-1.0, -0.6, 0.0, 0.7, 1.0}) {
    const double u = s + 1.0;
    EXPECT_NEAR(m.log_density(s), -(4.0 * u + 0.25 * (2.0 - 4.0) * u * u), 1e-14);
  }
}

TEST(SameSignAnnulus, RescaleFactorClosedForm) {
  RescaleZone zone{-0.35, -0.25, 0.15, 0.25};
  EXPECT_DOUBLE_EQ(zone.width(), 0.5);
  auto m = rescale_same_sign_annulus({Sign::Positive, 0.5, 2.0}, {Sign::Positive, 1.5, 2.0}, 3.0, zone);
  EXPECT_NEAR(m.rescale_factor(), std::exp(1.5), 1e-12);
  EXPECT_NEAR(m.rescale_factor(), 4.4817, 1e-4);
  // log-density drop across the zone equals lambda * width on top of the base part.
  EXPECT_NEAR(zone.profile_integral(1.0), 0.5, 1e-15);
}

TEST(SameSignAnnulus, DivergenceAtZoneMidpoint) {
  auto m = rescale_same_sign_annulus({Sign::Positive, 0.5, 4.0}, {Sign::Positive, 1.5, 2.0}, 9.0);
  auto s = m.eval(0.0, 0.0);
  EXPECT_DOUBLE_EQ(s.div, 9.0 + 3.0);  // lambda + div of the base form (4 -> 2 at the midpoint)
  auto neg = rescale_same_sign_annulus({Sign::Negative, -1.5, 4.0}, {Sign::Negative, -0.5, 2.0}, 9.0);
  EXPECT_DOUBLE_EQ(neg.eval(0.0, 0.0).div, -12.0);
}

TEST(SameSignAnnulus, SignMismatch) {
  EXPECT_THROW(rescale_same_sign_annulus({Sign::Negative, -0.5, 4.0}, {Sign::Positive, 0.5, 4.0}, 1.0), Error);
}

TEST(SameSignAnnulus, FiniteDifferenceDivergenceAndSign) {
  for (Sign sign : {Sign::Positive, Sign::Negative}) {
    const double k = sign_value(sign);
    auto lo = AnnulusTrace{sign, sign == Sign::Positive ? 0.4 : -1.6, 4.0};
    auto hi = AnnulusTrace{sign, sign == Sign::Positive ? 1.6 : -0.4, 2.0};
    auto m = rescale_same_sign_annulus(lo, hi, 9.0);
    check_fd_divergence([&](double a, double b) { return m.eval(a, b); },
                        [](double a, double b) { return std::pair{2 * kPi * a, -1.0 + 2.0 * b}; });
    for (int i = 0; i <= 100; ++i) {
      auto s = m.eval(0.0, -1.0 + i / 50.0);
      EXPECT_GT(k * s.div, 0.0);
      EXPECT_LT(s.xf(), 0.0);
    }
  }
}
