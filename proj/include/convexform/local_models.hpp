#pragma once

#include <array>

#include "convexform/bump.hpp"
#include "convexform/morse_spec.hpp"

namespace convexform {

struct Vec2 {
  double u = 0.0;
  double v = 0.0;
};

/// Everything a chart knows at one point, in chart coordinates (u, v).
/// The area form is omega = rho du ^ dv.
struct FieldSample {
  double f = 0.0;
  std::array<double, 2> df{};
  std::array<double, 2> X{};
  /// dX[i][j] = d X^i / d coord_j
  std::array<std::array<double, 2>, 2> dX{};
  double rho = 1.0;
  std::array<double, 2> drho{};
  /// Closed-form divergence with respect to omega.
  double div = 0.0;

  double xf() const { return X[0] * df[0] + X[1] * df[1]; }
  /// Coefficient of dt ^ omega in alpha ^ d alpha for alpha = f dt + i_X omega.
  double contact_density() const { return f * div - xf(); }
  /// (d(rho X^1)/du + d(rho X^2)/dv) / rho from the stored partials.
  double div_from_partials() const { return dX[0][0] + dX[1][1] + (X[0] * drho[0] + X[1] * drho[1]) / rho; }
};

// ------------------------------------------------------------ elliptic

/// Polar chart (r, theta) around an extremum: f = c -+ r^2, X = +-2r d/dr,
/// omega = r dr ^ dtheta, so div = +-4.
struct EllipticModel {
  double level = 1.0;
  Sign sign = Sign::Positive;
  double radius = 1.0;

  FieldSample eval(double r, double theta) const;
};

/// Throws SignMismatch when sign(c) != sign.
EllipticModel elliptic_model(double c, Sign sign, double radius = 1.0);

// ------------------------------------------------------------ saddle

/// Straight boundary segments of the saddle cross: x = +delta (E), y = +delta (N),
/// x = -delta (W), y = -delta (S).
enum class CrossSide { E = 0, N = 1, W = 2, S = 3 };

std::string_view to_string(CrossSide side);
CrossSide cross_side_from_string(std::string_view s);

struct SaddleGeometry {
  double delta = 1.0;
  double delta1 = 0.52;
  double delta2 = 0.56;
  double delta_prime = 0.03;

  /// Half-width in f of the chart, 2 * delta * delta1.
  double epsilon() const { return 2.0 * delta * delta1; }
  /// Scales every length by k (used to fit the chart to an atom's epsilon).
  SaddleGeometry scaled(double k) const { return {delta * k, delta1 * k, delta2 * k, delta_prime * k}; }
  /// Throws DomainError unless delta > delta2 > delta1 > delta/2 and delta' < delta - delta2.
  void check() const;
};

/// Slopes of the affine augmentations u, v in the four collars, indexed by CrossSide.
using CollarSlopes = std::array<double, 4>;

/// Morse chart around a saddle: f = c + 4xy, X = (x - 3y, y - 3x) (div 2) for
/// positive atoms or (-x - 3y, -3x - y) (div -2) for negative ones, omega = dx ^ dy.
/// With surgery enabled the four collars are cut off so that X is parallel to
/// the straight boundary segments.
/// `amplitude` k^2 gives f = c + 4k^2 xy: the model on a cross shrunk by k, written in
/// coordinates blown back up by 1/k (X keeps its components, rho is constant).
struct SaddleModel {
  double level = 1.0;
  Sign sign = Sign::Positive;
  SaddleGeometry geometry{};
  bool surgery = false;
  CollarSlopes slopes{};
  double amplitude = 1.0;

  /// Half-width of the f-range covered by the chart: amplitude * 2 delta delta1.
  double level_epsilon() const { return amplitude * geometry.epsilon(); }

  FieldSample eval(double x, double y) const;
  FieldSample uncut(double x, double y) const;

  /// Point on a straight segment with coordinate w along it.
  Vec2 segment_point(CrossSide side, double w) const;
  /// dz/dw for the band coordinate z = f - c on that segment (+-4 delta).
  double segment_z_scale(CrossSide side) const;
  /// Sign of the uncut tangential component of X along a straight segment.
  int tangential_sign(CrossSide side) const;
  /// Affine augmentation (u or v) for a collar and its derivative.
  double augmentation(CrossSide side, double w) const;
  double augmentation_slope(CrossSide side) const { return sign_value(sign) * slopes[static_cast<int>(side)]; }
};

/// Throws SignMismatch when sign(c) != sign.
SaddleModel saddle_model(double c, Sign sign, SaddleGeometry geometry = {});

/// Enables the collar surgery with the given slopes, then samples the chart
/// on a grid x grid lattice; throws SlopeTooSmall if the divergence sign ever
/// disagrees with the atom sign.
SaddleModel apply_boundary_surgery(const SaddleModel& field, const CollarSlopes& slopes, int grid = 128);

/// True when (x, y) lies in the clipped cross |x|, |y| <= delta, |4xy| <= epsilon.
bool in_cross_domain(const SaddleGeometry& g, double x, double y, double tol = 0.0);

// ------------------------------------------------------------ band

struct BandTrace {
  SaddleModel cross;
  CrossSide side = CrossSide::E;
};

/// Band (t, z) in [0,1] x [-eps, eps] joining two straight segments of a saddle
/// cross. X = g(t, z) d/dz, blending the two boundary traces; the density is
/// blended from the trace densities to 1 in the collars t < collar and t > 1 - collar.
struct BandModel {
  SaddleModel cross;
  CrossSide start = CrossSide::E;
  CrossSide end = CrossSide::N;
  double c0 = 1.0;
  double c1 = 1.0;
  double collar = 0.25;

  double epsilon() const { return cross.geometry.epsilon(); }
  FieldSample eval(double t, double z) const;
  /// Trace value g_i(z) in band units and its z-derivative.
  std::pair<double, double> trace(CrossSide side, double z) const;
};

/// Throws TraceSignError unless both traces flow toward lower f with the
/// tangential derivative carrying the atom sign.
BandModel interpolate_band(const BandTrace& left, const BandTrace& right, double c0 = 1.0, double c1 = 1.0);

// ------------------------------------------------------------ annuli

/// Zero-crossing annulus (theta, s): f = lambda s, X = -d/ds,
/// rho = exp(-s^2 / sigma^2), div = 2 s / sigma^2.
struct ZeroAnnulusModel {
  double lambda = 1.0;
  double sigma = 0.5;
  double s_lo = -1.0;
  double s_hi = 1.0;

  FieldSample eval(double theta, double s) const;
};

/// Throws DomainError unless lambda, sigma > 0.
ZeroAnnulusModel zero_annulus_model(double lambda, double sigma);

struct AnnulusTrace {
  Sign sign = Sign::Positive;
  double f = 0.0;
  /// Magnitude of the divergence of the adjoining atom model.
  double div = 1.0;
};

/// Transition zone of the rescaling function g(s): ramps up on
/// [ramp_lo, plateau_lo], constant on the plateau, ramps down on [plateau_hi, ramp_hi].
struct RescaleZone {
  double ramp_lo = -0.9;
  double plateau_lo = -0.4;
  double plateau_hi = 0.4;
  double ramp_hi = 0.9;

  /// Integral of the zone profile; log K = lambda * width.
  double width() const { return 0.5 * (plateau_lo - ramp_lo) + (plateau_hi - plateau_lo) + 0.5 * (ramp_hi - plateau_hi); }
  double profile(double s) const;
  double profile_integral(double s) const;
};

/// Same-sign annulus (theta, s), s in [-1, 1]: f affine from f_lo to f_hi,
/// X = -d/ds, rho = exp(-Phi(s)) where Phi' = sign * (base(s) + lambda * zone(s)),
/// base interpolating the adjoining atoms' divergence magnitudes.
struct SameSignAnnulusModel {
  Sign sign = Sign::Positive;
  double f_lo = 0.0;
  double f_hi = 1.0;
  double div_lo = 1.0;
  double div_hi = 1.0;
  double lambda = 0.0;
  RescaleZone zone{};

  FieldSample eval(double theta, double s) const;
  double log_density(double s) const;
  /// exp(lambda * zone width): the constant factor pushed into the neighbour atom.
  double rescale_factor() const;
};

/// Throws SignMismatch when the traces come from atoms of opposite sign.
SameSignAnnulusModel rescale_same_sign_annulus(const AnnulusTrace& low, const AnnulusTrace& high, double lambda_a,
                                               RescaleZone zone = {});

}  // namespace convexform
