#include "convexform/local_models.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace convexform {

namespace {

void require_sign(double c, Sign sign, const char* what) {
  if (c == 0.0 || sign_of(c) != sign)
    throw Error(ErrorCode::SignMismatch, std::string(what) + ": level sign does not match atom sign");
}

}  // namespace

// ------------------------------------------------------------ elliptic

FieldSample EllipticModel::eval(double r, double /*theta*/) const {
  const double s = sign_value(sign);
  FieldSample out;
  out.f = level - s * r * r;
  out.df = {-2.0 * s * r, 0.0};
  out.X = {2.0 * s * r, 0.0};
  out.dX = {{{2.0 * s, 0.0}, {0.0, 0.0}}};
  out.rho = r;
  out.drho = {1.0, 0.0};
  out.div = 4.0 * s;
  return out;
}

EllipticModel elliptic_model(double c, Sign sign, double radius) {
  require_sign(c, sign, "elliptic_model");
  if (!(radius > 0.0)) throw Error(ErrorCode::DomainError, "elliptic radius must be positive");
  return {c, sign, radius};
}

// ------------------------------------------------------------ saddle

std::string_view to_string(CrossSide side) {
  switch (side) {
    case CrossSide::E: return "E";
    case CrossSide::N: return "N";
    case CrossSide::W: return "W";
    case CrossSide::S: return "S";
  }
  return "?";
}

CrossSide cross_side_from_string(std::string_view s) {
  if (s == "E") return CrossSide::E;
  if (s == "N") return CrossSide::N;
  if (s == "W") return CrossSide::W;
  if (s == "S") return CrossSide::S;
  throw Error(ErrorCode::MalformedInput, "unknown cross side '" + std::string(s) + "'");
}

void SaddleGeometry::check() const {
  if (!(delta > delta2 && delta2 > delta1 && delta1 > 0.5 * delta && delta_prime > 0.0 && delta_prime < delta - delta2))
    throw Error(ErrorCode::DomainError, "saddle geometry needs delta > delta2 > delta1 > delta/2, 0 < delta' < delta - delta2");
}

bool in_cross_domain(const SaddleGeometry& g, double x, double y, double tol) {
  return std::abs(x) <= g.delta + tol && std::abs(y) <= g.delta + tol && std::abs(4.0 * x * y) <= g.epsilon() + tol;
}

FieldSample SaddleModel::uncut(double x, double y) const {
  FieldSample out;
  out.f = level + amplitude * 4.0 * x * y;
  out.df = {amplitude * 4.0 * y, amplitude * 4.0 * x};
  if (sign == Sign::Positive) {
    out.X = {x - 3.0 * y, y - 3.0 * x};
    out.dX = {{{1.0, -3.0}, {-3.0, 1.0}}};
    out.div = 2.0;
  } else {
    out.X = {-x - 3.0 * y, -3.0 * x - y};
    out.dX = {{{-1.0, -3.0}, {-3.0, -1.0}}};
    out.div = -2.0;
  }
  out.rho = 1.0;
  out.drho = {0.0, 0.0};
  return out;
}

Vec2 SaddleModel::segment_point(CrossSide side, double w) const {
  const double d = geometry.delta;
  switch (side) {
    case CrossSide::E: return {d, w};
    case CrossSide::N: return {w, d};
    case CrossSide::W: return {-d, w};
    case CrossSide::S: return {w, -d};
  }
  return {};
}

double SaddleModel::segment_z_scale(CrossSide side) const {
  const double k = 4.0 * geometry.delta;
  return (side == CrossSide::E || side == CrossSide::N) ? k : -k;
}

int SaddleModel::tangential_sign(CrossSide side) const {
  auto p = segment_point(side, 0.0);
  auto s = uncut(p.u, p.v);
  const double t = (side == CrossSide::E || side == CrossSide::W) ? s.X[1] : s.X[0];
  return t > 0.0 ? 1 : -1;
}

double SaddleModel::augmentation(CrossSide side, double w) const {
  const int st = tangential_sign(side);
  const double slope = augmentation_slope(side);
  // Anchor the affine function so it keeps the sign st on all of [-delta, delta].
  const double anchor = (slope * st >= 0.0) ? -geometry.delta : geometry.delta;
  return st + slope * (w - anchor);
}

FieldSample SaddleModel::eval(double x, double y) const {
  FieldSample out = uncut(x, y);
  if (!surgery) return out;
  const auto& G = geometry;
  const bool x_collar = std::abs(x) >= G.delta1;
  const bool y_collar = !x_collar && std::abs(y) >= G.delta1;
  if (!x_collar && !y_collar) return out;

  const double n_coord = x_collar ? x : y;
  const double kappa = n_coord >= 0.0 ? 1.0 : -1.0;
  const double n = kappa * n_coord;
  const double p1 = bump(n, G.delta1, G.delta2, BumpDirection::Rising);
  const double p1n = kappa * bump_derivative(n, G.delta1, G.delta2, BumpDirection::Rising);
  const double p2 = bump(n, G.delta2, G.delta - G.delta_prime, BumpDirection::Falling);
  const double p2n = kappa * bump_derivative(n, G.delta2, G.delta - G.delta_prime, BumpDirection::Falling);

  const double g = out.X[0], h = out.X[1];
  const auto J = out.dX;
  if (x_collar) {
    const CrossSide side = kappa > 0 ? CrossSide::E : CrossSide::W;
    const double a = augmentation(side, y);
    const double as = augmentation_slope(side);
    out.X = {p2 * g, h + p1 * a};
    out.dX = {{{p2n * g + p2 * J[0][0], p2 * J[0][1]}, {J[1][0] + p1n * a, J[1][1] + p1 * as}}};
  } else {
    const CrossSide side = kappa > 0 ? CrossSide::N : CrossSide::S;
    const double a = augmentation(side, x);
    const double as = augmentation_slope(side);
    out.X = {g + p1 * a, p2 * h};
    out.dX = {{{J[0][0] + p1 * as, J[0][1] + p1n * a}, {p2 * J[1][0], p2n * h + p2 * J[1][1]}}};
  }
  out.div = out.dX[0][0] + out.dX[1][1];
  return out;
}

SaddleModel saddle_model(double c, Sign sign, SaddleGeometry geometry) {
  require_sign(c, sign, "saddle_model");
  geometry.check();
  SaddleModel m;
  m.level = c;
  m.sign = sign;
  m.geometry = geometry;
  return m;
}

SaddleModel apply_boundary_surgery(const SaddleModel& field, const CollarSlopes& slopes, int grid) {
  SaddleModel out = field;
  out.surgery = true;
  out.slopes = slopes;
  const auto& G = out.geometry;
  const double s = sign_value(out.sign);
  double worst = std::numeric_limits<double>::infinity();
  Vec2 worst_at{};
  for (int i = 0; i <= grid; ++i) {
    for (int j = 0; j <= grid; ++j) {
      const double x = -G.delta + 2.0 * G.delta * i / grid;
      const double y = -G.delta + 2.0 * G.delta * j / grid;
      if (!in_cross_domain(G, x, y)) continue;
      const double d = s * out.eval(x, y).div;
      if (d <= worst) {
        worst = d;
        worst_at = {x, y};
      }
    }
  }
  if (worst <= 0.0)
    throw Error(ErrorCode::SlopeTooSmall, "divergence loses the atom sign at (" + std::to_string(worst_at.u) + ", " +
                                              std::to_string(worst_at.v) + ")");
  return out;
}

// ------------------------------------------------------------ band

std::pair<double, double> BandModel::trace(CrossSide side, double z) const {
  const double k = cross.segment_z_scale(side);
  const double w = z / k;
  const auto p = cross.segment_point(side, w);
  const auto s = cross.eval(p.u, p.v);
  const bool vertical = side == CrossSide::E || side == CrossSide::W;
  const double tangential = vertical ? s.X[1] : s.X[0];
  const double derivative = vertical ? s.dX[1][1] : s.dX[0][0];
  return {k * tangential, derivative};
}

FieldSample BandModel::eval(double t, double z) const {
  const auto [g0, g0z] = trace(start, z);
  const auto [g1, g1z] = trace(end, z);
  const double beta = bump(t, collar, 1.0 - collar, BumpDirection::Rising);
  const double beta_t = bump_derivative(t, collar, 1.0 - collar, BumpDirection::Rising);
  const double psi0 = bump(t, 0.0, collar, BumpDirection::Falling);
  const double psi0_t = bump_derivative(t, 0.0, collar, BumpDirection::Falling);
  const double psi1 = bump(t, 1.0 - collar, 1.0, BumpDirection::Rising);
  const double psi1_t = bump_derivative(t, 1.0 - collar, 1.0, BumpDirection::Rising);

  FieldSample out;
  out.f = cross.level + cross.amplitude * z;
  out.df = {0.0, cross.amplitude};
  const double g = (1.0 - beta) * g0 + beta * g1;
  out.X = {0.0, g};
  out.dX = {{{0.0, 0.0}, {beta_t * (g1 - g0), (1.0 - beta) * g0z + beta * g1z}}};
  out.rho = c0 * psi0 + c1 * psi1 + (1.0 - psi0 - psi1);
  out.drho = {(c0 - 1.0) * psi0_t + (c1 - 1.0) * psi1_t, 0.0};
  // rho does not depend on z, so div = dg/dz.
  out.div = out.dX[1][1];
  return out;
}

BandModel interpolate_band(const BandTrace& left, const BandTrace& right, double c0, double c1) {
  if (left.cross.sign != right.cross.sign || left.cross.level != right.cross.level)
    throw Error(ErrorCode::TraceSignError, "band traces must come from the same atom");
  if (!(c0 > 0.0 && c1 > 0.0)) throw Error(ErrorCode::TraceSignError, "trace densities must be positive");
  BandModel band;
  band.cross = left.cross;
  band.start = left.side;
  band.end = right.side;
  band.c0 = c0;
  band.c1 = c1;
  const double eps = band.epsilon();
  const double s = sign_value(band.cross.sign);
  for (int i = 0; i <= 64; ++i) {
    const double z = -eps + 2.0 * eps * i / 64;
    for (auto side : {band.start, band.end}) {
      const auto [g, gz] = band.trace(side, z);
      if (!(g < 0.0) || !(s * gz > 0.0))
        throw Error(ErrorCode::TraceSignError, "trace on side " + std::string(to_string(side)) +
                                                   " must point to lower f with derivative of the atom sign");
    }
  }
  return band;
}

// ------------------------------------------------------------ annuli

FieldSample ZeroAnnulusModel::eval(double /*theta*/, double s) const {
  FieldSample out;
  const double s2 = sigma * sigma;
  out.f = lambda * s;
  out.df = {0.0, lambda};
  out.X = {0.0, -1.0};
  out.rho = std::exp(-s * s / s2);
  out.drho = {0.0, -2.0 * s / s2 * out.rho};
  out.div = 2.0 * s / s2;
  return out;
}

ZeroAnnulusModel zero_annulus_model(double lambda, double sigma) {
  if (!(lambda > 0.0) || !(sigma > 0.0)) throw Error(ErrorCode::DomainError, "lambda and sigma must be positive");
  return {lambda, sigma, -1.0, 1.0};
}

double RescaleZone::profile(double s) const {
  return bump(s, ramp_lo, plateau_lo, BumpDirection::Rising) * bump(s, plateau_hi, ramp_hi, BumpDirection::Falling);
}

double RescaleZone::profile_integral(double s) const {
  const double l1 = plateau_lo - ramp_lo;
  const double l2 = ramp_hi - plateau_hi;
  const double plateau = plateau_hi - plateau_lo;
  if (s <= ramp_lo) return 0.0;
  if (s <= plateau_lo) return l1 * smooth_step_integral((s - ramp_lo) / l1);
  if (s <= plateau_hi) return 0.5 * l1 + (s - plateau_lo);
  if (s <= ramp_hi) return 0.5 * l1 + plateau + l2 * (0.5 - smooth_step_integral((ramp_hi - s) / l2));
  return width();
}

double SameSignAnnulusModel::log_density(double s) const {
  const double u = s + 1.0;
  const double base_integral = div_lo * u + 0.25 * (div_hi - div_lo) * u * u;
  return -sign_value(sign) * (base_integral + lambda * zone.profile_integral(s));
}

double SameSignAnnulusModel::rescale_factor() const { return std::exp(lambda * zone.width()); }

FieldSample SameSignAnnulusModel::eval(double /*theta*/, double s) const {
  FieldSample out;
  const double slope = 0.5 * (f_hi - f_lo);
  out.f = f_lo + slope * (s + 1.0);
  out.df = {0.0, slope};
  out.X = {0.0, -1.0};
  const double base = div_lo + 0.5 * (div_hi - div_lo) * (s + 1.0);
  const double phi_prime = sign_value(sign) * (base + lambda * zone.profile(s));
  out.rho = std::exp(log_density(s));
  out.drho = {0.0, -phi_prime * out.rho};
  out.div = phi_prime;
  return out;
}

SameSignAnnulusModel rescale_same_sign_annulus(const AnnulusTrace& low, const AnnulusTrace& high, double lambda_a,
                                               RescaleZone zone) {
  if (low.sign != high.sign)
    throw Error(ErrorCode::SignMismatch, "same-sign annulus between atoms of opposite sign; use the zero-crossing model");
  if (sign_of(low.f) != low.sign || sign_of(high.f) != high.sign || !(low.f < high.f))
    throw Error(ErrorCode::SignMismatch, "annulus trace values inconsistent with their sign");
  if (!(lambda_a >= 0.0)) throw Error(ErrorCode::DomainError, "rescale exponent must be non-negative");
  SameSignAnnulusModel m;
  m.sign = low.sign;
  m.f_lo = low.f;
  m.f_hi = high.f;
  m.div_lo = std::abs(low.div);
  m.div_hi = std::abs(high.div);
  m.lambda = lambda_a;
  m.zone = zone;
  return m;
}

}  // namespace convexform
