#include "convexform/bump.hpp"

#include <array>
#include <cmath>

#include "convexform/error.hpp"

namespace convexform {

namespace {

// exp(-1/t) for t > 0; the guard keeps the flat end exact instead of relying on underflow.
double flat(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
double flat_derivative(double t) { return t > 0.0 ? std::exp(-1.0 / t) / (t * t) : 0.0; }

void check_interval(double a, double b) {
  if (!(a < b)) throw Error(ErrorCode::DomainError, "bump interval requires a < b");
}

// 10-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr std::array<double, 5> kNodes{0.1488743389816312, 0.4333953941292472, 0.6794095682990244,
                                       0.8650633666889845, 0.9739065285171717};
constexpr std::array<double, 5> kWeights{0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
                                         0.1494513491505806, 0.0666713443086881};

double gauss10(double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double sum = 0.0;
  for (std::size_t i = 0; i < kNodes.size(); ++i)
    sum += kWeights[i] * (smooth_step(mid - half * kNodes[i]) + smooth_step(mid + half * kNodes[i]));
  return sum * half;
}

}  // namespace

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = flat(t);
  const double b = flat(1.0 - t);
  return a / (a + b);
}

double smooth_step_derivative(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double a = flat(t);
  const double b = flat(1.0 - t);
  const double s = a + b;
  return (flat_derivative(t) * b + a * flat_derivative(1.0 - t)) / (s * s);
}

double smooth_step_integral(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 0.5 + (t - 1.0);
  // S(t) + S(1 - t) = 1 folds the upper half onto [0, 1/2].
  if (t > 0.5) return t - 0.5 + smooth_step_integral(1.0 - t);
  // Composite rule with panels scaled to [0, t] so the result varies smoothly in t.
  constexpr int kPanels = 8;
  double sum = 0.0;
  for (int k = 0; k < kPanels; ++k) sum += gauss10(t * k / kPanels, t * (k + 1) / kPanels);
  return sum;
}

double bump(double x, double a, double b, BumpDirection direction) {
  check_interval(a, b);
  const double w = b - a;
  return direction == BumpDirection::Rising ? smooth_step((x - a) / w) : smooth_step((b - x) / w);
}

double bump_derivative(double x, double a, double b, BumpDirection direction) {
  check_interval(a, b);
  const double w = b - a;
  return direction == BumpDirection::Rising ? smooth_step_derivative((x - a) / w) / w
                                            : -smooth_step_derivative((b - x) / w) / w;
}

}  // namespace convexform
