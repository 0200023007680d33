#pragma once

namespace convexform {

enum class BumpDirection { Rising, Falling };

/// Flat smooth step on [0, 1]: e(t) / (e(t) + e(1 - t)) with e(t) = exp(-1/t).
/// Exactly 0 for t <= 0 and exactly 1 for t >= 1.
double smooth_step(double t);
double smooth_step_derivative(double t);

/// Integral of smooth_step over [0, t], for t in [0, 1]; clamps outside.
double smooth_step_integral(double t);

/// Cutoff that is 0 left of a and 1 right of b (rising), or the mirror image.
/// Throws DomainError when a >= b.
double bump(double x, double a, double b, BumpDirection direction);
double bump_derivative(double x, double a, double b, BumpDirection direction);

}  // namespace convexform
