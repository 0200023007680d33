#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "convexform/assembly.hpp"

namespace convexform {

enum class Termination { SingularPoint, Boundary, StepLimit };
enum class Direction { Forward, Backward };

std::string_view to_string(Termination t);

struct TracePoint {
  std::string chart;
  Vec2 p;
};

struct Trajectory {
  std::vector<TracePoint> points;
  Termination termination = Termination::StepLimit;
  /// Number of seam crossings.
  int crossings = 0;
};

/// Fixed-step RK4 along X (or -X backward), crossing seams through their affine
/// identifications. Stops within 10 * step of a chart center when approaching it.
Trajectory integrate(const FieldAssembly& assembly, const std::string& chart, Vec2 start,
                     Direction direction = Direction::Forward, double step = 1e-3, int max_steps = 100000);

/// Four forward trajectories seeded at +-offset on each axis of a saddle chart.
/// Throws NotASaddle for other charts.
std::vector<Trajectory> separatrices(const FieldAssembly& assembly, const std::string& chart, double offset = 1e-6,
                                     double step = 1e-3, int max_steps = 100000);

/// CSV with columns chart_id,u,v,f,Xu,Xv,density; one blank-line-separated block per trajectory.
void write_csv(std::ostream& os, const FieldAssembly& assembly, const std::vector<Trajectory>& trajectories);

}  // namespace convexform
