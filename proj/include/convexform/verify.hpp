#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "convexform/assembly.hpp"

namespace convexform {

struct Tolerances {
  /// Contact density must exceed this everywhere.
  double contact_margin = 0.0;
  double fd_relative = 1e-6;
  double fd_step = 1e-4;
  double seam = 1e-12;
  /// Exclusion ball around chart centers for the gradient-like check.
  double singular_radius = 1e-12;
};

/// One check on one chart (or seam). `margin` is positive iff the check passes:
/// for error-type checks (seams, finite differences) it is tolerance - worst error.
struct CheckRecord {
  std::string check;
  std::string chart;
  int grid = 0;
  double margin = 0.0;
  double worst_value = 0.0;
  Vec2 worst_point{};
  std::size_t samples = 0;
  bool pass = false;
};

struct VerificationReport {
  std::vector<CheckRecord> records;
  Tolerances tolerances;
  int grid = 0;
  bool pass = false;

  /// Smallest margin of the named check across charts.
  double margin(const std::string& check) const;
  const CheckRecord& worst(const std::string& check) const;
};

/// f * div X - X(f) at a chart point; throws OutOfDomain outside the chart.
double contact_density(const FieldAssembly& assembly, const std::string& chart_id, Vec2 point);

/// Grid points of a chart: tensor grid plus the chart's critical loci.
std::vector<Vec2> sample_points(const Chart& chart, int grid);

/// Runs checks (a)-(f). Charts are processed in parallel (CONVEXFORM_THREADS caps the
/// worker count); records are always emitted in chart order.
VerificationReport verify(const FieldAssembly& assembly, int grid = 128, const Tolerances& tol = {});

nlohmann::json to_json(const VerificationReport& report);

}  // namespace convexform
