#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "convexform/local_models.hpp"
#include "convexform/morse_spec.hpp"

namespace convexform {

enum class ChartKind { EllipticDisk, SaddleCross, Band, Annulus };
enum class ChartSign { Positive, Negative, Crossing };

std::string_view to_string(ChartKind kind);
std::string_view to_string(ChartSign sign);

using ChartModel = std::variant<EllipticModel, SaddleModel, BandModel, ZeroAnnulusModel, SameSignAnnulusModel>;

/// Rectangle of chart coordinates. Elliptic disks use (r, theta), annuli (theta, s).
struct ChartDomain {
  double u_lo = 0.0, u_hi = 1.0;
  double v_lo = 0.0, v_hi = 1.0;
};

struct Chart {
  std::string id;
  ChartKind kind = ChartKind::EllipticDisk;
  ChartSign sign = ChartSign::Positive;
  /// Critical point id for atom charts and bands, Reeb edge id for annuli.
  std::string source;
  ChartModel model;
  /// log of the constant multiplying the whole omega-density.
  double log_scale = 0.0;

  ChartDomain domain() const;
  bool contains(double u, double v, double tol = 1e-12) const;
  /// Closed-form sample with the chart's density scale applied.
  FieldSample eval(double u, double v) const;
  /// Zero of X inside the chart, if any (atom centers).
  std::optional<Vec2> singular_point() const;
};

/// A boundary piece of a chart: a curve param -> (u, v) on [from, to].
enum class CurveKind { ConstU, ConstV, Hyperbola };

struct BoundaryPiece {
  std::string chart;
  std::string label;
  CurveKind curve = CurveKind::ConstU;
  /// Fixed coordinate for ConstU / ConstV; the value of 4xy for Hyperbola.
  double fixed = 0.0;
  /// Parameter range listed in the direction of travel around the boundary.
  double from = 0.0;
  double to = 1.0;
  /// +1 if the induced boundary orientation runs in increasing raw parameter.
  int induced_sign = 1;

  Vec2 point(double p) const;
  /// Unit-speed tangent index used for the tangential component (0 = u, 1 = v); Hyperbola uses u.
  int param_axis() const { return curve == CurveKind::ConstU ? 1 : 0; }
};

enum class SeamKind { Flow, Level };

/// Zero-width interface: point p of piece `a` is identified with point scale*p + offset of piece `b`.
struct SeamRef {
  SeamKind kind = SeamKind::Level;
  BoundaryPiece a;
  BoundaryPiece b;
  double scale = 1.0;
  double offset = 0.0;
  /// rho_b / rho_a, constant along the seam.
  double density_ratio = 1.0;

  double map(double p) const { return scale * p + offset; }
  double inverse(double q) const { return (q - offset) / scale; }
};

struct SlopeSelection {
  double safety_factor = 2.0;
  int grid = 128;
  /// Collar slopes per saddle chart id, indexed by CrossSide.
  std::map<std::string, CollarSlopes> collar_slopes;
  /// Rescale exponent per same-sign annulus chart id.
  std::map<std::string, double> annulus_lambda;
};

struct AssemblyParams {
  double safety_factor = 2.0;
  int slope_grid = 128;
  /// Forces every collar slope to this value (adversarial runs).
  std::optional<double> slope_override;
  /// Refuse collar slopes or band traces that break the sign law.
  bool check_surgery = true;
  double zero_lambda = 1.0;
  double zero_sigma = 0.5;
  RescaleZone zone{};
};

struct FieldAssembly {
  std::vector<Chart> charts;
  std::vector<SeamRef> seams;
  SlopeSelection slopes;
  std::string provenance;
  MorseSpec spec;

  const Chart& chart(const std::string& id) const;
  std::optional<std::size_t> index_of(const std::string& id) const;
  std::size_t count(ChartKind kind) const;
};

/// safety * max(0, -min_signed_div) + 1, the floor being 1.
double slope_rule(double min_signed_div, double safety_factor = 2.0);

/// Slopes that restore the sign law on every collar: safety * max(0, -min sigma*div) + 1,
/// with div sampled on a grid x grid lattice of the collar using zero slopes.
CollarSlopes select_collar_slopes(const SaddleModel& draft, int grid, double safety_factor = 2.0);

/// Same-sign annulus exponent: safety * max |base divergence| + 1.
double select_annulus_lambda(const AnnulusTrace& low, const AnnulusTrace& high, double safety_factor = 2.0);

FieldAssembly build_assembly(const MorseSpec& spec, const AssemblyParams& params = {});

/// Throws InvariantViolation if a seam is missing, duplicated, or orientation reversing.
void check_seam_topology(const FieldAssembly& assembly);

/// Largest |f_a - f_b| over `samples` points per seam, plus tangential X mismatch
/// for flow seams and density-ratio drift.
struct SeamDefect {
  std::size_t seam = 0;
  double f_gap = 0.0;
  double x_gap = 0.0;
  double ratio_drift = 0.0;
};
std::vector<SeamDefect> seam_defects(const FieldAssembly& assembly, int samples = 257);

/// 64-bit FNV-1a of a byte string, as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);
std::string spec_hash(const MorseSpec& spec);

nlohmann::json to_json(const FieldAssembly& assembly);
FieldAssembly assembly_from_json(const nlohmann::json& j);

}  // namespace convexform
