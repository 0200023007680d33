#pragma once

#include <json.hpp>

#include "convexform/morse_spec.hpp"

namespace convexform {

/// Singularity counts of the standard embedding and the Gauss-map degree computed two ways.
struct DegreeReport {
  int e_plus = 0, e_minus = 0;  // elliptic points (components of the regions)
  int h_plus = 0, h_minus = 0;  // hyperbolic points
  int g_plus = 0, g_minus = 0;  // total genus of each region
  int chi_plus = 0, chi_minus = 0;
  int degree_formula = 0;
  int degree_localsum = 0;
  int euler_class = 0;
  /// Genus of the whole surface.
  int genus = 0;
};

/// Throws PairingError for invalid input and InvariantViolation if the two
/// Euler-characteristic or degree computations disagree.
DegreeReport degree_report(const DividingSetSpec& dspec);

/// Plane fields of the two dividing sets are homotopic iff the degrees agree.
/// Throws GenusMismatch when the underlying surfaces differ.
bool homotopy_equivalent(const DividingSetSpec& a, const DividingSetSpec& b);

/// Exchanges the positive and negative regions.
DividingSetSpec swap_signs(DividingSetSpec dspec);

nlohmann::json to_json(const DegreeReport& report);

}  // namespace convexform
