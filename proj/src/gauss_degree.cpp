#include "convexform/gauss_degree.hpp"


namespace convexform {

namespace {

[[noreturn]] void invariant(const std::string& msg) { throw Error(ErrorCode::InvariantViolation, msg); }

int component_chi(const std::vector<DividingComponent>& comps) {
  int chi = 0;
  for (const auto& c : comps) chi += 2 - 2 * c.genus - static_cast<int>(c.boundary_circles.size());
  return chi;
}

int total_genus(const std::vector<DividingComponent>& comps) {
  int g = 0;
  for (const auto& c : comps) g += c.genus;
  return g;
}

}  // namespace

DegreeReport degree_report(const DividingSetSpec& dspec) {
  validate_dividing_set(dspec);
  const auto spec = spec_from_dividing_set(dspec);
  DegreeReport r;
  // Morse counts of the standard embedding: elliptic and hyperbolic points by sign.
  for (const auto& p : spec.critical_points) {
    const bool positive = p.value > 0;
    if (p.kind == CriticalKind::Saddle) (positive ? r.h_plus : r.h_minus)++;
    else (positive ? r.e_plus : r.e_minus)++;
  }
  r.g_plus = total_genus(dspec.positive_components);
  r.g_minus = total_genus(dspec.negative_components);
  r.chi_plus = r.e_plus - r.h_plus;
  r.chi_minus = r.e_minus - r.h_minus;

  if (r.e_plus != static_cast<int>(dspec.positive_components.size()) ||
      r.e_minus != static_cast<int>(dspec.negative_components.size()))
    invariant("elliptic count differs from the number of components");
  if (r.chi_plus != component_chi(dspec.positive_components) || r.chi_minus != component_chi(dspec.negative_components))
    invariant("Euler characteristic from Morse counts differs from the component formula");
  if ((r.chi_plus - r.chi_minus) % 2 != 0) invariant("chi_+ - chi_- is odd");

  r.degree_formula = (r.chi_plus - r.chi_minus) / 2;
  // Positive hyperbolic points reverse orientation, negative ones preserve it; of the 2g
  // extra hyperbolic points of a handle only half map to the south pole.
  r.degree_localsum = r.h_minus - r.h_plus - r.g_minus + r.g_plus;
  if (r.degree_formula != r.degree_localsum) invariant("degree formula and local-degree sum disagree");
  r.euler_class = r.chi_plus - r.chi_minus;
  r.genus = (2 - r.chi_plus - r.chi_minus) / 2;
  return r;
}

bool homotopy_equivalent(const DividingSetSpec& a, const DividingSetSpec& b) {
  const auto ra = degree_report(a), rb = degree_report(b);
  if (ra.genus != rb.genus)
    throw Error(ErrorCode::GenusMismatch,
                "surfaces of genus " + std::to_string(ra.genus) + " and " + std::to_string(rb.genus));
  return ra.degree_formula == rb.degree_formula;
}

DividingSetSpec swap_signs(DividingSetSpec dspec) {
  std::swap(dspec.positive_components, dspec.negative_components);
  return dspec;
}

nlohmann::json to_json(const DegreeReport& r) {
  return {{"e_plus", r.e_plus},
          {"e_minus", r.e_minus},
          {"h_plus", r.h_plus},
          {"h_minus", r.h_minus},
          {"g_plus", r.g_plus},
          {"g_minus", r.g_minus},
          {"chi_plus", r.chi_plus},
          {"chi_minus", r.chi_minus},
          {"degree_formula", r.degree_formula},
          {"degree_localsum", r.degree_localsum},
          {"euler_class", r.euler_class},
          {"genus", r.genus}};
}

}  // namespace convexform
