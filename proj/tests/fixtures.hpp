#pragma once

#include "convexform/morse_spec.hpp"

namespace convexform::fixtures {

inline MorseSpec sphere_min() {
  MorseSpec s;
  s.critical_points = {{"M", CriticalKind::Maximum, 1.0}, {"m", CriticalKind::Minimum, -1.0}};
  s.edges = {{"e0", "m", "M", {}}};
  return normalized(s);
}

// Standard height function on the upright torus, shifted so zero sits between the saddles.
inline MorseSpec torus_std() {
  MorseSpec s;
  s.critical_points = {{"min", CriticalKind::Minimum, -2.0},
                       {"s_lo", CriticalKind::Saddle, -1.0},
                       {"s_hi", CriticalKind::Saddle, 1.0},
                       {"max", CriticalKind::Maximum, 2.0}};
  s.edges = {{"a", "min", "s_lo", {}}, {"b", "s_lo", "s_hi", {}}, {"c", "s_lo", "s_hi", {}}, {"d", "s_hi", "max", {}}};
  return normalized(s);
}

inline DividingSetSpec sphere_one_circle() {
  DividingSetSpec d;
  d.positive_components = {{0, {"g"}}};
  d.negative_components = {{0, {"g"}}};
  d.pairing = {"g"};
  return d;
}

inline DividingSetSpec sphere_two_circles() {
  DividingSetSpec d;
  d.positive_components = {{0, {"a"}}, {0, {"b"}}};
  d.negative_components = {{0, {"a", "b"}}};
  d.pairing = {"a", "b"};
  return d;
}

inline DividingSetSpec torus_parallel() {
  DividingSetSpec d;
  d.positive_components = {{0, {"a", "b"}}};
  d.negative_components = {{0, {"a", "b"}}};
  d.pairing = {"a", "b"};
  return d;
}

// Three dividing curves on a genus-2 surface with signs +, -, + from top to bottom.
inline DividingSetSpec genus2_three_curves() {
  DividingSetSpec d;
  d.positive_components = {{0, {"c1"}}, {0, {"c2", "c3"}}};
  d.negative_components = {{1, {"c1", "c2", "c3"}}};
  d.pairing = {"c1", "c2", "c3"};
  return d;
}

inline DividingSetSpec genus2_single_curve() {
  DividingSetSpec d;
  d.positive_components = {{1, {"g"}}};
  d.negative_components = {{1, {"g"}}};
  d.pairing = {"g"};
  return d;
}

}  // namespace convexform::fixtures
