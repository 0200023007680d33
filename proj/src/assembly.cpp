#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "convexform/assembly.hpp"

namespace convexform {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;
const SaddleGeometry kUnitCross{};

// One boundary circle of an atom chart group, pieces listed along the induced orientation.
struct Circle {
  std::vector<BoundaryPiece> pieces;
  std::size_t chart = 0;  // chart whose density sits on the circle (for scale bookkeeping)
};

struct AtomCharts {
  std::size_t main = 0;
  std::vector<std::size_t> bands;
  std::map<std::string, Circle> circles;  // by edge id
  double center_div = 0.0;
};

BoundaryPiece piece(const std::string& chart, const std::string& label, CurveKind curve, double fixed, double from,
                    double to, int induced) {
  return {chart, label, curve, fixed, from, to, induced};
}

// Induced boundary orientation (surface oriented by du^dv) of the cross's pieces.
int cross_induced_sign(const std::string& label) {
  if (label == "E" || label == "S" || label == "Q3" || label == "Q4") return 1;
  return -1;  // N, W, Q1, Q2
}

BoundaryPiece cross_segment(const std::string& chart, const SaddleGeometry& g, CrossSide side) {
  const double w = 0.5 * g.delta1;
  const auto label = std::string(to_string(side));
  const bool vertical = side == CrossSide::E || side == CrossSide::W;
  const double fixed = (side == CrossSide::E || side == CrossSide::N) ? g.delta : -g.delta;
  return piece(chart, label, vertical ? CurveKind::ConstU : CurveKind::ConstV, fixed, -w, w, cross_induced_sign(label));
}

BoundaryPiece cross_arc(const std::string& chart, const SaddleGeometry& g, int quadrant) {
  const double eps = g.epsilon();
  const double d = g.delta, h = 0.5 * g.delta1;
  const auto label = "Q" + std::to_string(quadrant);
  switch (quadrant) {
    case 1: return piece(chart, label, CurveKind::Hyperbola, eps, d, h, cross_induced_sign(label));
    case 2: return piece(chart, label, CurveKind::Hyperbola, -eps, -h, -d, cross_induced_sign(label));
    case 3: return piece(chart, label, CurveKind::Hyperbola, eps, -d, -h, cross_induced_sign(label));
    default: return piece(chart, label, CurveKind::Hyperbola, -eps, h, d, cross_induced_sign(label));
  }
}

BoundaryPiece band_top(const std::string& chart, double eps) { return piece(chart, "top", CurveKind::ConstV, eps, 1.0, 0.0, -1); }
BoundaryPiece band_bottom(const std::string& chart, double eps) {
  return piece(chart, "bottom", CurveKind::ConstV, -eps, 0.0, 1.0, 1);
}
BoundaryPiece band_side(const std::string& chart, double t, double eps) {
  return piece(chart, t == 0.0 ? "t=0" : "t=1", CurveKind::ConstU, t, -eps, eps, t == 0.0 ? -1 : 1);
}

ChartSign chart_sign(Sign s) { return s == Sign::Positive ? ChartSign::Positive : ChartSign::Negative; }

}  // namespace

double slope_rule(double min_signed_div, double safety_factor) {
  return safety_factor * std::max(0.0, -min_signed_div) + 1.0;
}

CollarSlopes select_collar_slopes(const SaddleModel& draft, int grid, double safety_factor) {
  SaddleModel m = draft;
  m.surgery = true;
  m.slopes = {0.0, 0.0, 0.0, 0.0};
  const auto& G = m.geometry;
  const double s = sign_value(m.sign);
  CollarSlopes out{};
  for (CrossSide side : {CrossSide::E, CrossSide::N, CrossSide::W, CrossSide::S}) {
    double worst = std::numeric_limits<double>::infinity();
    const bool vertical = side == CrossSide::E || side == CrossSide::W;
    const double kappa = (side == CrossSide::E || side == CrossSide::N) ? 1.0 : -1.0;
    for (int i = 0; i <= grid; ++i) {
      const double n = kappa * (G.delta1 + (G.delta - G.delta1) * i / grid);
      for (int j = 0; j <= grid; ++j) {
        const double w = -G.delta + 2.0 * G.delta * j / grid;
        const double x = vertical ? n : w, y = vertical ? w : n;
        if (!in_cross_domain(G, x, y)) continue;
        worst = std::min(worst, s * m.eval(x, y).div);
      }
    }
    out[static_cast<int>(side)] = slope_rule(worst, safety_factor);
  }
  return out;
}

double select_annulus_lambda(const AnnulusTrace& low, const AnnulusTrace& high, double safety_factor) {
  return safety_factor * std::max(std::abs(low.div), std::abs(high.div)) + 1.0;
}

FieldAssembly build_assembly(const MorseSpec& input, const AssemblyParams& params) {
  FieldAssembly a;
  a.spec = normalized(input);
  require_valid(a.spec);
  a.provenance = spec_hash(a.spec);
  a.slopes.safety_factor = params.safety_factor;
  a.slopes.grid = params.slope_grid;
  const auto deco = atom_decomposition(a.spec);

  std::map<std::string, AtomCharts> atoms;

  // ---- atom charts
  for (const auto& atom : deco.atoms) {
    const auto& cp = a.spec.point(atom.critical_point);
    AtomCharts ac;
    if (cp.kind != CriticalKind::Saddle) {
      const double R = std::sqrt(atom.epsilon);
      Chart c{"D:" + cp.id, ChartKind::EllipticDisk, chart_sign(atom.sign), cp.id, elliptic_model(cp.value, atom.sign, R)};
      ac.main = a.charts.size();
      ac.center_div = 4.0;
      a.charts.push_back(c);
      ac.circles[atom.boundary_circles.at(0).edge] = {{piece(c.id, "r=R", CurveKind::ConstU, R, 0.0, kTwoPi, 1)}, ac.main};
      atoms[cp.id] = std::move(ac);
      continue;
    }

    // Unit cross in blown-up coordinates; the atom size lives in the amplitude of f.
    const auto geom = kUnitCross;
    auto draft = saddle_model(cp.value, atom.sign, geom);
    draft.amplitude = atom.epsilon / kUnitCross.epsilon();
    const std::string xid = "X:" + cp.id;
    CollarSlopes slopes;
    if (params.slope_override) slopes.fill(*params.slope_override);
    else slopes = select_collar_slopes(draft, params.slope_grid, params.safety_factor);
    a.slopes.collar_slopes[xid] = slopes;
    SaddleModel cross = draft;
    if (params.check_surgery) {
      cross = apply_boundary_surgery(draft, slopes, params.slope_grid);
    } else {
      cross.surgery = true;
      cross.slopes = slopes;
    }
    ac.main = a.charts.size();
    ac.center_div = 2.0;
    a.charts.push_back({xid, ChartKind::SaddleCross, chart_sign(atom.sign), cp.id, cross});

    // Two edges above: the level set splits going up (b1 = E->N, b2 = W->S); otherwise it merges.
    std::vector<std::string> above, below;
    for (const auto& b : atom.boundary_circles) (b.side == BoundarySide::Above ? above : below).push_back(b.edge);
    const bool split = above.size() == 2;
    const std::pair<CrossSide, CrossSide> ends[2] = {
        split ? std::pair{CrossSide::E, CrossSide::N} : std::pair{CrossSide::E, CrossSide::S},
        split ? std::pair{CrossSide::W, CrossSide::S} : std::pair{CrossSide::W, CrossSide::N}};
    std::string bid[2];
    for (int k = 0; k < 2; ++k) {
      bid[k] = "B:" + cp.id + ":" + std::to_string(k + 1);
      BandModel band;
      if (params.check_surgery) {
        band = interpolate_band({cross, ends[k].first}, {cross, ends[k].second});
      } else {
        band.cross = cross;
        band.start = ends[k].first;
        band.end = ends[k].second;
      }
      ac.bands.push_back(a.charts.size());
      a.charts.push_back({bid[k], ChartKind::Band, chart_sign(atom.sign), cp.id, band});
      // Flow seams: band sides onto the straight cross segments, z = k w.
      const double eps = geom.epsilon();
      for (int e = 0; e < 2; ++e) {
        const CrossSide side = e == 0 ? ends[k].first : ends[k].second;
        SeamRef s;
        s.kind = SeamKind::Flow;
        s.a = band_side(bid[k], e == 0 ? 0.0 : 1.0, eps);
        s.b = cross_segment(xid, geom, side);
        s.scale = 1.0 / cross.segment_z_scale(side);
        a.seams.push_back(s);
      }
    }

    const double eps = geom.epsilon();
    auto circle = [&](std::vector<BoundaryPiece> pieces) { return Circle{std::move(pieces), ac.main}; };
    if (split) {
      ac.circles[above[0]] = circle({cross_arc(xid, geom, 1), band_top(bid[0], eps)});
      ac.circles[above[1]] = circle({cross_arc(xid, geom, 3), band_top(bid[1], eps)});
      ac.circles[below[0]] = circle({cross_arc(xid, geom, 2), band_bottom(bid[1], eps), cross_arc(xid, geom, 4),
                                     band_bottom(bid[0], eps)});
    } else {
      ac.circles[above[0]] = circle({cross_arc(xid, geom, 1), band_top(bid[1], eps), cross_arc(xid, geom, 3),
                                     band_top(bid[0], eps)});
      ac.circles[below[0]] = circle({cross_arc(xid, geom, 2), band_bottom(bid[1], eps)});
      ac.circles[below[1]] = circle({cross_arc(xid, geom, 4), band_bottom(bid[0], eps)});
    }
    atoms[cp.id] = std::move(ac);
  }

  auto boundary_value = [&](const Circle& c) {
    const auto& p = c.pieces.front();
    const auto q = p.point(p.from);
    return a.chart(p.chart).eval(q.u, q.v).f;
  };

  // ---- annulus charts and level seams
  std::map<std::string, std::size_t> annulus_of;  // edge id -> chart index
  for (const auto& e : a.spec.edges) {
    const auto& lo_atom = atoms.at(e.lower);
    const auto& hi_atom = atoms.at(e.upper);
    const Circle& lo = lo_atom.circles.at(e.id);
    const Circle& hi = hi_atom.circles.at(e.id);
    const double f_lo = boundary_value(lo), f_hi = boundary_value(hi);
    Chart c;
    c.id = "A:" + e.id;
    c.kind = ChartKind::Annulus;
    c.source = e.id;
    double s_lo = -1.0, s_hi = 1.0;
    if (e.crosses_zero()) {
      // Keep s within [-1, 1] so the Gaussian density stays well conditioned.
      const double lambda = std::max({params.zero_lambda, -f_lo, f_hi});
      auto m = zero_annulus_model(lambda, params.zero_sigma);
      m.s_lo = s_lo = f_lo / m.lambda;
      m.s_hi = s_hi = f_hi / m.lambda;
      c.sign = ChartSign::Crossing;
      c.model = m;
    } else {
      const Sign sign = sign_of(f_lo);
      const AnnulusTrace tl{sign, f_lo, lo_atom.center_div}, th{sign, f_hi, hi_atom.center_div};
      const double lambda = select_annulus_lambda(tl, th, params.safety_factor);
      a.slopes.annulus_lambda[c.id] = lambda;
      c.sign = chart_sign(sign);
      c.model = rescale_same_sign_annulus(tl, th, lambda, params.zone);
    }
    annulus_of[e.id] = a.charts.size();
    a.charts.push_back(c);

    // s_hi meets the upper atom's lower circle with theta running along its induced orientation;
    // s_lo meets the lower atom's upper circle through theta' = 2 pi - theta.
    for (int end = 0; end < 2; ++end) {
      const bool top = end == 1;
      const auto& pieces = (top ? hi : lo).pieces;
      const double width = kTwoPi / static_cast<double>(pieces.size());
      for (std::size_t i = 0; i < pieces.size(); ++i) {
        const auto& P = pieces[i];
        const double th0 = width * static_cast<double>(i), th1 = width * static_cast<double>(i + 1);
        const double rate = (P.to - P.from) / width;
        SeamRef s;
        s.kind = SeamKind::Level;
        s.b = P;
        const std::string label = std::string(top ? "s_hi#" : "s_lo#") + std::to_string(i);
        if (top) {
          s.a = piece(c.id, label, CurveKind::ConstV, s_hi, th1, th0, -1);
          s.scale = rate;
          s.offset = P.from - rate * th0;
        } else {
          s.a = piece(c.id, label, CurveKind::ConstV, s_lo, kTwoPi - th1, kTwoPi - th0, 1);
          s.scale = -rate;
          s.offset = P.from + rate * (kTwoPi - th0);
        }
        a.seams.push_back(s);
      }
    }
  }

  // ---- density scales: spanning tree of the Reeb graph rooted at the lowest critical value
  auto log_rho_at = [&](const BoundaryPiece& p) {
    const double mid = 0.5 * (p.from + p.to);
    const auto q = p.point(mid);
    return std::log(a.chart(p.chart).eval(q.u, q.v).rho);
  };
  const auto root = std::min_element(a.spec.critical_points.begin(), a.spec.critical_points.end(),
                                     [](const auto& x, const auto& y) { return x.value < y.value; });
  std::map<std::string, bool> seen{{root->id, true}};
  std::map<std::string, bool> edge_done;
  std::deque<std::string> queue{root->id};
  auto set_atom_scale = [&](const std::string& cp, double L) {
    const auto& ac = atoms.at(cp);
    a.charts[ac.main].log_scale = L;
    for (auto b : ac.bands) a.charts[b].log_scale = L;
  };
  set_atom_scale(root->id, 0.0);
  auto annulus_end_piece = [&](std::size_t idx, bool top) {
    for (const auto& s : a.seams)
      if (s.a.chart == a.charts[idx].id && s.a.label == (top ? "s_hi#0" : "s_lo#0")) return s;
    throw Error(ErrorCode::InvariantViolation, "annulus without seams");
  };
  while (!queue.empty()) {
    const auto cp = queue.front();
    queue.pop_front();
    for (const auto& e : a.spec.edges) {
      if (edge_done[e.id] || (e.lower != cp && e.upper != cp)) continue;
      edge_done[e.id] = true;
      const bool from_low = e.lower == cp;
      const auto other = from_low ? e.upper : e.lower;
      const std::size_t ai = annulus_of.at(e.id);
      a.charts[ai].log_scale = 0.0;
      const auto near = annulus_end_piece(ai, !from_low);
      const auto far = annulus_end_piece(ai, from_low);
      const double L_ann = log_rho_at(near.b) - log_rho_at(near.a);
      a.charts[ai].log_scale = L_ann;
      if (seen[other]) continue;  // cycle edge: the mismatch stays in the far seam's density ratio
      seen[other] = true;
      const double L_far_atom = a.charts[atoms.at(other).main].log_scale;
      set_atom_scale(other, L_far_atom + log_rho_at(far.a) - log_rho_at(far.b));
      queue.push_back(other);
    }
  }

  for (auto& s : a.seams) {
    const double mid = 0.5 * (s.a.from + s.a.to);
    const auto pa = s.a.point(mid);
    const auto pb = s.b.point(s.map(mid));
    s.density_ratio = a.chart(s.b.chart).eval(pb.u, pb.v).rho / a.chart(s.a.chart).eval(pa.u, pa.v).rho;
  }

  check_seam_topology(a);
  return a;
}

}  // namespace convexform
