#include "convexform/foliation.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace convexform {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

Vec2 rk4(const Chart& c, Vec2 p, double h, double sign) {
  auto f = [&](Vec2 q) {
    const auto s = c.eval(q.u, q.v);
    return Vec2{sign * s.X[0], sign * s.X[1]};
  };
  const auto k1 = f(p);
  const auto k2 = f({p.u + 0.5 * h * k1.u, p.v + 0.5 * h * k1.v});
  const auto k3 = f({p.u + 0.5 * h * k2.u, p.v + 0.5 * h * k2.v});
  const auto k4 = f({p.u + h * k3.u, p.v + h * k3.v});
  return {p.u + h / 6.0 * (k1.u + 2 * k2.u + 2 * k3.u + k4.u), p.v + h / 6.0 * (k1.v + 2 * k2.v + 2 * k3.v + k4.v)};
}

// Constraint residual of a point against a boundary piece, and the piece parameter there.
std::pair<double, double> residual(const BoundaryPiece& b, Vec2 e) {
  switch (b.curve) {
    case CurveKind::ConstU: return {std::abs(e.u - b.fixed), e.v};
    case CurveKind::ConstV: return {std::abs(e.v - b.fixed), e.u};
    case CurveKind::Hyperbola: return {std::abs(4.0 * e.u * e.v - b.fixed) / std::max(1.0, std::abs(b.fixed)), e.u};
  }
  return {std::numeric_limits<double>::infinity(), 0.0};
}

struct Crossing {
  std::string chart;
  Vec2 p;
};

std::optional<Crossing> cross_seam(const FieldAssembly& a, const Chart& c, Vec2 e) {
  double best = std::numeric_limits<double>::infinity();
  std::optional<Crossing> out;
  for (const auto& s : a.seams) {
    for (int side = 0; side < 2; ++side) {
      const auto& here = side == 0 ? s.a : s.b;
      if (here.chart != c.id) continue;
      auto [res, param] = residual(here, e);
      if (c.kind == ChartKind::Annulus && here.curve == CurveKind::ConstV) param = std::fmod(param + kTwoPi, kTwoPi);
      const double lo = std::min(here.from, here.to) - 1e-9, hi = std::max(here.from, here.to) + 1e-9;
      if (param < lo || param > hi || res >= best) continue;
      best = res;
      const auto& there = side == 0 ? s.b : s.a;
      const double q = side == 0 ? s.map(param) : s.inverse(param);
      out = Crossing{there.chart, there.point(q)};
    }
  }
  return out;
}

// True when p is within `radius` of the chart center and the flow is heading into it.
bool approaching_center(const Chart& c, Vec2 p, Vec2 v, double radius) {
  const auto center = c.singular_point();
  if (!center) return false;
  if (c.kind == ChartKind::EllipticDisk) return p.u <= radius && v.u < 0.0;
  const double du = p.u - center->u, dv = p.v - center->v;
  return std::hypot(du, dv) <= radius && du * v.u + dv * v.v < 0.0;
}

}  // namespace

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::SingularPoint: return "singular";
    case Termination::Boundary: return "boundary";
    case Termination::StepLimit: return "step_limit";
  }
  return "?";
}

Trajectory integrate(const FieldAssembly& a, const std::string& chart_id, Vec2 start, Direction direction, double step,
                     int max_steps) {
  if (!(step > 0.0)) throw Error(ErrorCode::DomainError, "step must be positive");
  const Chart* c = &a.chart(chart_id);
  if (!c->contains(start.u, start.v))
    throw Error(ErrorCode::OutOfDomain, "trace start outside chart " + chart_id);
  const double sign = direction == Direction::Forward ? 1.0 : -1.0;
  Trajectory t;
  Vec2 p = start;
  t.points.push_back({c->id, p});
  for (int k = 0; k < max_steps; ++k) {
    const auto s = c->eval(p.u, p.v);
    const Vec2 v{sign * s.X[0], sign * s.X[1]};
    if ((v.u == 0.0 && v.v == 0.0) || approaching_center(*c, p, v, 10.0 * step)) {
      t.termination = Termination::SingularPoint;
      return t;
    }
    const Vec2 q = rk4(*c, p, step, sign);
    if (c->contains(q.u, q.v)) {
      p = q;
      t.points.push_back({c->id, p});
      continue;
    }
    // Leaving the chart: bisect on the step fraction for the exit point.
    double lo = 0.0, hi = 1.0;
    while ((hi - lo) * step > 1e-10) {
      const double mid = 0.5 * (lo + hi);
      const Vec2 m = rk4(*c, p, mid * step, sign);
      (c->contains(m.u, m.v) ? lo : hi) = mid;
    }
    const Vec2 exit = rk4(*c, p, lo * step, sign);
    // lo can be 0 when p already sits on the edge; don't repeat it.
    if (exit.u != p.u || exit.v != p.v) t.points.push_back({c->id, exit});
    const auto next = cross_seam(a, *c, exit);
    if (!next) {
      t.termination = Termination::Boundary;
      return t;
    }
    c = &a.chart(next->chart);
    p = next->p;
    t.points.push_back({c->id, p});
    ++t.crossings;
  }
  t.termination = Termination::StepLimit;
  return t;
}

std::vector<Trajectory> separatrices(const FieldAssembly& a, const std::string& chart_id, double offset, double step,
                                     int max_steps) {
  const auto& c = a.chart(chart_id);
  if (c.kind != ChartKind::SaddleCross) throw Error(ErrorCode::NotASaddle, "chart " + chart_id + " is not a saddle chart");
  std::vector<Trajectory> out;
  const Vec2 seeds[4] = {{offset, 0.0}, {0.0, offset}, {-offset, 0.0}, {0.0, -offset}};
  for (const auto& seed : seeds) {
    if (offset == 0.0) {
      out.push_back({{}, Termination::SingularPoint, 0});
      continue;
    }
    out.push_back(integrate(a, chart_id, seed, Direction::Forward, step, max_steps));
  }
  return out;
}

void write_csv(std::ostream& os, const FieldAssembly& a, const std::vector<Trajectory>& trajectories) {
  os << "chart_id,u,v,f,Xu,Xv,density\n";
  char buf[256];
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    if (i > 0) os << "\n";
    for (const auto& pt : trajectories[i].points) {
      const auto s = a.chart(pt.chart).eval(pt.p.u, pt.p.v);
      std::snprintf(buf, sizeof buf, ",%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", pt.p.u, pt.p.v, s.f, s.X[0], s.X[1], s.rho);
      os << pt.chart << buf;
    }
  }
}

}  // namespace convexform
