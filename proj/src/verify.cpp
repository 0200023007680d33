#include "convexform/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>
#include <unordered_map>

namespace convexform {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Running minimum of a sampled quantity with the point where it occurred.
struct Minimum {
  double value = kInf;
  Vec2 at{};
  std::size_t samples = 0;
  void add(double v, Vec2 p) {
    ++samples;
    if (v < value) {
      value = v;
      at = p;
    }
  }
};

CheckRecord record(const std::string& check, const Chart& c, int grid, const Minimum& m, double offset) {
  CheckRecord r;
  r.check = check;
  r.chart = c.id;
  r.grid = grid;
  r.worst_value = m.value;
  r.margin = m.value - offset;
  r.worst_point = m.at;
  r.samples = m.samples;
  r.pass = r.margin > 0.0;
  return r;
}

double fd_divergence(const Chart& c, Vec2 p, double rho, double h) {
  auto flux = [&](double u, double v, int i) {
    const auto s = c.eval(u, v);
    return s.rho * s.X[i];
  };
  const double d1 = (flux(p.u + h, p.v, 0) - flux(p.u - h, p.v, 0)) / (2 * h);
  const double d2 = (flux(p.u, p.v + h, 1) - flux(p.u, p.v - h, 1)) / (2 * h);
  return (d1 + d2) / rho;
}

std::vector<CheckRecord> chart_checks(const Chart& c, int grid, const Tolerances& tol) {
  const auto points = sample_points(c, grid);
  const auto center = c.singular_point();
  const auto* zero = std::get_if<ZeroAnnulusModel>(&c.model);
  Minimum contact, gradient, sign_law, zero_set, fd;
  // Annulus models do not depend on theta, so evaluate once per s.
  const bool by_s = c.kind == ChartKind::Annulus;
  std::unordered_map<double, std::pair<FieldSample, double>> memo;
  auto fd_error = [&](const FieldSample& s, Vec2 p) {
    return std::abs(s.div - fd_divergence(c, p, s.rho, tol.fd_step)) / (1.0 + std::abs(s.div));
  };
  for (const auto& p : points) {
    const FieldSample* cached = nullptr;
    double cached_fd = 0.0;
    if (by_s) {
      auto it = memo.find(p.v);
      if (it == memo.end()) {
        const auto s = c.eval(p.u, p.v);
        it = memo.emplace(p.v, std::pair{s, fd_error(s, p)}).first;
      }
      cached = &it->second.first;
      cached_fd = it->second.second;
    }
    const auto s = cached ? *cached : c.eval(p.u, p.v);
    contact.add(s.contact_density(), p);

    const bool singular =
        center && (c.kind == ChartKind::EllipticDisk ? p.u <= tol.singular_radius
                                                     : std::hypot(p.u - center->u, p.v - center->v) <= tol.singular_radius);
    const double xnorm = std::hypot(s.X[0], s.X[1]);
    if (singular) {
      gradient.add(xnorm == 0.0 ? kInf : -xnorm, p);
    } else {
      const double denom = xnorm * std::hypot(s.df[0], s.df[1]);
      gradient.add(denom > 0.0 ? -s.xf() / denom : 0.0, p);
    }

    if (s.f != 0.0) sign_law.add(s.div / s.f, p);
    else sign_law.add(s.div == 0.0 ? kInf : -std::abs(s.div), p);

    if (zero) {
      if (p.v == 0.0) zero_set.add(std::min(-s.xf() - (1.0 - 1e-12) * zero->lambda, -s.X[1]), p);
      else zero_set.add((s.f != 0.0 && (s.f > 0) == (p.v > 0)) ? kInf : -std::abs(p.v), p);
    } else {
      zero_set.add(std::abs(s.f), p);
    }

    if (c.kind == ChartKind::EllipticDisk && p.u < 2.0 * tol.fd_step) continue;
    fd.add(-(cached ? cached_fd : fd_error(s, p)), p);
  }
  return {record("contact", c, grid, contact, tol.contact_margin),
          record("gradient_like", c, grid, gradient, 0.0),
          record("sign_law", c, grid, sign_law, 0.0),
          record("dividing_set", c, grid, zero_set, 0.0),
          record("finite_difference", c, grid, fd, -tol.fd_relative)};
}

unsigned worker_count(std::size_t jobs) {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CONVEXFORM_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) n = static_cast<unsigned>(v);
  }
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

}  // namespace

double contact_density(const FieldAssembly& a, const std::string& chart_id, Vec2 p) {
  const auto& c = a.chart(chart_id);
  if (!c.contains(p.u, p.v))
    throw Error(ErrorCode::OutOfDomain,
                "point (" + std::to_string(p.u) + ", " + std::to_string(p.v) + ") outside chart " + chart_id);
  return c.eval(p.u, p.v).contact_density();
}

std::vector<Vec2> sample_points(const Chart& c, int grid) {
  const auto d = c.domain();
  std::vector<Vec2> pts;
  auto lerp = [](double a, double b, int i, int n) { return a + (b - a) * i / n; };
  for (int i = 0; i <= grid; ++i)
    for (int j = 0; j <= grid; ++j) pts.push_back({lerp(d.u_lo, d.u_hi, i, grid), lerp(d.v_lo, d.v_hi, j, grid)});

  auto u_line = [&](double u) {
    for (int j = 0; j <= grid; ++j) pts.push_back({u, lerp(d.v_lo, d.v_hi, j, grid)});
  };
  auto v_line = [&](double v) {
    for (int i = 0; i <= grid; ++i) pts.push_back({lerp(d.u_lo, d.u_hi, i, grid), v});
  };
  if (auto center = c.singular_point()) pts.push_back(*center);
  if (const auto* m = std::get_if<SaddleModel>(&c.model)) {
    const auto& G = m->geometry;
    for (double n : {G.delta1, G.delta2, G.delta - G.delta_prime, G.delta}) {
      for (double k : {-1.0, 1.0}) {
        u_line(k * n);
        v_line(k * n);
      }
    }
    // Level arcs 4xy = +-epsilon.
    const double eps = G.epsilon();
    for (int i = 0; i <= grid; ++i) {
      const double x = 0.5 * G.delta1 + (G.delta - 0.5 * G.delta1) * i / grid;
      for (double sx : {-1.0, 1.0})
        for (double se : {-1.0, 1.0}) pts.push_back({sx * x, se * eps / (4.0 * sx * x)});
    }
  } else if (const auto* m = std::get_if<BandModel>(&c.model)) {
    for (double t : {m->collar, 0.5, 1.0 - m->collar}) u_line(t);
  } else if (std::holds_alternative<ZeroAnnulusModel>(c.model)) {
    v_line(0.0);
  } else if (const auto* m = std::get_if<SameSignAnnulusModel>(&c.model)) {
    for (double s : {m->zone.ramp_lo, m->zone.plateau_lo, m->zone.plateau_hi, m->zone.ramp_hi}) v_line(s);
  }
  std::vector<Vec2> out;
  out.reserve(pts.size());
  for (const auto& p : pts)
    if (c.contains(p.u, p.v)) out.push_back(p);
  return out;
}

double VerificationReport::margin(const std::string& check) const { return worst(check).margin; }

const CheckRecord& VerificationReport::worst(const std::string& check) const {
  const CheckRecord* best = nullptr;
  for (const auto& r : records)
    if (r.check == check && (!best || r.margin < best->margin)) best = &r;
  if (!best) throw Error(ErrorCode::UnknownId, "no records for check '" + check + "'");
  return *best;
}

VerificationReport verify(const FieldAssembly& a, int grid, const Tolerances& tol) {
  if (grid < 2) throw Error(ErrorCode::DomainError, "verification grid must be at least 2");
  std::vector<std::vector<CheckRecord>> per_chart(a.charts.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < a.charts.size(); i = next++) per_chart[i] = chart_checks(a.charts[i], grid, tol);
  };
  std::vector<std::thread> pool;
  const unsigned n = worker_count(a.charts.size());
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  VerificationReport report;
  report.tolerances = tol;
  report.grid = grid;
  for (auto& recs : per_chart)
    for (auto& r : recs) report.records.push_back(std::move(r));

  for (const auto& d : seam_defects(a)) {
    const auto& s = a.seams[d.seam];
    CheckRecord r;
    r.check = "seam";
    r.chart = s.a.chart + ":" + s.a.label + "~" + s.b.chart + ":" + s.b.label;
    r.grid = 257;
    r.worst_value = std::max({d.f_gap, d.x_gap, d.ratio_drift});
    r.margin = tol.seam - r.worst_value;
    r.samples = 257;
    r.pass = r.margin >= 0.0;
    report.records.push_back(r);
  }
  report.pass = std::all_of(report.records.begin(), report.records.end(), [](const CheckRecord& r) { return r.pass; });
  return report;
}

nlohmann::json to_json(const VerificationReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.records)
    checks.push_back({{"check", c.check},
                      {"chart", c.chart},
                      {"grid", c.grid},
                      {"margin", c.margin},
                      {"worst_value", c.worst_value},
                      {"worst_point", {c.worst_point.u, c.worst_point.v}},
                      {"samples", c.samples},
                      {"pass", c.pass}});
  const auto& t = r.tolerances;
  return {{"pass", r.pass},
          {"grid", r.grid},
          {"tolerances",
           {{"contact_margin", t.contact_margin},
            {"fd_relative", t.fd_relative},
            {"fd_step", t.fd_step},
            {"seam", t.seam},
            {"singular_radius", t.singular_radius}}},
          {"checks", checks}};
}

}  // namespace convexform
