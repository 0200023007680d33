#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "convexform/assembly.hpp"

namespace convexform {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::string_view to_string(ChartKind kind) {
  switch (kind) {
    case ChartKind::EllipticDisk: return "EllipticDisk";
    case ChartKind::SaddleCross: return "SaddleCross";
    case ChartKind::Band: return "Band";
    case ChartKind::Annulus: return "Annulus";
  }
  return "?";
}

std::string_view to_string(ChartSign sign) {
  switch (sign) {
    case ChartSign::Positive: return "positive";
    case ChartSign::Negative: return "negative";
    case ChartSign::Crossing: return "crossing";
  }
  return "?";
}

ChartDomain Chart::domain() const {
  return std::visit(overloaded{
                        [](const EllipticModel& m) { return ChartDomain{0.0, m.radius, 0.0, kTwoPi}; },
                        [](const SaddleModel& m) {
                          const double d = m.geometry.delta;
                          return ChartDomain{-d, d, -d, d};
                        },
                        [](const BandModel& m) { return ChartDomain{0.0, 1.0, -m.epsilon(), m.epsilon()}; },
                        [](const ZeroAnnulusModel& m) { return ChartDomain{0.0, kTwoPi, m.s_lo, m.s_hi}; },
                        [](const SameSignAnnulusModel&) { return ChartDomain{0.0, kTwoPi, -1.0, 1.0}; },
                    },
                    model);
}

bool Chart::contains(double u, double v, double tol) const {
  const auto d = domain();
  if (u < d.u_lo - tol || u > d.u_hi + tol || v < d.v_lo - tol || v > d.v_hi + tol) return false;
  if (const auto* s = std::get_if<SaddleModel>(&model)) return in_cross_domain(s->geometry, u, v, tol);
  return true;
}

FieldSample Chart::eval(double u, double v) const {
  FieldSample s = std::visit([&](const auto& m) { return m.eval(u, v); }, model);
  if (log_scale != 0.0) {
    const double k = std::exp(log_scale);
    s.rho *= k;
    s.drho[0] *= k;
    s.drho[1] *= k;
  }
  return s;
}

std::optional<Vec2> Chart::singular_point() const {
  if (kind == ChartKind::EllipticDisk || kind == ChartKind::SaddleCross) return Vec2{0.0, 0.0};
  return std::nullopt;
}

Vec2 BoundaryPiece::point(double p) const {
  switch (curve) {
    case CurveKind::ConstU: return {fixed, p};
    case CurveKind::ConstV: return {p, fixed};
    case CurveKind::Hyperbola: return {p, fixed / (4.0 * p)};
  }
  return {};
}

const Chart& FieldAssembly::chart(const std::string& id) const {
  if (auto i = index_of(id)) return charts[*i];
  throw Error(ErrorCode::UnknownId, "no chart '" + id + "'");
}

std::optional<std::size_t> FieldAssembly::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < charts.size(); ++i)
    if (charts[i].id == id) return i;
  return std::nullopt;
}

std::size_t FieldAssembly::count(ChartKind kind) const {
  return static_cast<std::size_t>(std::count_if(charts.begin(), charts.end(), [&](const Chart& c) { return c.kind == kind; }));
}

// ------------------------------------------------------------ seam checks

namespace {

std::vector<std::string> expected_pieces(const Chart& c) {
  switch (c.kind) {
    case ChartKind::EllipticDisk: return {"r=R"};
    case ChartKind::SaddleCross: return {"E", "N", "W", "S", "Q1", "Q2", "Q3", "Q4"};
    case ChartKind::Band: return {"t=0", "t=1", "top", "bottom"};
    case ChartKind::Annulus: return {};
  }
  return {};
}

[[noreturn]] void invariant(const std::string& msg) { throw Error(ErrorCode::InvariantViolation, msg); }

}  // namespace

void check_seam_topology(const FieldAssembly& a) {
  std::map<std::pair<std::string, std::string>, int> uses;
  std::map<std::string, double> annulus_cover;  // "chart|end" -> covered theta length
  for (const auto& s : a.seams) {
    for (const auto* p : {&s.a, &s.b}) {
      const auto& c = a.chart(p->chart);
      if (c.kind == ChartKind::Annulus) {
        const auto end = p->label.substr(0, p->label.find('#'));
        annulus_cover[c.id + "|" + end] += std::abs(p->to - p->from);
      } else {
        ++uses[{p->chart, p->label}];
      }
    }
    if (s.a.induced_sign * s.b.induced_sign * (s.scale > 0 ? 1 : -1) >= 0)
      invariant("seam " + s.a.chart + ":" + s.a.label + " ~ " + s.b.chart + ":" + s.b.label + " reverses orientation");
    const double q0 = s.map(s.a.from), q1 = s.map(s.a.to);
    const double tol = 1e-12 * (1.0 + std::abs(s.b.from) + std::abs(s.b.to));
    const bool same = std::abs(q0 - s.b.from) <= tol && std::abs(q1 - s.b.to) <= tol;
    const bool swapped = std::abs(q0 - s.b.to) <= tol && std::abs(q1 - s.b.from) <= tol;
    if (!same && !swapped) invariant("seam " + s.a.chart + ":" + s.a.label + " is not a bijection of segments");
  }
  for (const auto& c : a.charts) {
    for (const auto& label : expected_pieces(c)) {
      const int n = uses[{c.id, label}];
      if (n != 1) invariant("boundary piece " + c.id + ":" + label + " appears in " + std::to_string(n) + " seams");
    }
    if (c.kind == ChartKind::Annulus) {
      for (const char* end : {"s_lo", "s_hi"}) {
        const double cover = annulus_cover[c.id + "|" + end];
        if (std::abs(cover - kTwoPi) > 1e-9) invariant("annulus " + c.id + " end " + end + " not fully glued");
      }
    }
  }
}

std::vector<SeamDefect> seam_defects(const FieldAssembly& a, int samples) {
  std::vector<SeamDefect> out;
  for (std::size_t i = 0; i < a.seams.size(); ++i) {
    const auto& s = a.seams[i];
    const auto& ca = a.chart(s.a.chart);
    const auto& cb = a.chart(s.b.chart);
    SeamDefect d;
    d.seam = i;
    for (int j = 0; j < samples; ++j) {
      const double p = s.a.from + (s.a.to - s.a.from) * j / (samples - 1);
      const auto pa = s.a.point(p);
      const auto pb = s.b.point(s.map(p));
      const auto fa = ca.eval(pa.u, pa.v);
      const auto fb = cb.eval(pb.u, pb.v);
      d.f_gap = std::max(d.f_gap, std::abs(fa.f - fb.f));
      if (s.kind == SeamKind::Flow) {
        const double ta = fa.X[s.a.param_axis()] * s.scale;
        const double tb = fb.X[s.b.param_axis()];
        d.x_gap = std::max(d.x_gap, std::abs(ta - tb) / (1.0 + std::abs(tb)));
      }
      d.ratio_drift = std::max(d.ratio_drift, std::abs(fb.rho / fa.rho - s.density_ratio) / s.density_ratio);
    }
    out.push_back(d);
  }
  return out;
}

// ------------------------------------------------------------ hashing

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string spec_hash(const MorseSpec& spec) { return fnv1a_hex(to_json(spec).dump()); }

// ------------------------------------------------------------ json

namespace {

using nlohmann::json;

std::string_view to_string(CurveKind k) {
  switch (k) {
    case CurveKind::ConstU: return "const_u";
    case CurveKind::ConstV: return "const_v";
    case CurveKind::Hyperbola: return "hyperbola";
  }
  return "?";
}

template <class E>
E parse_enum(const std::string& s, std::initializer_list<E> values) {
  for (E v : values)
    if (to_string(v) == s) return v;
  throw Error(ErrorCode::MalformedInput, "unknown enum value '" + s + "'");
}

Sign parse_sign(const std::string& s) { return parse_enum(s, {Sign::Positive, Sign::Negative}); }

json piece_json(const BoundaryPiece& p) {
  return {{"chart", p.chart}, {"label", p.label}, {"curve", to_string(p.curve)}, {"fixed", p.fixed},
          {"from", p.from},   {"to", p.to},       {"induced_sign", p.induced_sign}};
}

BoundaryPiece piece_from_json(const json& j) {
  BoundaryPiece p;
  p.chart = j.at("chart").get<std::string>();
  p.label = j.at("label").get<std::string>();
  p.curve = parse_enum(j.at("curve").get<std::string>(), {CurveKind::ConstU, CurveKind::ConstV, CurveKind::Hyperbola});
  p.fixed = j.at("fixed").get<double>();
  p.from = j.at("from").get<double>();
  p.to = j.at("to").get<double>();
  p.induced_sign = j.at("induced_sign").get<int>();
  return p;
}

json saddle_params(const SaddleModel& m) {
  const auto& g = m.geometry;
  return {{"level", m.level},         {"sign", to_string(m.sign)},   {"delta", g.delta},
          {"delta1", g.delta1},       {"delta2", g.delta2},          {"delta_prime", g.delta_prime},
          {"surgery", m.surgery},     {"slopes", m.slopes},          {"amplitude", m.amplitude}};
}

SaddleModel saddle_from_params(const json& p) {
  SaddleModel m;
  m.level = p.at("level").get<double>();
  m.sign = parse_sign(p.at("sign").get<std::string>());
  m.geometry = {p.at("delta").get<double>(), p.at("delta1").get<double>(), p.at("delta2").get<double>(),
                p.at("delta_prime").get<double>()};
  m.geometry.check();
  m.surgery = p.at("surgery").get<bool>();
  m.slopes = p.at("slopes").get<CollarSlopes>();
  m.amplitude = p.at("amplitude").get<double>();
  return m;
}

json chart_params(const Chart& c) {
  return std::visit(
      overloaded{
          [](const EllipticModel& m) -> json {
            return {{"level", m.level}, {"sign", to_string(m.sign)}, {"radius", m.radius}};
          },
          [](const SaddleModel& m) -> json { return saddle_params(m); },
          [&](const BandModel&) -> json {
            const auto& m = std::get<BandModel>(c.model);
            return {{"cross", "X:" + c.source}, {"start", to_string(m.start)}, {"end", to_string(m.end)},
                    {"c0", m.c0},               {"c1", m.c1},                  {"collar", m.collar}};
          },
          [](const ZeroAnnulusModel& m) -> json {
            return {{"model", "zero"}, {"lambda", m.lambda}, {"sigma", m.sigma}, {"s_lo", m.s_lo}, {"s_hi", m.s_hi}};
          },
          [](const SameSignAnnulusModel& m) -> json {
            const auto& z = m.zone;
            return {{"model", "rescale"}, {"sign", to_string(m.sign)}, {"f_lo", m.f_lo},   {"f_hi", m.f_hi},
                    {"div_lo", m.div_lo}, {"div_hi", m.div_hi},        {"lambda", m.lambda},
                    {"zone", {z.ramp_lo, z.plateau_lo, z.plateau_hi, z.ramp_hi}}};
          },
      },
      c.model);
}

ChartModel model_from_json(ChartKind kind, const json& p, const FieldAssembly& partial) {
  switch (kind) {
    case ChartKind::EllipticDisk:
      return elliptic_model(p.at("level").get<double>(), parse_sign(p.at("sign").get<std::string>()),
                            p.at("radius").get<double>());
    case ChartKind::SaddleCross: return saddle_from_params(p);
    case ChartKind::Band: {
      const auto& cross = partial.chart(p.at("cross").get<std::string>());
      const auto* s = std::get_if<SaddleModel>(&cross.model);
      if (!s) throw Error(ErrorCode::MalformedInput, "band refers to a non-saddle chart");
      BandModel m;
      m.cross = *s;
      m.start = cross_side_from_string(p.at("start").get<std::string>());
      m.end = cross_side_from_string(p.at("end").get<std::string>());
      m.c0 = p.at("c0").get<double>();
      m.c1 = p.at("c1").get<double>();
      m.collar = p.at("collar").get<double>();
      return m;
    }
    case ChartKind::Annulus: {
      const auto model = p.at("model").get<std::string>();
      if (model == "zero") {
        auto m = zero_annulus_model(p.at("lambda").get<double>(), p.at("sigma").get<double>());
        m.s_lo = p.at("s_lo").get<double>();
        m.s_hi = p.at("s_hi").get<double>();
        return m;
      }
      if (model != "rescale") throw Error(ErrorCode::MalformedInput, "unknown annulus model '" + model + "'");
      SameSignAnnulusModel m;
      m.sign = parse_sign(p.at("sign").get<std::string>());
      m.f_lo = p.at("f_lo").get<double>();
      m.f_hi = p.at("f_hi").get<double>();
      m.div_lo = p.at("div_lo").get<double>();
      m.div_hi = p.at("div_hi").get<double>();
      m.lambda = p.at("lambda").get<double>();
      const auto z = p.at("zone").get<std::array<double, 4>>();
      m.zone = {z[0], z[1], z[2], z[3]};
      return m;
    }
  }
  throw Error(ErrorCode::MalformedInput, "unknown chart kind");
}

}  // namespace

nlohmann::json to_json(const FieldAssembly& a) {
  json charts = json::array();
  for (const auto& c : a.charts)
    charts.push_back({{"id", c.id},
                      {"kind", to_string(c.kind)},
                      {"sign", to_string(c.sign)},
                      {"source", c.source},
                      {"log_scale", c.log_scale},
                      {"params", chart_params(c)}});
  json seams = json::array();
  for (const auto& s : a.seams)
    seams.push_back({{"kind", s.kind == SeamKind::Flow ? "flow" : "level"},
                     {"a", piece_json(s.a)},
                     {"b", piece_json(s.b)},
                     {"scale", s.scale},
                     {"offset", s.offset},
                     {"density_ratio", s.density_ratio}});
  json slopes = {{"safety_factor", a.slopes.safety_factor},
                 {"grid", a.slopes.grid},
                 {"collar_slopes", a.slopes.collar_slopes},
                 {"annulus_lambda", a.slopes.annulus_lambda}};
  return {{"spec", to_json(a.spec)}, {"provenance", a.provenance}, {"charts", charts}, {"seams", seams}, {"slopes", slopes}};
}

FieldAssembly assembly_from_json(const nlohmann::json& j) {
  try {
    FieldAssembly a;
    a.spec = morse_spec_from_json(j.at("spec"));
    a.provenance = j.at("provenance").get<std::string>();
    for (const auto& jc : j.at("charts")) {
      Chart c;
      c.id = jc.at("id").get<std::string>();
      c.kind = parse_enum(jc.at("kind").get<std::string>(),
                          {ChartKind::EllipticDisk, ChartKind::SaddleCross, ChartKind::Band, ChartKind::Annulus});
      c.sign = parse_enum(jc.at("sign").get<std::string>(), {ChartSign::Positive, ChartSign::Negative, ChartSign::Crossing});
      c.source = jc.at("source").get<std::string>();
      c.log_scale = jc.at("log_scale").get<double>();
      c.model = model_from_json(c.kind, jc.at("params"), a);
      a.charts.push_back(std::move(c));
    }
    for (const auto& js : j.at("seams")) {
      SeamRef s;
      s.kind = js.at("kind").get<std::string>() == "flow" ? SeamKind::Flow : SeamKind::Level;
      s.a = piece_from_json(js.at("a"));
      s.b = piece_from_json(js.at("b"));
      s.scale = js.at("scale").get<double>();
      s.offset = js.at("offset").get<double>();
      s.density_ratio = js.at("density_ratio").get<double>();
      a.seams.push_back(std::move(s));
    }
    const auto& js = j.at("slopes");
    a.slopes.safety_factor = js.at("safety_factor").get<double>();
    a.slopes.grid = js.at("grid").get<int>();
    a.slopes.collar_slopes = js.at("collar_slopes").get<std::map<std::string, CollarSlopes>>();
    a.slopes.annulus_lambda = js.at("annulus_lambda").get<std::map<std::string, double>>();
    check_seam_topology(a);
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedInput, std::string("atlas json: ") + e.what());
  }
}

}  // namespace convexform
