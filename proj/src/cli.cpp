#include "convexform/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "convexform/foliation.hpp"
#include "convexform/gauss_degree.hpp"
#include "convexform/verify.hpp"

namespace convexform {

namespace {

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MalformedInput, "cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedInput, path + ": " + e.what());
  }
}

// Writes to `path`, or to `out` when no path was given.
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::MalformedInput, "cannot write '" + path + "'");
  f << text;
}

// A spec file holds either a Morse spec or a dividing set.
MorseSpec load_spec(const std::string& path) {
  const auto j = read_json(path);
  if (is_dividing_set_json(j)) return spec_from_dividing_set(dividing_set_from_json(j));
  return morse_spec_from_json(j);
}

Vec2 parse_point(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw Error(ErrorCode::MalformedInput, "--at expects u,v");
  try {
    std::size_t n1 = 0, n2 = 0;
    const double u = std::stod(s.substr(0, comma), &n1);
    const double v = std::stod(s.substr(comma + 1), &n2);
    if (n1 != comma || n2 != s.size() - comma - 1) throw std::invalid_argument(s);
    return {u, v};
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::MalformedInput, "--at expects u,v, got '" + s + "'");
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Build and certify vector fields, area forms and contact forms from Morse data"};
  app.require_subcommand(1);

  std::string input, output;
  int grid = 128;
  double step = 1e-3;
  int max_steps = 100000;
  std::string chart, at;
  bool backward = false;
  AssemblyParams params;
  double forced_slope = 0.0;
  bool no_surgery_check = false;
  double contact_margin = 0.0;

  auto* validate = app.add_subcommand("validate", "Check a Morse or dividing-set spec");
  validate->add_option("spec", input, "spec JSON")->required();

  auto* build = app.add_subcommand("build", "Assemble the chart atlas");
  build->add_option("spec", input, "spec JSON")->required();
  build->add_option("-o,--output", output, "atlas JSON");
  build->add_option("--safety", params.safety_factor, "slope safety factor")->check(CLI::Range(1.0, 1e6));
  build->add_option("--slope-grid", params.slope_grid, "slope sampling grid")->check(CLI::Range(8, 100000));
  auto* force = build->add_option("--force-slope", forced_slope, "use this collar slope everywhere");
  build->add_flag("--no-surgery-check", no_surgery_check, "accept slopes that break the sign law");
  build->add_option("--zero-lambda", params.zero_lambda, "minimum -X(f) on dividing circles")->check(CLI::PositiveNumber);
  build->add_option("--zero-sigma", params.zero_sigma, "width of the crossing-annulus density")->check(CLI::PositiveNumber);

  auto* verify_cmd = app.add_subcommand("verify", "Certify an atlas");
  verify_cmd->add_option("atlas", input, "atlas JSON")->required();
  verify_cmd->add_option("--grid", grid, "samples per axis")->check(CLI::Range(8, 100000));
  verify_cmd->add_option("--contact-margin", contact_margin, "required contact density");
  verify_cmd->add_option("-o,--output", output, "report JSON");

  auto* degree = app.add_subcommand("degree", "Gauss-map degree of a dividing set");
  degree->add_option("dspec", input, "dividing-set JSON")->required();
  degree->add_option("-o,--output", output, "degree JSON");

  auto* sample = app.add_subcommand("sample", "Sample one chart on a grid");
  sample->add_option("atlas", input, "atlas JSON")->required();
  sample->add_option("--chart", chart, "chart id")->required();
  sample->add_option("--grid", grid, "samples per axis")->check(CLI::Range(8, 100000));
  sample->add_option("-o,--output", output, "CSV");

  auto* trace = app.add_subcommand("trace", "Integrate a leaf of the characteristic foliation");
  trace->add_option("atlas", input, "atlas JSON")->required();
  trace->add_option("--chart", chart, "chart id")->required();
  trace->add_option("--at", at, "start point u,v")->required();
  trace->add_flag("--backward", backward, "follow -X");
  trace->add_option("--step", step, "RK4 step")->check(CLI::PositiveNumber);
  trace->add_option("--max-steps", max_steps, "step limit")->check(CLI::PositiveNumber);
  trace->add_option("-o,--output", output, "CSV");

  std::uint64_t seed = 0;
  auto* random = app.add_subcommand("random", "Write a seeded random dividing set");
  random->add_option("--seed", seed, "RNG seed")->required();
  random->add_option("-o,--output", output, "dividing-set JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*validate) {
      const auto j = read_json(input);
      if (is_dividing_set_json(j)) {
        const auto d = dividing_set_from_json(j);
        validate_dividing_set(d);
        const auto spec = spec_from_dividing_set(d);
        out << "ok genus " << require_valid(spec) << " (dividing set, " << spec.critical_points.size()
            << " critical points)\n";
        return kExitOk;
      }
      const auto r = validate_spec(morse_spec_from_json(j));
      if (!r.ok) {
        for (const auto& v : r.violations) err << to_string(v.code) << ": " << v.message << "\n";
        return kExitInput;
      }
      out << "ok genus " << r.genus << "\n";
      return kExitOk;
    }
    if (*build) {
      if (*force) params.slope_override = forced_slope;
      params.check_surgery = !no_surgery_check;
      const auto a = build_assembly(load_spec(input), params);
      emit(output, to_json(a).dump(1) + "\n", out);
      err << "charts " << a.charts.size() << " seams " << a.seams.size() << " provenance " << a.provenance << "\n";
      return kExitOk;
    }
    if (*verify_cmd) {
      const auto a = assembly_from_json(read_json(input));
      Tolerances tol;
      tol.contact_margin = contact_margin;
      const auto r = verify(a, grid, tol);
      emit(output, to_json(r).dump(1) + "\n", out);
      for (const char* check : {"contact", "gradient_like", "sign_law", "dividing_set", "finite_difference", "seam"}) {
        const auto& w = r.worst(check);
        err << check << " " << (w.pass ? "pass" : "FAIL") << " margin " << fmt(w.margin) << " worst " << fmt(w.worst_value)
            << " at " << w.chart << " (" << fmt(w.worst_point.u) << ", " << fmt(w.worst_point.v) << ")\n";
      }
      err << "contact margin " << fmt(r.worst("contact").worst_value) << "\n" << (r.pass ? "PASS" : "FAIL") << "\n";
      return r.pass ? kExitOk : kExitFail;
    }
    if (*degree) {
      const auto r = degree_report(dividing_set_from_json(read_json(input)));
      emit(output, to_json(r).dump(1) + "\n", out);
      err << "degree " << r.degree_formula << " euler_class " << r.euler_class << "\n";
      return kExitOk;
    }
    if (*random) {
      emit(output, to_json(random_dividing_set(seed)).dump(2) + "\n", out);
      return kExitOk;
    }
    if (*sample) {
      const auto a = assembly_from_json(read_json(input));
      const auto& c = a.chart(chart);
      std::ostringstream csv;
      csv << "chart_id,u,v,f,Xu,Xv,density,div,contact\n";
      for (const auto& p : sample_points(c, grid)) {
        const auto s = c.eval(p.u, p.v);
        csv << c.id << ',' << fmt(p.u) << ',' << fmt(p.v) << ',' << fmt(s.f) << ',' << fmt(s.X[0]) << ',' << fmt(s.X[1])
            << ',' << fmt(s.rho) << ',' << fmt(s.div) << ',' << fmt(s.contact_density()) << '\n';
      }
      emit(output, csv.str(), out);
      return kExitOk;
    }
    if (*trace) {
      const auto a = assembly_from_json(read_json(input));
      const auto t = integrate(a, chart, parse_point(at), backward ? Direction::Backward : Direction::Forward, step, max_steps);
      std::ostringstream csv;
      write_csv(csv, a, {t});
      emit(output, csv.str(), out);
      err << "points " << t.points.size() << " crossings " << t.crossings << " termination " << to_string(t.termination)
          << "\n";
      return kExitOk;
    }
  } catch (const Error& e) {
    err << e.what() << "\n";
    return e.code() == ErrorCode::InvariantViolation ? kExitInternal : kExitInput;
  } catch (const std::exception& e) {
    err << "InvariantViolation: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace convexform
