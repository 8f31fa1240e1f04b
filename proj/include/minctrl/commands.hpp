// Command-line front end: argument parsing, dispatch and JSON/CSV rendering.
//
// Exit codes: 0 ok, 2 invalid input, 3 no extremal / target not reached,
// 4 verification or invariant failure.
#pragma once

#include <cstdio>
#include <exception>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "minctrl/core_dynamics.hpp"
#include "minctrl/errors.hpp"
#include "minctrl/extremal_solver.hpp"
#include "minctrl/oracle.hpp"
#include "minctrl/thermo.hpp"

namespace minctrl::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kInvalidInput = 2, kNoExtremal = 3, kVerificationFailed = 4 };

struct CommandOutput {
  int exit_code = kOk;
  std::string out;
  std::string err;
};

struct Options {
  std::string command;
  std::optional<double> gamma;
  std::optional<double> re;
  int nmax = SolverConfig{}.n_max;
  int scan_points = SolverConfig{}.scan_points;
  double root_tol = SolverConfig{}.root_tol;
  double residual_tol = SolverConfig{}.residual_tol;
  std::string format = "json";
  std::string out;
  int samples = 201;
  std::optional<double> omega_ratio;
  std::optional<double> tc;
  std::optional<double> th;
  std::optional<double> ed_ratio;
  std::string sweep;
  int grid = 0;
  double step = IntegratorConfig{}.step;
  std::optional<double> horizon;

  SolverConfig solver() const { return {scan_points, root_tol, nmax, residual_tol}; }
};

namespace detail {

inline std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double require(const std::optional<double>& v, const char* flag) {
  if (!v) throw DomainError(std::string("missing required flag ") + flag);
  return *v;
}

inline Json point_json(const PhasePoint& p) { return Json::array({p.x1, p.x2}); }

inline Json schedule_json(const ControlSchedule& schedule) {
  Json arcs = Json::array();
  for (const auto& seg : schedule.segments()) arcs.push_back({{"u", seg.u}, {"dt", seg.dt}});
  return {{"u_before", schedule.u_before()}, {"u_after", schedule.u_after()}, {"arcs", arcs}};
}

inline Json solution_json(const ExtremalSolution& sol) {
  Json switches = Json::array();
  for (const auto& p : sol.switch_points) switches.push_back(point_json(p));
  return {{"label", sol.label()},
          {"n", sol.family.n},
          {"branch", std::string(1, branch_symbol(sol.family.branch))},
          {"switchings", sol.family.switchings()},
          {"root_index", sol.root_index},
          {"s", sol.s},
          {"total_time", sol.total_time},
          {"tau_first", sol.tau_first},
          {"tau_x", sol.tau_x},
          {"tau_y", sol.tau_y},
          {"tau_final", sol.tau_final},
          {"kappa1_sq", sol.kappa1_sq},
          {"kappa_last_sq", sol.kappa_last_sq},
          {"kappa_final_sq", sol.kappa_final_sq},
          {"c_last", sol.c_last},
          {"root_residual", sol.root_residual},
          {"switch_points", switches},
          {"final_point", point_json(sol.final_point)},
          {"schedule", schedule_json(sol.schedule)}};
}

inline Json candidate_row(const ExtremalSolution& sol) {
  return {{"label", sol.label()},
          {"n", sol.family.n},
          {"branch", std::string(1, branch_symbol(sol.family.branch))},
          {"root_index", sol.root_index},
          {"s", sol.s},
          {"total_time", sol.total_time},
          {"root_residual", sol.root_residual}};
}

inline Json energies_json(const CycleEnergies& e) {
  return {{"EA", e.ea}, {"EC", e.ec}, {"ED_min", e.ed_min}, {"ED_sc", e.ed_sc}};
}

inline Json checks_json(const std::vector<VerificationCheck>& checks) {
  Json arr = Json::array();
  for (const auto& c : checks)
    arr.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"passed", c.passed}});
  return arr;
}

inline Json record(const std::string& command, Json input, Json result, Json diagnostics) {
  return {{"command", command}, {"input", std::move(input)}, {"result", std::move(result)},
          {"diagnostics", std::move(diagnostics)}};
}

inline Json solver_input(const Options& o) {
  return {{"gamma", o.gamma ? Json(*o.gamma) : Json()},
          {"rE", o.re ? Json(*o.re) : Json()},
          {"nmax", o.nmax},
          {"scan_points", o.scan_points},
          {"root_tol", o.root_tol},
          {"residual_tol", o.residual_tol}};
}

struct Sweep {
  double first = 0.0;
  double last = 0.0;
  int count = 0;
};

inline Sweep parse_sweep(const std::string& text) {
  Sweep sw;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%d%c", &sw.first, &sw.last, &sw.count, &tail) != 3 || sw.count < 1)
    throw DomainError("--sweep expects A:B:N with N >= 1 (got '" + text + "')");
  return sw;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace detail

inline CommandOutput cmd_solve(const Options& o) {
  const ControlBounds bounds(detail::require(o.gamma, "--gamma"));
  const TargetCurve curve = TargetCurve::checked(detail::require(o.re, "--re"), bounds);
  const SolveResult solved = minimize(curve, bounds, o.solver());
  CommandOutput res;
  if (o.format == "csv") {
    std::ostringstream os;
    os << "label,n,branch,root_index,s,total_time,tau_first,tau_x,tau_y,tau_final,root_residual\n";
    for (const auto& c : solved.candidates) {
      os << c.label() << ',' << c.family.n << ',' << branch_symbol(c.family.branch) << ',' << c.root_index << ','
         << detail::csv_number(c.s) << ',' << detail::csv_number(c.total_time) << ','
         << detail::csv_number(c.tau_first) << ',' << detail::csv_number(c.tau_x) << ','
         << detail::csv_number(c.tau_y) << ',' << detail::csv_number(c.tau_final) << ','
         << detail::csv_number(c.root_residual) << '\n';
    }
    res.out = os.str();
    return res;
  }
  Json table = Json::array();
  for (const auto& c : solved.candidates) table.push_back(detail::candidate_row(c));
  Json result = {{"minimum_time", solved.best.total_time},
                 {"best_label", solved.best.label()},
                 {"candidates", table},
                 {"best", detail::solution_json(solved.best)}};
  Json diag = {{"warnings", solved.warnings},
               {"admissible_rE", {bounds.min_energy_ratio(), bounds.max_energy_ratio()}},
               {"max_ratio", bounds.max_ratio()}};
  res.out = detail::dump(detail::record("solve", detail::solver_input(o), result, diag));
  return res;
}

inline CommandOutput cmd_trajectory(const Options& o) {
  if (o.samples < 2) throw DomainError("--samples must be >= 2");
  const ControlBounds bounds(detail::require(o.gamma, "--gamma"));
  const TargetCurve curve = TargetCurve::checked(detail::require(o.re, "--re"), bounds);
  const SolveResult solved = minimize(curve, bounds, o.solver());
  const ControlSchedule& schedule = solved.best.schedule;
  const double total = schedule.total_duration();
  const PhasePoint start{1.0, 0.0};
  struct Row {
    double t, x1, x2, u, e;
  };
  std::vector<Row> rows;
  for (int k = 0; k < o.samples; ++k) {
    const double t = k == o.samples - 1 ? total : total * k / (o.samples - 1);
    const PhasePoint p = state_at(start, schedule, t);
    const double u = schedule.control_at(t);
    rows.push_back({t, p.x1, p.x2, u, energy_ratio(p, u)});
  }
  CommandOutput res;
  if (o.format == "csv") {
    std::ostringstream os;
    os << "t,x1,x2,u,E_over_E0\n";
    for (const auto& r : rows)
      os << detail::csv_number(r.t) << ',' << detail::csv_number(r.x1) << ',' << detail::csv_number(r.x2) << ','
         << detail::csv_number(r.u) << ',' << detail::csv_number(r.e) << '\n';
    res.out = os.str();
    return res;
  }
  Json data = Json::array();
  for (const auto& r : rows) data.push_back(Json::array({r.t, r.x1, r.x2, r.u, r.e}));
  Json input = detail::solver_input(o);
  input["samples"] = o.samples;
  Json result = {{"label", solved.best.label()},
                 {"total_time", solved.best.total_time},
                 {"columns", {"t", "x1", "x2", "u", "E_over_E0"}},
                 {"rows", data}};
  Json diag = {{"final_curve_residual", curve_residual(state_at(start, schedule, total), curve)},
               {"warnings", solved.warnings}};
  res.out = detail::dump(detail::record("trajectory", input, result, diag));
  return res;
}

inline CommandOutput cmd_refrigerator(const Options& o) {
  OttoSpec spec{detail::require(o.omega_ratio, "--omega-ratio"), detail::require(o.tc, "--tc"),
                detail::require(o.th, "--th")};
  spec.validate();
  const RefrigeratorResult r = refrigerator_min_driving_time(spec, o.solver());
  CommandOutput res;
  if (o.format == "csv") {
    std::ostringstream os;
    os << "key,value\n"
       << "regime," << regime_name(r.regime) << '\n'
       << "gamma," << detail::csv_number(spec.gamma()) << '\n'
       << "rE," << detail::csv_number(r.energy_ratio) << '\n'
       << "EA," << detail::csv_number(r.energies.ea) << '\n'
       << "EC," << detail::csv_number(r.energies.ec) << '\n'
       << "ED_min," << detail::csv_number(r.energies.ed_min) << '\n'
       << "ED_sc," << detail::csv_number(r.energies.ed_sc) << '\n'
       << "min_time," << detail::csv_number(r.min_time) << '\n';
    if (r.solution) os << "label," << r.solution->label() << '\n';
    res.out = os.str();
    return res;
  }
  Json input = {{"omega_ratio", spec.omega_ratio}, {"tc", spec.tc}, {"th", spec.th}, {"nmax", o.nmax},
                {"scan_points", o.scan_points}, {"root_tol", o.root_tol}};
  Json result = {{"regime", regime_name(r.regime)},
                 {"gamma", spec.gamma()},
                 {"rE", r.energy_ratio},
                 {"energies", detail::energies_json(r.energies)},
                 {"min_time", r.min_time},
                 {"solution", r.solution ? detail::solution_json(*r.solution) : Json()}};
  Json diag = {{"warnings", r.warnings}};
  res.out = detail::dump(detail::record("refrigerator", input, result, diag));
  return res;
}

inline CommandOutput cmd_availability(const Options& o) {
  const double gamma = detail::require(o.gamma, "--gamma");
  detail::Sweep sw;
  if (!o.sweep.empty()) {
    sw = detail::parse_sweep(o.sweep);
  } else {
    const double ed = detail::require(o.ed_ratio, "--ed-ratio or --sweep");
    sw = {ed, ed, 1};
  }
  const AvailabilitySweep result = availability_sweep(gamma, sw.first, sw.last, sw.count, o.solver());
  CommandOutput res;
  if (o.format == "csv") {
    std::ostringstream os;
    os << "ed_ratio,rE,work_over_EC,min_time,label\n";
    for (const auto& p : result.points)
      os << detail::csv_number(p.ed_ratio) << ',' << detail::csv_number(p.energy_ratio) << ','
         << detail::csv_number(p.work_over_ec) << ',' << detail::csv_number(p.min_time) << ',' << p.label << '\n';
    res.out = os.str();
    return res;
  }
  Json points = Json::array();
  for (const auto& p : result.points)
    points.push_back({{"ed_ratio", p.ed_ratio},
                      {"rE", p.energy_ratio},
                      {"work_over_EC", p.work_over_ec},
                      {"min_time", p.min_time},
                      {"label", p.label}});
  Json input = {{"gamma", gamma}, {"ed_first", sw.first}, {"ed_last", sw.last}, {"count", sw.count},
                {"nmax", o.nmax}, {"scan_points", o.scan_points}, {"root_tol", o.root_tol}};
  Json diag = {{"monotone_in_rE", result.monotonicity_violations.empty()},
               {"monotonicity_violations", result.monotonicity_violations}};
  res.out = detail::dump(detail::record("availability", input, {{"points", points}}, diag));
  return res;
}

inline CommandOutput cmd_verify(const Options& o) {
  const ControlBounds bounds(detail::require(o.gamma, "--gamma"));
  const TargetCurve curve = TargetCurve::checked(detail::require(o.re, "--re"), bounds);
  if (o.grid != 0 && (o.grid < 1 || o.grid % 2 == 0)) throw DomainError("--grid must be an odd switching count");
  IntegratorConfig icfg;
  icfg.step = o.step;
  icfg.validate();
  Json input = detail::solver_input(o);
  input["grid"] = o.grid;
  input["step"] = o.step;

  CommandOutput res;
  Json result;
  Json diag;
  bool passed = true;
  try {
    const SolveResult solved = minimize(curve, bounds, o.solver());
    VerificationReport report = verify_solution(solved.best, curve, bounds, icfg);
    result["best_label"] = solved.best.label();
    result["minimum_time"] = solved.best.total_time;
    passed = report.passed;
    std::vector<VerificationCheck> checks = report.checks;
    if (o.grid > 0) {
      const ExtremalSolution* same = nullptr;
      for (const auto& c : solved.candidates)
        if (c.family.switchings() == o.grid && (!same || c.total_time < same->total_time)) same = &c;
      GridSearchSpec gs;
      gs.n_switchings = o.grid;
      const double reference = same ? same->total_time : solved.best.total_time;
      gs.time_horizon = o.horizon.value_or(1.25 * reference);
      if (same) {
        gs.seed_tau_x = same->tau_x;
        gs.seed_tau_y = same->tau_y;
      }
      Json grid;
      try {
        const GridSearchResult g = grid_search_min_time(curve, bounds, gs, icfg);
        grid = {{"n_switchings", o.grid},
                {"time_horizon", gs.time_horizon},
                {"min_time", g.min_time},
                {"durations", g.durations},
                {"resolution", g.resolution},
                {"evaluations", g.evaluations}};
        if (same) {
          grid["analytical_time"] = same->total_time;
          const double above = same->total_time - (g.min_time + g.resolution);
          const double below = (same->total_time - 1e-9) - g.min_time;
          checks.push_back({"oracle_upper_bound", std::max(0.0, above), 0.0, above <= 0.0});
          checks.push_back({"oracle_lower_bound", std::max(0.0, below), 0.0, below <= 0.0});
        }
      } catch (const NotReached& e) {
        grid = {{"n_switchings", o.grid}, {"error", e.what()}};
        checks.push_back({"oracle_reached", 1.0, 0.0, false});
      }
      passed = std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
      result["grid"] = grid;
    }
    result["checks"] = detail::checks_json(checks);
    diag["switch_ratio_errors"] = report.switch_ratio_errors;
    diag["casimir_drift"] = report.casimir_drift;
    diag["warnings"] = solved.warnings;
    if (o.format == "csv") {
      std::ostringstream os;
      os << "check,value,tolerance,passed\n";
      for (const auto& c : checks)
        os << c.name << ',' << detail::csv_number(c.value) << ',' << detail::csv_number(c.tolerance) << ','
           << (c.passed ? "true" : "false") << '\n';
      res.out = os.str();
    }
  } catch (const ValidationFailure& e) {
    passed = false;
    result["checks"] = Json::array(
        {{{"name", e.invariant()}, {"value", e.value()}, {"tolerance", e.tolerance()}, {"passed", false}}});
    diag["error"] = e.what();
    if (o.format == "csv")
      res.out = "check,value,tolerance,passed\n" + e.invariant() + ',' + detail::csv_number(e.value()) + ',' +
                detail::csv_number(e.tolerance()) + ",false\n";
  }
  result["passed"] = passed;
  if (o.format != "csv") res.out = detail::dump(detail::record("verify", input, result, diag));
  res.exit_code = passed ? kOk : kVerificationFailed;
  if (!passed) res.err = "verification failed\n";
  return res;
}

inline CommandOutput dispatch(const Options& o) {
  if (o.format != "json" && o.format != "csv") throw DomainError("--format must be json or csv");
  if (o.command == "solve") return cmd_solve(o);
  if (o.command == "trajectory") return cmd_trajectory(o);
  if (o.command == "refrigerator") return cmd_refrigerator(o);
  if (o.command == "availability") return cmd_availability(o);
  if (o.command == "verify") return cmd_verify(o);
  throw DomainError("unknown command '" + o.command + "'");
}

// Parses argv-style arguments (without the program name) and runs the command.
// Config values come from the file named by MINCTRL_CONFIG (key = value lines)
// and are overridden by explicit flags.
// Maps a library error to its exit code; anything else is rethrown.
inline CommandOutput error_output(std::exception_ptr error) {
  auto fail = [](int code, const std::exception& e) {
    return CommandOutput{code, "", std::string("error: ") + e.what() + "\n"};
  };
  try {
    std::rethrow_exception(error);
  } catch (const DomainError& e) {
    return fail(kInvalidInput, e);
  } catch (const NoExtremalFound& e) {
    return fail(kNoExtremal, e);
  } catch (const NotReached& e) {
    return fail(kNoExtremal, e);
  } catch (const InfeasibleRoot& e) {
    return fail(kNoExtremal, e);
  } catch (const ValidationFailure& e) {
    return fail(kVerificationFailed, e);
  } catch (const IntegrationError& e) {
    return fail(kVerificationFailed, e);
  }
}

inline CommandOutput run(const std::vector<std::string>& args) {
  Options o;
  CLI::App app{"Minimum-time frequency control of a quantum harmonic oscillator", "minctrl"};
  app.set_config("--config", "", "key = value file of flag defaults")->envname("MINCTRL_CONFIG");
  app.add_option("--gamma", o.gamma, "sqrt(omega_0 / omega_f), > 1");
  app.add_option("--re", o.re, "target energy ratio E0 / Ef");
  app.add_option("--nmax", o.nmax, "largest number of intermediate turns")->capture_default_str();
  app.add_option("--scan-points", o.scan_points, "uniform samples of the switching ratio")->capture_default_str();
  app.add_option("--root-tol", o.root_tol, "relative bisection tolerance")->capture_default_str();
  app.add_option("--residual-tol", o.residual_tol, "invariant tolerance")->capture_default_str();
  app.add_option("--format", o.format, "json or csv")->capture_default_str();
  app.add_option("--out", o.out, "write output to this file");
  app.add_option("--samples", o.samples, "trajectory samples")->capture_default_str();
  app.add_option("--omega-ratio", o.omega_ratio, "omega_h / omega_c");
  app.add_option("--tc", o.tc, "cold reservoir temperature");
  app.add_option("--th", o.th, "hot reservoir temperature");
  app.add_option("--ed-ratio", o.ed_ratio, "target E_D / E_C");
  app.add_option("--sweep", o.sweep, "E_D / E_C sweep A:B:N");
  app.add_option("--grid", o.grid, "grid-search switching count (odd; 0 = skip)")->capture_default_str();
  app.add_option("--step", o.step, "RK4 step")->capture_default_str();
  app.add_option("--horizon", o.horizon, "grid-search time horizon");
  const std::pair<const char*, const char*> commands[] = {
      {"solve", "candidate extremals and the minimum time for --gamma, --re"},
      {"trajectory", "sampled states along the optimal schedule"},
      {"refrigerator", "minimum driving time of an Otto refrigerator (--omega-ratio, --tc, --th)"},
      {"availability", "minimum time to reach E_D / E_C (--ed-ratio or --sweep)"},
      {"verify", "independent checks of the optimal schedule, optionally against a grid search"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();
  app.require_subcommand(1);

  CommandOutput res;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    res.out = app.help();
    return res;
  } catch (const CLI::ParseError& e) {
    res.exit_code = kInvalidInput;
    res.err = std::string("error: ") + e.what() + "\n";
    return res;
  }
  o.command = app.get_subcommands().front()->get_name();

  try {
    res = dispatch(o);
  } catch (...) {
    res = error_output(std::current_exception());
  }
  if (!o.out.empty() && !res.out.empty()) {
    std::ofstream file(o.out, std::ios::binary);
    if (!file) return {kInvalidInput, "", "error: cannot open --out file '" + o.out + "'\n"};
    file << res.out;
    res.out.clear();
  }
  return res;
}

}  // namespace minctrl::cli
