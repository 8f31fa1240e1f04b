// Acceptance checks: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "minctrl/oracle.hpp"
#include "minctrl/thermo.hpp"

using namespace minctrl;

namespace {

int failures = 0;

void report(const char* name, bool ok, const std::string& detail) {
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v, int digits = 9) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

template <class Fn>
void guarded(const char* name, Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    report(name, false, std::string("exception: ") + e.what());
  }
}

void candidate_table() {
  struct Entry {
    const char* label;
    double time;
  };
  const Entry expected[] = {{"T^+_{1,1}", 8.00794}, {"T^+_{1,2}", 12.53205}, {"T^+_{3,1}", 7.38567},
                            {"T^+_{3,2}", 8.77552}, {"T^+_{5,1}", 9.55663}, {"T^+_{5,2}", 10.49350},
                            {"T^-_{3,1}", 9.76875}, {"T^-_{3,2}", 14.22294}, {"T^-_{5,1}", 9.57303},
                            {"T^-_{5,2}", 10.80736}};
  const auto start = std::chrono::steady_clock::now();
  const ControlBounds b(10.0);
  const SolveResult r = minimize(TargetCurve::checked(90.8059, b), b);
  const double elapsed = seconds_since(start);
  std::ostringstream os;
  bool ok = r.candidates.size() == 10;
  os << r.candidates.size() << " candidates";
  for (const Entry& e : expected) {
    const auto it = std::find_if(r.candidates.begin(), r.candidates.end(),
                                 [&](const ExtremalSolution& c) { return c.label() == e.label; });
    if (it == r.candidates.end()) {
      ok = false;
      os << "; " << e.label << " missing";
      continue;
    }
    const double diff = std::abs(it->total_time - e.time);
    if (diff > 1e-4) {
      ok = false;
      os << "; " << e.label << "=" << fmt(it->total_time) << " vs " << fmt(e.time, 7) << " (|d|=" << fmt(diff, 3) << ")";
    }
  }
  const bool min_ok = r.best.label() == "T^+_{3,1}";
  os << "; min " << r.best.label() << "=" << fmt(r.best.total_time) << "; " << fmt(elapsed, 3) << " s";
  report("candidate_table", ok && min_ok && elapsed < 5.0, os.str());
}

void fixed_endpoint_comparison() {
  const ControlBounds b(10.0);
  const double point = minimize_fixed_endpoint(b, {}, 8.0).best.total_time;
  const double curve = minimize(TargetCurve::checked(90.8059, b), b).best.total_time;
  const bool ok = std::abs(point - 7.38568) <= 1e-4 && curve <= point;
  report("fixed_endpoint_comparison", ok, "point " + fmt(point) + ", curve " + fmt(curve));
}

void small_ratio_case() {
  const ControlBounds b(10.0);
  const double rE = b.min_energy_ratio() + 0.0005;
  const ExtremalSolution best = minimize(TargetCurve::checked(rE, b), b).best;
  const auto [approx_first, approx_final] = small_s_equal_times(best.s, b);
  const bool ok = std::abs(best.s - 0.000125) <= 2e-6 && std::abs(best.total_time - 0.022364) <= 1e-5 &&
                  std::abs(best.tau_first - 0.011183) <= 1e-5 && std::abs(best.tau_final - 0.011181) <= 1e-5 &&
                  std::abs(approx_first - 0.011181) <= 1e-6 && std::abs(approx_first - best.tau_first) <= 2e-6 &&
                  std::abs(approx_final - best.tau_final) <= 2e-6;
  report("small_ratio_case", ok,
         best.label() + " s=" + fmt(best.s) + " T=" + fmt(best.total_time) + " tau_first=" + fmt(best.tau_first) +
             " tau_final=" + fmt(best.tau_final) + " approx=" + fmt(approx_first));
}

void refrigerator_example() {
  const RefrigeratorResult r = refrigerator_min_driving_time({100.0, 0.01, 0.8218});
  const bool ok = r.regime == DrivingRegime::Critical && std::abs(r.energy_ratio - 90.8059) <= 1e-3 &&
                  std::abs(r.min_time - 7.38567) <= 1e-4;
  report("refrigerator_example", ok,
         std::string(regime_name(r.regime)) + " rE=" + fmt(r.energy_ratio) + " time=" + fmt(r.min_time));
}

void oracle_agreement() {
  const auto start = std::chrono::steady_clock::now();
  const ControlBounds b(10.0);
  const TargetCurve near = TargetCurve::checked(2.0003, b);
  const TargetCurve far = TargetCurve::checked(90.8059, b);
  const GridSearchResult one = grid_search_min_time(near, b, {.n_switchings = 1, .time_horizon = 1.0});
  const GridSearchResult three = grid_search_min_time(far, b, {.n_switchings = 3, .time_horizon = 10.0});
  const double elapsed = seconds_since(start);
  const double a_one = minimize(near, b).best.total_time;
  const double a_three = minimize(far, b).best.total_time;
  const bool ok = std::abs(one.min_time - 0.022364) <= 1e-3 && std::abs(three.min_time - 7.386) <= 5e-3 &&
                  a_one <= one.min_time + one.resolution && a_three <= three.min_time + three.resolution &&
                  elapsed < 60.0;
  report("oracle_agreement", ok,
         "n=1 " + fmt(one.min_time) + " (analytic " + fmt(a_one) + "), n=3 " + fmt(three.min_time) + " (analytic " +
             fmt(a_three) + "); " + fmt(elapsed, 3) + " s");
}

void casimir_drift() {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const ControlBounds b(1.5 + 8.5 * unit(rng));
    const int arcs = 2 + static_cast<int>(8 * unit(rng));
    std::vector<double> w(arcs);
    double sum = 0.0;
    for (double& x : w) sum += (x = 0.05 + unit(rng));
    ControlSchedule s(b.u2(), b.u1());
    for (int k = 0; k < arcs; ++k) s.append(k % 2 == 0 ? b.u1() : b.u2(), 20.0 * w[k] / sum);
    worst = std::max(worst, integrate_z({}, s, {.step = 1e-4}).max_casimir_drift);
  }
  report("casimir_drift", worst < 1e-9, "max drift " + fmt(worst, 3) + " over 50 schedules");
}

void solution_grid() {
  double worst_residual = 0.0;
  double worst_ratio = 0.0;
  int solutions = 0;
  for (int i = 0; i < 10; ++i) {
    const ControlBounds b(1.5 + 8.5 * i / 9.0);
    for (int k = 1; k <= 10; ++k) {
      const double rE = b.min_energy_ratio() + (b.max_energy_ratio() - b.min_energy_ratio()) * k / 11.0;
      const TargetCurve curve = TargetCurve::checked(rE, b);
      for (const ExtremalSolution& c : minimize(curve, b).candidates) {
        ++solutions;
        worst_residual = std::max(worst_residual, std::abs(curve_residual(c.final_point, curve)));
        for (const PhasePoint& p : c.switch_points) {
          const double slope = p.x2 / p.x1;
          worst_ratio = std::max(worst_ratio, std::abs(slope * slope - c.s));
        }
      }
    }
  }
  report("solution_grid", worst_residual < 1e-9 && worst_ratio < 1e-9,
         std::to_string(solutions) + " solutions, max residual " + fmt(worst_residual, 3) + ", max ratio error " +
             fmt(worst_ratio, 3));
}

void limiting_case_roots() {
  double worst = 0.0;
  std::ostringstream os;
  const SolverConfig config;
  for (double gamma : {2.0, 5.0, 10.0}) {
    const ControlBounds b(gamma);
    const TargetCurve curve = TargetCurve::checked(gamma * gamma * (1.0 - 1e-6), b);
    double gamma_worst = 0.0;
    for (int n = 0; n <= config.n_max; ++n) {
      for (Branch branch : {Branch::Plus, Branch::Minus}) {
        const ExtremalFamily family{n, branch};
        const std::vector<double> curve_roots = find_roots(family, curve, b, config);
        for (double s0 : find_fixed_endpoint_roots(family, b, config)) {
          double nearest = INFINITY;
          for (double s : curve_roots) nearest = std::min(nearest, std::abs(s - s0));
          gamma_worst = std::max(gamma_worst, nearest);
        }
      }
    }
    worst = std::max(worst, gamma_worst);
    os << "gamma=" << gamma << " max|ds|=" << fmt(gamma_worst, 3) << "; ";
  }
  report("limiting_case_roots", worst < 1e-4, os.str() + "tolerance 1e-4");
}

void rk4_order() {
  const ControlBounds b(10.0);
  const ExtremalSolution sol = minimize(TargetCurve::checked(90.8059, b), b).best;
  const PhasePoint exact = propagate_schedule({1.0, 0.0}, sol.schedule);
  auto err = [&](double h) {
    const PhasePoint p = integrate_x({1.0, 0.0}, sol.schedule, {.step = h}).final_state;
    return std::hypot(p.x1 - exact.x1, p.x2 - exact.x2);
  };
  const double coarse = err(2e-3);
  const double fine = err(1e-3);
  report("rk4_order", coarse / fine >= 8.0,
         "error " + fmt(coarse, 3) + " -> " + fmt(fine, 3) + ", ratio " + fmt(coarse / fine, 4));
}

void energy_ordering() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int violations = 0;
  for (int i = 0; i < 1000; ++i) {
    const double omega_ratio = 1.01 + 500.0 * unit(rng);
    const double tc = std::exp(std::log(1e-3) + unit(rng) * std::log(1e5));
    const double th = tc * (1.0 + (omega_ratio - 1.0) * (0.001 + 0.998 * unit(rng)));
    const CycleEnergies e = cycle_energies({omega_ratio, tc, th});
    if (!(e.ed_min < e.ea && e.ea < e.ec)) ++violations;
  }
  report("energy_ordering", violations == 0, std::to_string(violations) + " violations over 1000 specs");
}

void sudden_quench() {
  const ControlBounds b(10.0);
  const double esc = energy_ratio({1.0, 0.0}, b.u1());
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double rE = 1.0 + (b.min_energy_ratio() - 1.0) * k / 99.0;
    const double w = quench_frequency_for_energy(rE, b);
    worst = std::max(worst, std::abs(energy_ratio({1.0, 0.0}, w * w) - 1.0 / rE));
  }
  report("sudden_quench", std::abs(esc - 0.50005) <= 1e-12 && worst <= 1e-12,
         "E_sc/E0=" + fmt(esc, 12) + ", max round-trip error " + fmt(worst, 3));
}

}  // namespace

int main() {
  guarded("candidate_table", candidate_table);
  guarded("fixed_endpoint_comparison", fixed_endpoint_comparison);
  guarded("small_ratio_case", small_ratio_case);
  guarded("refrigerator_example", refrigerator_example);
  guarded("oracle_agreement", oracle_agreement);
  guarded("casimir_drift", casimir_drift);
  guarded("solution_grid", solution_grid);
  guarded("limiting_case_roots", limiting_case_roots);
  guarded("rk4_order", rk4_order);
  guarded("energy_ordering", energy_ordering);
  guarded("sudden_quench", sudden_quench);
  std::printf("%d failed\n", failures);
  return failures == 0 ? 0 : 1;
}
