// Brute-force cross-checks for the closed-form solver: fixed-step RK4 on the
// x- and z-dynamics, and lattice search over bang-bang switching times.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "minctrl/core_dynamics.hpp"
#include "minctrl/errors.hpp"
#include "minctrl/extremal_solver.hpp"

namespace minctrl {

struct IntegratorConfig {
  double step = 1e-4;
  double event_tol = 1e-10;
  int sample_stride = 1;  // record every k-th step; segment ends are always recorded

  void validate() const {
    if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("integrator step must be finite and > 0");
    if (!(event_tol > 0.0)) throw DomainError("event_tol must be > 0");
    if (sample_stride < 1) throw DomainError("sample_stride must be >= 1");
  }
};

struct XSample {
  double t = 0.0;
  double x1 = 1.0;
  double x2 = 0.0;
  double u = 1.0;
};

struct XTrajectory {
  std::vector<XSample> samples;
  PhasePoint final_state;
};

struct ZSample {
  double t = 0.0;
  ZState z;
  double u = 1.0;
};

struct ZTrajectory {
  std::vector<ZSample> samples;
  ZState final_state;
  double max_casimir_drift = 0.0;  // max |z1 z2 - z3^2/4 - 1| over all steps
};

namespace detail {

inline constexpr double kMinWidth = 1e-6;

template <std::size_t N, class Field>
std::array<double, N> rk4_increment(const std::array<double, N>& y, double h, Field&& f) {
  auto axpy = [](const std::array<double, N>& a, double k, const std::array<double, N>& b) {
    std::array<double, N> r{};
    for (std::size_t i = 0; i < N; ++i) r[i] = a[i] + k * b[i];
    return r;
  };
  const auto k1 = f(y);
  const auto k2 = f(axpy(y, 0.5 * h, k1));
  const auto k3 = f(axpy(y, 0.5 * h, k2));
  const auto k4 = f(axpy(y, h, k3));
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}


inline void require_width(double x1, double t) {
  if (!(x1 >= kMinWidth) || !std::isfinite(x1)) {
    std::ostringstream os;
    os << "RK4 unstable: x1=" << x1 << " < " << kMinWidth << " at t=" << t;
    throw IntegrationError(os.str());
  }
}

// Walks the schedule with steps of at most cfg.step, landing exactly on segment ends.
template <std::size_t N, class Field, class Check, class Record>
std::array<double, N> integrate_schedule(std::array<double, N> y, const ControlSchedule& schedule,
                                         const IntegratorConfig& cfg, Field&& field, Check&& check,
                                         Record&& record) {
  cfg.validate();
  double t = 0.0;
  record(t, y, schedule.u_before());
  std::array<double, N> carry{};
  for (const ControlSegment& seg : schedule.segments()) {
    if (seg.dt == 0.0) continue;
    const long steps = std::max(1L, static_cast<long>(std::ceil(seg.dt / cfg.step - 1e-9)));
    const double h = seg.dt / static_cast<double>(steps);
    auto f = [&](const std::array<double, N>& v) { return field(v, seg.u); };
    const double t0 = t;
    for (long k = 1; k <= steps; ++k) {
      const auto dy = rk4_increment<N>(y, h, f);
      for (std::size_t i = 0; i < N; ++i) {
        const double inc = dy[i] - carry[i];
        const double next = y[i] + inc;
        carry[i] = (next - y[i]) - inc;
        y[i] = next;
      }
      t = t0 + h * static_cast<double>(k);
      check(y, t);
      if (k == steps || k % cfg.sample_stride == 0) record(t, y, seg.u);
    }
  }
  return y;
}

}  // namespace detail

// RK4 on x1' = x2, x2' = -u x1 + 1/x1^3.
inline XTrajectory integrate_x(const PhasePoint& p0, const ControlSchedule& schedule,
                               const IntegratorConfig& cfg = {}) {
  require_domain(p0);
  XTrajectory traj;
  auto field = [](const std::array<double, 2>& y, double u) {
    const double inv = 1.0 / y[0];
    return std::array<double, 2>{y[1], -u * y[0] + inv * inv * inv};
  };
  auto check = [](const std::array<double, 2>& y, double t) { detail::require_width(y[0], t); };
  auto record = [&](double t, const std::array<double, 2>& y, double u) { traj.samples.push_back({t, y[0], y[1], u}); };
  const auto y = detail::integrate_schedule<2>({p0.x1, p0.x2}, schedule, cfg, field, check, record);
  traj.final_state = {y[0], y[1]};
  if (!traj.samples.empty()) traj.samples.back().u = schedule.u_after();
  return traj;
}

// RK4 on z1' = z3, z2' = -u z3, z3' = -2u z1 + 2 z2.
inline ZTrajectory integrate_z(const ZState& z0, const ControlSchedule& schedule, const IntegratorConfig& cfg = {}) {
  if (!(z0.z1 > 0.0) || std::abs(z0.casimir() - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "integrate_z requires z1 > 0 and unit Casimir (got z1=" << z0.z1 << ", casimir=" << z0.casimir() << ")";
    throw DomainError(os.str());
  }
  ZTrajectory traj;
  auto field = [](const std::array<double, 3>& y, double u) {
    return std::array<double, 3>{y[2], -u * y[2], -2.0 * u * y[0] + 2.0 * y[1]};
  };
  auto check = [&](const std::array<double, 3>& y, double t) {
    detail::require_width(y[0] > 0.0 ? std::sqrt(y[0]) : 0.0, t);
    using Wide = long double;
    const Wide casimir = Wide(y[0]) * Wide(y[1]) - Wide(0.25) * Wide(y[2]) * Wide(y[2]);
    const double drift = static_cast<double>(std::abs(casimir - Wide(1)));
    traj.max_casimir_drift = std::max(traj.max_casimir_drift, drift);
  };
  auto record = [&](double t, const std::array<double, 3>& y, double u) {
    traj.samples.push_back({t, {y[0], y[1], y[2]}, u});
  };
  const auto y = detail::integrate_schedule<3>({z0.z1, z0.z2, z0.z3}, schedule, cfg, field, check, record);
  traj.final_state = {y[0], y[1], y[2]};
  if (!traj.samples.empty()) traj.samples.back().u = schedule.u_after();
  return traj;
}

struct GridSearchSpec {
  int n_switchings = 1;
  int per_arc_grid = 400;
  double time_horizon = 20.0;
  // Intermediate-arc seeds; taken from the closed-form solver when unset.
  std::optional<double> seed_tau_x{};
  std::optional<double> seed_tau_y{};
  double window = 0.2;
  int window_grid = 24;
  int final_samples = 256;
  int refine_levels = 40;
  int refine_grid = 5;

  int turns() const noexcept { return (n_switchings - 1) / 2; }

  void validate() const {
    if (n_switchings < 1 || n_switchings % 2 == 0) throw DomainError("n_switchings must be odd and >= 1");
    if (per_arc_grid < 2) throw DomainError("per_arc_grid must be >= 2");
    if (!(time_horizon > 0.0) || !std::isfinite(time_horizon)) throw DomainError("time_horizon must be finite and > 0");
    if (!(window > 0.0 && window < 1.0)) throw DomainError("window must lie in (0, 1)");
    if (window_grid < 2) throw DomainError("window_grid must be >= 2");
    if (final_samples < 4) throw DomainError("final_samples must be >= 4");
    if (refine_levels < 0) throw DomainError("refine_levels must be >= 0");
    if (refine_grid < 3 || refine_grid % 2 == 0) throw DomainError("refine_grid must be odd and >= 3");
    if (seed_tau_x && !(*seed_tau_x > 0.0)) throw DomainError("seed_tau_x must be > 0");
    if (seed_tau_y && !(*seed_tau_y > 0.0)) throw DomainError("seed_tau_y must be > 0");
  }
};

struct GridSearchResult {
  double min_time = 0.0;
  std::vector<double> durations;  // X, (Y, X)*, final Y
  double lattice_spacing = 0.0;   // first-arc spacing of the coarse lattice
  double resolution = 0.0;        // step of the last refinement level
  long evaluations = 0;
};

namespace detail {

// First time in (0, max_dt] at which the arc from p under u meets the curve,
// found by sign change or a refined dip below zero, then bisection.
inline std::optional<double> first_curve_crossing(const PhasePoint& p, double u, double max_dt,
                                                  const TargetCurve& curve, int samples, double tol) {
  auto f = [&](double t) { return curve_residual(propagate_arc(p, u, t), curve); };
  const double f0 = f(0.0);
  if (!(f0 > 0.0) || !(max_dt > 0.0)) return std::nullopt;
  auto bisect = [&](double lo, double hi) {
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (f(mid) > 0.0 ? lo : hi) = mid;
    }
    return hi;
  };
  const double dt = max_dt / samples;
  double f_prev2 = f0;
  double f_prev = f0;
  for (int k = 1; k <= samples; ++k) {
    const double t = dt * k;
    const double fk = f(t);
    if (!(fk > 0.0)) return bisect(t - dt, t);
    if (k >= 2 && f_prev < f_prev2 && f_prev <= fk) {
      double a = t - 2.0 * dt;
      double b = t;
      const double g = 0.5 * (std::sqrt(5.0) - 1.0);
      for (int it = 0; it < 60 && b - a > tol; ++it) {
        const double m1 = b - g * (b - a);
        const double m2 = a + g * (b - a);
        if (f(m1) < f(m2)) b = m2; else a = m1;
      }
      const double t_min = 0.5 * (a + b);
      if (!(f(t_min) > 0.0)) return bisect(t - 2.0 * dt, t_min);
    }
    f_prev2 = f_prev;
    f_prev = fk;
  }
  return std::nullopt;
}

// Odometer increment over [0, sizes[d]) per digit; false after the last combination.
inline bool next_index(std::vector<std::size_t>& idx, const std::vector<std::size_t>& sizes) {
  for (std::size_t d = idx.size(); d-- > 0;) {
    if (++idx[d] < sizes[d]) return true;
    idx[d] = 0;
  }
  return false;
}

struct LatticeContext {
  const TargetCurve& curve;
  const ControlBounds& bounds;
  const GridSearchSpec& spec;
  double event_tol;
  long evaluations = 0;
};

// Reach time for free durations (X, (Y, X)*); the final Y-arc is solved for.
inline std::optional<double> reach_time(LatticeContext& ctx, const std::vector<double>& free, double& final_dt) {
  ++ctx.evaluations;
  const double u1 = ctx.bounds.u1();
  const double u2 = ctx.bounds.u2();
  PhasePoint p{1.0, 0.0};
  double elapsed = 0.0;
  for (std::size_t i = 0; i < free.size(); ++i) {
    if (!(free[i] > 0.0)) return std::nullopt;
    p = propagate_arc(p, i % 2 == 0 ? u1 : u2, free[i]);
    elapsed += free[i];
  }
  const double budget = std::min(std::numbers::pi / std::sqrt(u2), ctx.spec.time_horizon - elapsed);
  const auto hit = first_curve_crossing(p, u2, budget, ctx.curve, ctx.spec.final_samples, ctx.event_tol);
  if (!hit) return std::nullopt;
  final_dt = *hit;
  return elapsed + *hit;
}

}  // namespace detail

// Least reach time over XY...XY schedules with spec.n_switchings switchings:
// coarse lattice, then repeated re-centred lattices of shrinking step.
inline GridSearchResult grid_search_min_time(const TargetCurve& curve, const ControlBounds& bounds,
                                             const GridSearchSpec& spec, const IntegratorConfig& cfg = {}) {
  spec.validate();
  cfg.validate();
  const int m = spec.turns();
  double seed_x = spec.seed_tau_x.value_or(0.0);
  double seed_y = spec.seed_tau_y.value_or(0.0);
  if (m > 0 && (!spec.seed_tau_x || !spec.seed_tau_y)) {
    const SolveResult solved = minimize(curve, bounds, SolverConfig{.n_max = m});
    const ExtremalSolution* seed = nullptr;
    for (const auto& cand : solved.candidates)
      if (cand.family.n == m && (!seed || cand.total_time < seed->total_time)) seed = &cand;
    if (!seed) throw NotReached("no closed-form extremal with " + std::to_string(spec.n_switchings) +
                                " switchings to seed the intermediate arcs");
    if (!spec.seed_tau_x) seed_x = seed->tau_x;
    if (!spec.seed_tau_y) seed_y = seed->tau_y;
  }

  detail::LatticeContext ctx{curve, bounds, spec, cfg.event_tol};
  const double first_max = std::min(spec.time_horizon, std::numbers::pi / std::sqrt(bounds.u1()));
  const double first_step = first_max / spec.per_arc_grid;
  std::vector<double> axis_first(spec.per_arc_grid);
  for (int k = 0; k < spec.per_arc_grid; ++k) axis_first[k] = first_step * (k + 1);
  auto window_axis = [&](double seed) {
    std::vector<double> axis(spec.window_grid);
    for (int j = 0; j < spec.window_grid; ++j)
      axis[j] = seed * (1.0 - spec.window + 2.0 * spec.window * j / (spec.window_grid - 1));
    return axis;
  };
  const std::vector<double> axis_x = window_axis(seed_x);
  const std::vector<double> axis_y = window_axis(seed_y);

  const std::size_t dims = static_cast<std::size_t>(2 * m + 1);
  std::vector<double> free(dims);
  std::vector<double> best_free;
  double best_time = std::numeric_limits<double>::infinity();
  double best_final = 0.0;
  auto consider = [&](const std::vector<double>& d) {
    double final_dt = 0.0;
    const auto t = detail::reach_time(ctx, d, final_dt);
    if (t && *t < best_time) {
      best_time = *t;
      best_final = final_dt;
      best_free = d;
    }
  };

  // Coarse lattice in lexicographic order, so ties keep the first point.
  auto axis_for = [&](std::size_t d) -> const std::vector<double>& {
    if (d == 0) return axis_first;
    return d % 2 == 1 ? axis_y : axis_x;
  };
  std::vector<std::size_t> idx(dims, 0);
  std::vector<std::size_t> sizes(dims);
  for (std::size_t d = 0; d < dims; ++d) sizes[d] = axis_for(d).size();
  do {
    for (std::size_t d = 0; d < dims; ++d) free[d] = axis_for(d)[idx[d]];
    consider(free);
  } while (detail::next_index(idx, sizes));
  if (best_free.empty()) {
    std::ostringstream os;
    os << "no lattice schedule with " << spec.n_switchings << " switchings reaches rE=" << curve.energy_ratio
       << " within time horizon " << spec.time_horizon;
    throw NotReached(os.str());
  }

  std::vector<double> step(dims);
  step[0] = first_step;
  for (std::size_t d = 1; d < dims; ++d) {
    const double seed = d % 2 == 1 ? seed_y : seed_x;
    step[d] = 2.0 * spec.window * seed / (spec.window_grid - 1);
  }
  const int half = spec.refine_grid / 2;
  // Pattern search: re-centre on every improvement, halve the step otherwise.
  int halvings = 0;
  for (int iter = 0; halvings < spec.refine_levels && iter < 50 * spec.refine_levels; ++iter) {
    const std::vector<double> centre = best_free;
    const double before = best_time;
    std::vector<std::size_t> off(dims, 0);
    const std::vector<std::size_t> span(dims, static_cast<std::size_t>(spec.refine_grid));
    do {
      for (std::size_t d = 0; d < dims; ++d)
        free[d] = centre[d] + step[d] * (static_cast<double>(off[d]) - half);
      consider(free);
    } while (detail::next_index(off, span));
    if (!(best_time < before)) {
      for (double& h : step) h *= 0.5;
      ++halvings;
    }
  }

  GridSearchResult result;
  result.min_time = best_time;
  result.durations = best_free;
  result.durations.push_back(best_final);
  result.lattice_spacing = first_step;
  result.resolution = *std::max_element(step.begin(), step.end()) * 2.0;
  result.evaluations = ctx.evaluations;
  return result;
}

struct XTerminalReport {
  long lattice_points = 0;
  long touching = 0;           // lattice points with |curve residual| < threshold
  long violations = 0;         // touching although the last X-arc constant is off the curve level
  double min_abs_residual = std::numeric_limits<double>::infinity();
};

// Samples schedules X(YX)^turns on a lattice and records how close their last
// X-arc comes to the target curve.
inline XTerminalReport x_terminal_exclusion(const TargetCurve& curve, const ControlBounds& bounds, int turns,
                                            int grid, double horizon, double threshold = 1e-6) {
  if (turns < 0) throw DomainError("turns must be >= 0");
  if (grid < 2) throw DomainError("grid must be >= 2");
  if (!(horizon > 0.0)) throw DomainError("horizon must be > 0");
  const std::size_t arcs = static_cast<std::size_t>(2 * turns + 1);
  const double arc_max = horizon / static_cast<double>(arcs);
  XTerminalReport report;
  std::vector<std::size_t> idx(arcs, 0);
  const std::vector<std::size_t> sizes(arcs, static_cast<std::size_t>(grid));
  auto duration = [&](std::size_t k) { return arc_max * static_cast<double>(k + 1) / grid; };
  do {
    PhasePoint p{1.0, 0.0};
    for (std::size_t a = 0; a + 1 < arcs; ++a) p = propagate_arc(p, a % 2 == 0 ? bounds.u1() : bounds.u2(), duration(idx[a]));
    const double level = arc_constant(p, bounds.u1()) - curve.level();
    const PhasePoint end = propagate_arc(p, bounds.u1(), duration(idx[arcs - 1]));
    const double res = std::abs(curve_residual(end, curve));
    ++report.lattice_points;
    report.min_abs_residual = std::min(report.min_abs_residual, res);
    if (res < threshold) {
      ++report.touching;
      if (std::abs(level) >= threshold) ++report.violations;
    }
  } while (detail::next_index(idx, sizes));
  return report;
}

struct VerifyTolerances {
  double closed_form = 1e-9;
  double rk4 = 1e-7;
  double ratio = 1e-9;
  double casimir = 1e-9;
  double energy = 1e-9;
};

struct VerificationCheck {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct VerificationReport {
  std::vector<VerificationCheck> checks;
  std::vector<double> switch_ratio_errors;
  double casimir_drift = 0.0;
  bool passed = false;
};

// Re-propagates the schedule in closed form and with RK4 and compares against
// the solution's claims. Never throws on a failed check.
inline VerificationReport verify_solution(const ExtremalSolution& sol, const TargetCurve& curve,
                                          const ControlBounds& bounds, const IntegratorConfig& cfg = {},
                                          const VerifyTolerances& tol = {}) {
  VerificationReport report;
  auto add = [&](std::string name, double value, double tolerance) {
    const bool ok = std::isfinite(value) && std::abs(value) <= tolerance;
    report.checks.push_back({std::move(name), value, tolerance, ok});
  };

  PhasePoint p{1.0, 0.0};
  const auto segments = sol.schedule.segments();
  for (std::size_t i = 0; i < segments.size(); ++i) {
    p = propagate_arc(p, segments[i].u, segments[i].dt);
    if (i + 1 < segments.size()) {
      const double slope = p.x2 / p.x1;
      report.switch_ratio_errors.push_back(slope * slope - sol.s);
    }
  }
  double ratio_err = 0.0;
  for (double e : report.switch_ratio_errors) ratio_err = std::max(ratio_err, std::abs(e));
  add("switch_ratio", ratio_err, tol.ratio);
  add("schedule_duration", sol.schedule.total_duration() - sol.total_time, 1e-12 * std::max(1.0, sol.total_time));
  add("endpoint_residual_closed_form", curve_residual(p, curve), tol.closed_form);
  add("endpoint_energy", energy_ratio(p, bounds.u1()) - 1.0 / curve.energy_ratio, tol.energy);

  try {
    const XTrajectory xt = integrate_x({1.0, 0.0}, sol.schedule, cfg);
    add("endpoint_residual_rk4", curve_residual(xt.final_state, curve), tol.rk4);
  } catch (const std::exception&) {
    add("endpoint_residual_rk4", std::numeric_limits<double>::infinity(), tol.rk4);
  }
  try {
    const ZTrajectory zt = integrate_z({}, sol.schedule, cfg);
    report.casimir_drift = zt.max_casimir_drift;
  } catch (const std::exception&) {
    report.casimir_drift = std::numeric_limits<double>::infinity();
  }
  add("casimir_drift", report.casimir_drift, tol.casimir);

  report.passed = std::all_of(report.checks.begin(), report.checks.end(), [](const auto& c) { return c.passed; });
  return report;
}

}  // namespace minctrl
