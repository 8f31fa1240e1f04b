// Closed-form bang-bang extremals XYX...XY reaching the target energy curve.
//
// Every switching point of an extremal shares the same squared slope
// s = x2^2 / x1^2, with signs alternating +, -, +, ... and the last one in
// x2 > 0. Given s, all arc durations follow in closed form; s itself is a root
// of a single transcendental equation per family (n turns, +/- branch of the
// first switch). The solver scans that equation over 0 < s <= (1 - u1)^2 / 4.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "minctrl/core_dynamics.hpp"
#include "minctrl/errors.hpp"

namespace minctrl {

enum class Branch { Plus, Minus };

inline constexpr double branch_sign(Branch b) noexcept { return b == Branch::Plus ? 1.0 : -1.0; }
inline constexpr char branch_symbol(Branch b) noexcept { return b == Branch::Plus ? '+' : '-'; }

// n intermediate turns (2n + 1 switchings); the branch picks the far (+) or near (-)
// intersection of the first X-arc with the switching line.
struct ExtremalFamily {
  int n = 0;
  Branch branch = Branch::Plus;

  int switchings() const noexcept { return 2 * n + 1; }

  friend bool operator==(const ExtremalFamily&, const ExtremalFamily&) = default;
};

// Label in the T^{+-}_{(2n+1),k} notation.
inline std::string candidate_label(const ExtremalFamily& family, int root_index) {
  std::ostringstream os;
  os << "T^" << branch_symbol(family.branch) << "_{" << family.switchings() << "," << root_index << "}";
  return os.str();
}

struct SolverConfig {
  int scan_points = 20000;
  double root_tol = 1e-14;
  int n_max = 6;
  double residual_tol = 1e-9;

  void validate() const {
    if (scan_points < 100) throw DomainError("scan_points must be >= 100");
    if (!(root_tol > 0.0)) throw DomainError("root_tol must be > 0");
    if (!(residual_tol > 0.0)) throw DomainError("residual_tol must be > 0");
    if (n_max < 0) throw DomainError("n_max must be >= 0");
  }
};

struct ExtremalSolution {
  ExtremalFamily family;
  int root_index = 1;
  double s = 0.0;
  double tau_first = 0.0;
  double tau_x = 0.0;
  double tau_y = 0.0;
  double tau_final = 0.0;
  double total_time = 0.0;
  double kappa1_sq = 0.0;
  double kappa_last_sq = 0.0;
  double kappa_final_sq = 0.0;
  double c_last = 0.0;
  double root_residual = 0.0;
  std::vector<PhasePoint> switch_points;
  PhasePoint final_point;
  ControlSchedule schedule;

  std::string label() const { return candidate_label(family, root_index); }
};

namespace detail {

inline void require_ratio(double s, const ControlBounds& bounds) {
  if (!(s > 0.0) || !(s <= bounds.max_ratio())) {
    std::ostringstream os;
    os.precision(17);
    os << "switching ratio s=" << s << " outside (0, " << bounds.max_ratio() << "]";
    throw DomainError(os.str());
  }
}

inline double clamp_unit(double v) noexcept { return std::clamp(v, -1.0, 1.0); }

// sqrt of a discriminant that may be negative by roundoff at the edge of its range.
inline std::optional<double> edge_sqrt(double d, double scale) {
  if (d >= 0.0) return std::sqrt(d);
  if (d > -1e-14 * scale) return 0.0;
  return std::nullopt;
}

}  // namespace detail

// Intermediate X-arc duration between switching lines.
inline double tau_x(double s, const ControlBounds& bounds) {
  detail::require_ratio(s, bounds);
  const double u1 = bounds.u1();
  return std::atan2(2.0 * std::sqrt(s * u1), s - u1) / (2.0 * std::sqrt(u1));
}

// Intermediate Y-arc duration between switching lines.
inline double tau_y(double s, const ControlBounds& bounds) {
  detail::require_ratio(s, bounds);
  const double u2 = bounds.u2();
  return (2.0 * std::numbers::pi - std::atan2(2.0 * std::sqrt(s * u2), s - u2)) / (2.0 * std::sqrt(u2));
}

// (cos, sin) of 2 sqrt(u2) tau for the final Y-arc, from the transversality condition.
struct FinalArcAngle {
  double cos = 1.0;
  double sin = 0.0;
};

inline FinalArcAngle final_arc_angle(double s, const ControlBounds& bounds) {
  const double u1 = bounds.u1();
  const double u2 = bounds.u2();
  if (!(s > 0.0)) throw DomainError("final arc requires s > 0");
  const double disc = (u2 - u1) * (u2 - u1) - 4.0 * s * u1;
  if (disc < 0.0) {
    std::ostringstream os;
    os << "final arc discriminant (u2-u1)^2 - 4 s u1 < 0 at s=" << s;
    throw DomainError(os.str());
  }
  const double root = std::sqrt(disc);
  const double denom = (s + u2) * (u2 - u1);
  return {(-s * (u1 + u2) + u2 * root) / denom, std::sqrt(s * u2) * (u1 + u2 + root) / denom};
}

// Duration of the last Y-arc from the final switch to the target curve.
inline double tau_final(double s, const ControlBounds& bounds) {
  const FinalArcAngle angle = final_arc_angle(s, bounds);
  if (angle.sin < 0.0) throw ValidationFailure("final_arc_sine", angle.sin, 0.0);
  double theta = std::atan2(angle.sin, angle.cos);
  if (theta < 0.0) theta += 2.0 * std::numbers::pi;
  const double principal = std::acos(detail::clamp_unit(angle.cos));
  const double quadrant_tol = 1e-9 + 2.0 * std::sqrt(std::numeric_limits<double>::epsilon());
  if (std::abs(theta - principal) > quadrant_tol)
    throw ValidationFailure("final_arc_quadrant", theta - principal, quadrant_tol);
  return theta / (2.0 * std::sqrt(bounds.u2()));
}

// Duration of the first X-arc from (1, 0) to the first switch.
inline double tau_first(double s, Branch branch, const ControlBounds& bounds) {
  const double u1 = bounds.u1();
  const double c1 = bounds.c1();
  if (!(s > 0.0)) throw DomainError("first arc requires s > 0");
  const auto root = detail::edge_sqrt(c1 * c1 - 4.0 * (s + u1), c1 * c1);
  if (!root) {
    std::ostringstream os;
    os << "first arc discriminant c1^2 - 4(s+u1) < 0 at s=" << s;
    throw DomainError(os.str());
  }
  const double sigma = branch_sign(branch);
  const double cos_part = s * c1 - sigma * u1 * *root;
  const double sin_part = std::sqrt(s * u1) * (c1 + sigma * *root);
  return std::atan2(sin_part, cos_part) / (2.0 * std::sqrt(u1));
}

struct KappaChain {
  double first_sq = 0.0;  // x1^2 at the first switch
  double last_sq = 0.0;   // x1^2 at the last switch
};

inline KappaChain kappa_chain(double s, const ExtremalFamily& family, const ControlBounds& bounds) {
  const double u1 = bounds.u1();
  const double u2 = bounds.u2();
  const double c1 = bounds.c1();
  if (!(s > 0.0)) throw DomainError("kappa chain requires s > 0");
  const auto root = detail::edge_sqrt(c1 * c1 - 4.0 * (s + u1), c1 * c1);
  if (!root) {
    std::ostringstream os;
    os << "kappa chain discriminant c1^2 - 4(s+u1) < 0 at s=" << s;
    throw DomainError(os.str());
  }
  const double first = (c1 + branch_sign(family.branch) * *root) / (2.0 * (s + u1));
  const double growth = std::pow((s + u2) / (s + u1), family.n);
  return {first, growth * first};
}

// Arc constant of the final Y-arc through the last switching point.
inline double c_last(double s, const ExtremalFamily& family, const ControlBounds& bounds) {
  const double k2 = kappa_chain(s, family, bounds).last_sq;
  return (s + bounds.u2()) * k2 + 1.0 / k2;
}

// x1^2 of the final point: intersection of the final Y-arc's level set with the curve.
inline double kappa_final_sq(double s, const ExtremalFamily& family, const TargetCurve& curve,
                             const ControlBounds& bounds) {
  const double c = c_last(s, family, bounds);
  const double rE = curve.energy_ratio;
  const double num = c * rE - 2.0;
  if (!(num > 0.0)) {
    std::ostringstream os;
    os << "final arc cannot reach the curve: c*rE - 2 = " << num << " at s=" << s;
    throw InfeasibleRoot(os.str());
  }
  return num / (rE * (bounds.u2() - bounds.u1()));
}

namespace detail {

// Normalized position on a Y-arc with constant c: (2 u2 x1^2 - c) / sqrt(c^2 - 4 u2).
inline double arc_coordinate(double x1_sq, double c, double u2) {
  return (2.0 * u2 * x1_sq - c) / std::sqrt(c * c - 4.0 * u2);
}

}  // namespace detail

// LHS - RHS of the transcendental equation for s; nullopt where the family has no
// real construction at this s.
inline std::optional<double> transcendental_residual(double s, const ExtremalFamily& family,
                                                     const TargetCurve& curve,
                                                     const ControlBounds& bounds) {
  detail::require_ratio(s, bounds);
  const double u1 = bounds.u1();
  const double u2 = bounds.u2();
  const double c1 = bounds.c1();
  const auto root1 = detail::edge_sqrt(c1 * c1 - 4.0 * (s + u1), c1 * c1);
  if (!root1) return std::nullopt;
  const double first = (c1 + branch_sign(family.branch) * *root1) / (2.0 * (s + u1));
  const double last = std::pow((s + u2) / (s + u1), family.n) * first;
  if (!(last > 0.0)) return std::nullopt;
  const double c = (s + u2) * last + 1.0 / last;
  if (!(c * c - 4.0 * u2 > 0.0)) return std::nullopt;
  const double rE = curve.energy_ratio;
  const double final_num = c * rE - 2.0;
  if (!(final_num > 0.0)) return std::nullopt;
  const double final_sq = final_num / (rE * (u2 - u1));
  if ((u2 - u1) * (u2 - u1) - 4.0 * s * u1 < 0.0) return std::nullopt;

  // y_final is deliberately not clamped: its excursion past 1 is what carries the
  // sign change near the Y-arc turning point.
  const double y_last = detail::clamp_unit(detail::arc_coordinate(last, c, u2));
  const double y_final = detail::arc_coordinate(final_sq, c, u2);
  const FinalArcAngle angle = final_arc_angle(s, bounds);
  return y_final - (y_last * angle.cos + std::sqrt(1.0 - y_last * y_last) * angle.sin);
}

// Fixed-endpoint equation for reaching (endpoint, 0) on the x1-axis; with
// endpoint == gamma it is the limit rE -> gamma^2 of the curve equation.
inline std::optional<double> limiting_fixed_endpoint_residual(double s, const ExtremalFamily& family,
                                                              const ControlBounds& bounds,
                                                              std::optional<double> endpoint = {}) {
  detail::require_ratio(s, bounds);
  const double target = endpoint.value_or(bounds.gamma());
  if (!(target > 1.0)) throw DomainError("fixed endpoint must satisfy x1 > 1");
  const double u1 = bounds.u1();
  const double u2 = bounds.u2();
  const double c1 = bounds.c1();
  const double c = u2 * target * target + 1.0 / (target * target);
  const auto root1 = detail::edge_sqrt(c1 * c1 - 4.0 * (s + u1), c1 * c1);
  const double d2 = c * c - 4.0 * (s + u2);
  if (!root1 || d2 < 0.0) return std::nullopt;
  const double lhs = (c + std::sqrt(d2)) / (c1 + branch_sign(family.branch) * *root1);
  return lhs - std::pow((s + u2) / (s + u1), family.n + 1);
}

// Total time of the fixed-endpoint extremal at ratio s.
inline double fixed_endpoint_time(double s, const ExtremalFamily& family, const ControlBounds& bounds,
                                  std::optional<double> endpoint = {}) {
  const double target = endpoint.value_or(bounds.gamma());
  const double u2 = bounds.u2();
  const double c = u2 * target * target + 1.0 / (target * target);
  const double last = kappa_chain(s, family, bounds).last_sq;
  const double y_last = detail::clamp_unit(detail::arc_coordinate(last, c, u2));
  const double tail = std::acos(y_last) / (2.0 * std::sqrt(u2));
  return tau_first(s, family.branch, bounds) + family.n * (tau_x(s, bounds) + tau_y(s, bounds)) + tail;
}

// Bracketing of sign changes of f on (0, hi], then bisection. The uniform grid
// on (hi/points, hi] is preceded by geometric samples hi/points * 2^-k inside the
// first cell. f returns nullopt where it is undefined; undefined samples break brackets.
template <class Residual>
std::vector<double> bracket_roots(Residual&& f, double hi, int points, double rel_tol,
                                  double dedupe = 1e-10) {
  std::vector<double> roots;
  std::optional<double> prev_s;
  std::optional<double> prev_r;
  auto push = [&](double root) {
    if (roots.empty() || std::abs(root - roots.back()) > dedupe) roots.push_back(root);
  };
  constexpr int kFirstCellSamples = 40;
  const double cell = hi / static_cast<double>(points);
  for (int k = 1 - kFirstCellSamples; k <= points; ++k) {
    const double s = k <= 0          ? std::ldexp(cell, k - 1)
                     : k == points ? hi
                                   : std::min(hi, hi * static_cast<double>(k) / static_cast<double>(points));
    const std::optional<double> r = f(s);
    if (r && *r == 0.0) {
      push(s);
    } else if (r && prev_r && *prev_r != 0.0 && ((*prev_r < 0.0) != (*r < 0.0))) {
      double lo = *prev_s;
      double up = s;
      double f_lo = *prev_r;
      double f_up = *r;
      while (up - lo > rel_tol * std::max(std::abs(lo), std::abs(up))) {
        const double mid = 0.5 * (lo + up);
        if (mid <= lo || mid >= up) break;
        const std::optional<double> fm = f(mid);
        if (!fm) break;
        if (*fm == 0.0) {
          lo = up = mid;
          f_lo = f_up = 0.0;
          break;
        }
        if ((*fm < 0.0) == (f_lo < 0.0)) {
          lo = mid;
          f_lo = *fm;
        } else {
          up = mid;
          f_up = *fm;
        }
      }
      push(std::abs(f_lo) <= std::abs(f_up) ? lo : up);
    }
    prev_s = r ? std::optional<double>(s) : std::nullopt;
    prev_r = r;
  }
  return roots;
}

// Ascending roots s of the family's transcendental equation that pass the
// geometric filters (real final point on the curve).
inline std::vector<double> find_roots(const ExtremalFamily& family, const TargetCurve& curve,
                                      const ControlBounds& bounds, const SolverConfig& config = {}) {
  config.validate();
  auto residual = [&](double s) { return transcendental_residual(s, family, curve, bounds); };
  std::vector<double> raw = bracket_roots(residual, bounds.max_ratio(), config.scan_points, config.root_tol);
  std::vector<double> kept;
  for (double s : raw) {
    double final_sq = 0.0;
    try {
      final_sq = kappa_final_sq(s, family, curve, bounds);
    } catch (const InfeasibleRoot&) {
      continue;
    }
    if (!(final_sq > 0.0)) continue;
    const double mu_sq = curve.level() - bounds.u1() * final_sq - 1.0 / final_sq;
    if (mu_sq < -config.residual_tol) continue;
    kept.push_back(s);
  }
  return kept;
}

namespace detail {

template <class Real>
struct ArcTimes {
  Real first, x, y, last;
};

// All arc durations at ratio s in the requested precision; inputs already validated.
template <class Real>
ArcTimes<Real> arc_times(Real s, Real u1, Branch branch) {
  using std::atan2, std::sqrt;
  const Real u2 = 1;
  const Real c1 = 1 + u1;
  const Real pi = std::numbers::pi_v<Real>;
  const Real d1 = c1 * c1 - 4 * (s + u1);
  const Real root1 = d1 > 0 ? sqrt(d1) : Real(0);
  const Real sigma = branch == Branch::Plus ? Real(1) : Real(-1);
  ArcTimes<Real> t{};
  t.first = atan2(sqrt(s * u1) * (c1 + sigma * root1), s * c1 - sigma * u1 * root1) / (2 * sqrt(u1));
  t.x = atan2(2 * sqrt(s * u1), s - u1) / (2 * sqrt(u1));
  t.y = (2 * pi - atan2(2 * sqrt(s * u2), s - u2)) / (2 * sqrt(u2));
  const Real d2 = (u2 - u1) * (u2 - u1) - 4 * s * u1;
  const Real root2 = d2 > 0 ? sqrt(d2) : Real(0);
  t.last = atan2(sqrt(s * u2) * (u1 + u2 + root2), -s * (u1 + u2) + u2 * root2) / (2 * sqrt(u2));
  return t;
}

}  // namespace detail

// Closed-form assembly of the extremal at ratio s, without checking it.
inline ExtremalSolution synthesize(double s, const ExtremalFamily& family, const TargetCurve& curve,
                                   const ControlBounds& bounds, int root_index = 1) {
  detail::require_ratio(s, bounds);
  ExtremalSolution sol;
  sol.family = family;
  sol.root_index = root_index;
  sol.s = s;
  sol.tau_first = tau_first(s, family.branch, bounds);
  sol.tau_x = tau_x(s, bounds);
  sol.tau_y = tau_y(s, bounds);
  sol.tau_final = tau_final(s, bounds);
  sol.total_time = sol.tau_first + family.n * (sol.tau_x + sol.tau_y) + sol.tau_final;
  const KappaChain chain = kappa_chain(s, family, bounds);
  sol.kappa1_sq = chain.first_sq;
  sol.kappa_last_sq = chain.last_sq;
  sol.c_last = c_last(s, family, bounds);
  sol.kappa_final_sq = kappa_final_sq(s, family, curve, bounds);
  sol.root_residual = transcendental_residual(s, family, curve, bounds).value_or(std::nan(""));

  // The chain is propagated in extended precision.
  using Wide = long double;
  const Wide u1 = bounds.u1();
  const Wide u2 = bounds.u2();
  const detail::ArcTimes<Wide> wide = detail::arc_times<Wide>(s, u1, family.branch);
  sol.schedule = ControlSchedule(bounds.u2(), bounds.u1());
  std::pair<Wide, Wide> p{1, 0};
  auto step = [&](Wide u, Wide dt, double stored) {
    sol.schedule.append(static_cast<double>(u), stored);
    p = detail::advance_arc<Wide>(p.first, p.second, u, dt);
    return PhasePoint{static_cast<double>(p.first), static_cast<double>(p.second)};
  };
  sol.switch_points.push_back(step(u1, wide.first, sol.tau_first));
  for (int k = 0; k < family.n; ++k) {
    sol.switch_points.push_back(step(u2, wide.y, sol.tau_y));
    sol.switch_points.push_back(step(u1, wide.x, sol.tau_x));
  }
  sol.final_point = step(u2, wide.last, sol.tau_final);
  return sol;
}

struct InvariantCheck {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

// Consistency of a synthesized extremal with its closed-form description.
inline std::vector<InvariantCheck> check_invariants(const ExtremalSolution& sol, const TargetCurve& curve,
                                                    const ControlBounds& bounds, double tol) {
  std::vector<InvariantCheck> checks;
  auto add = [&](std::string name, double value, double tolerance, bool passed) {
    checks.push_back({std::move(name), value, tolerance, passed});
  };
  const bool in_range = sol.s > 0.0 && sol.s <= bounds.max_ratio();
  add("ratio_in_range", sol.s, bounds.max_ratio(), in_range);

  const double sum = sol.tau_first + sol.family.n * (sol.tau_x + sol.tau_y) + sol.tau_final;
  const double sum_err = std::abs(sol.total_time - sum);
  add("time_sum", sum_err, 1e-12 * std::max(1.0, sol.total_time), sum_err <= 1e-12 * std::max(1.0, sol.total_time));

  double ratio_err = 0.0;
  int wrong_signs = 0;
  for (std::size_t j = 0; j < sol.switch_points.size(); ++j) {
    const PhasePoint& p = sol.switch_points[j];
    const double slope = p.x2 / p.x1;
    ratio_err = std::max(ratio_err, std::abs(slope * slope - sol.s));
    const bool expect_positive = (j % 2 == 0);
    if ((p.x2 > 0.0) != expect_positive) ++wrong_signs;
  }
  add("switch_ratio", ratio_err, tol, ratio_err <= tol);
  add("switch_sign_alternation", wrong_signs, 0.0, wrong_signs == 0);
  const double last_x2 = sol.switch_points.empty() ? 0.0 : sol.switch_points.back().x2;
  add("last_switch_upper", last_x2, 0.0, last_x2 > 0.0);

  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
  if (!sol.switch_points.empty()) {
    const double first = rel(sol.switch_points.front().x1 * sol.switch_points.front().x1, sol.kappa1_sq);
    add("kappa_first", first, tol, first <= tol);
    const double last = rel(sol.switch_points.back().x1 * sol.switch_points.back().x1, sol.kappa_last_sq);
    add("kappa_last", last, tol, last <= tol);
  }
  const double fin = rel(sol.final_point.x1 * sol.final_point.x1, sol.kappa_final_sq);
  add("kappa_final", fin, tol, fin <= tol);
  const double res = std::abs(curve_residual(sol.final_point, curve));
  add("endpoint_curve_residual", res, tol, res <= tol);
  const double energy = std::abs(energy_ratio(sol.final_point, bounds.u1()) - 1.0 / curve.energy_ratio);
  add("endpoint_energy", energy, tol, energy <= tol);
  return checks;
}

// Synthesizes the extremal at a validated root and checks every invariant.
inline ExtremalSolution build_solution(double s, const ExtremalFamily& family, const TargetCurve& curve,
                                       const ControlBounds& bounds, int root_index = 1,
                                       double residual_tol = SolverConfig{}.residual_tol) {
  ExtremalSolution sol = synthesize(s, family, curve, bounds, root_index);
  for (const InvariantCheck& check : check_invariants(sol, curve, bounds, residual_tol)) {
    if (!check.passed) throw ValidationFailure(sol.label() + ": " + check.name, check.value, check.tolerance);
  }
  return sol;
}

struct SolveResult {
  ExtremalSolution best;
  std::vector<ExtremalSolution> candidates;  // by n, then branch +/-, then root index (descending s)
  std::vector<std::string> warnings;
};

// Enumerates every family n = 0..n_max on both branches and returns the
// fastest extremal together with the full candidate table.
inline SolveResult minimize(const TargetCurve& curve, const ControlBounds& bounds, const SolverConfig& config = {}) {
  config.validate();
  const TargetCurve checked = TargetCurve::checked(curve.energy_ratio, bounds);
  SolveResult result;
  for (int n = 0; n <= config.n_max; ++n) {
    for (Branch branch : {Branch::Plus, Branch::Minus}) {
      const ExtremalFamily family{n, branch};
      const std::vector<double> roots = find_roots(family, checked, bounds, config);
      int index = 0;
      for (auto it = roots.rbegin(); it != roots.rend(); ++it)
        result.candidates.push_back(build_solution(*it, family, checked, bounds, ++index, config.residual_tol));
    }
  }
  if (result.candidates.empty()) {
    std::ostringstream os;
    os.precision(17);
    os << "no extremal reaches rE=" << curve.energy_ratio << " with n <= " << config.n_max;
    throw NoExtremalFound(os.str());
  }
  const ExtremalSolution* best = &result.candidates.front();
  for (const auto& cand : result.candidates)
    if (cand.total_time < best->total_time) best = &cand;
  result.best = *best;
  if (result.best.family.n == config.n_max && config.n_max > 0) {
    result.warnings.push_back("best extremal uses n = n_max = " + std::to_string(config.n_max) +
                              "; larger n may be faster");
  }
  return result;
}

struct FixedEndpointCandidate {
  ExtremalFamily family;
  int root_index = 1;
  double s = 0.0;
  double total_time = 0.0;
};

struct FixedEndpointResult {
  FixedEndpointCandidate best;
  std::vector<FixedEndpointCandidate> candidates;
};

inline std::vector<double> find_fixed_endpoint_roots(const ExtremalFamily& family, const ControlBounds& bounds,
                                                     const SolverConfig& config = {},
                                                     std::optional<double> endpoint = {}) {
  config.validate();
  auto residual = [&](double s) { return limiting_fixed_endpoint_residual(s, family, bounds, endpoint); };
  return bracket_roots(residual, bounds.max_ratio(), config.scan_points, config.root_tol);
}

// Minimum time to the axis point (endpoint, 0), endpoint defaulting to gamma.
inline FixedEndpointResult minimize_fixed_endpoint(const ControlBounds& bounds, const SolverConfig& config = {},
                                                   std::optional<double> endpoint = {}) {
  FixedEndpointResult result;
  for (int n = 0; n <= config.n_max; ++n) {
    for (Branch branch : {Branch::Plus, Branch::Minus}) {
      const ExtremalFamily family{n, branch};
      const std::vector<double> roots = find_fixed_endpoint_roots(family, bounds, config, endpoint);
      int index = 0;
      for (auto it = roots.rbegin(); it != roots.rend(); ++it)
        result.candidates.push_back({family, ++index, *it, fixed_endpoint_time(*it, family, bounds, endpoint)});
    }
  }
  if (result.candidates.empty()) throw NoExtremalFound("no fixed-endpoint extremal found");
  result.best = *std::min_element(result.candidates.begin(), result.candidates.end(),
                                  [](const auto& a, const auto& b) { return a.total_time < b.total_time; });
  return result;
}

}  // namespace minctrl
