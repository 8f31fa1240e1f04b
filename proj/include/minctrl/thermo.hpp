// Otto refrigerator and finite-time availability on top of the solver.
//
// Temperatures are in units of hbar omega_h / (2 k_b), energies in hbar omega_h / 2,
// times in 1/omega_h. The expansion omega_h -> omega_c maps onto the transfer
// omega_0 -> omega_f with gamma^2 = omega_h / omega_c.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "minctrl/core_dynamics.hpp"
#include "minctrl/errors.hpp"
#include "minctrl/extremal_solver.hpp"

namespace minctrl {

struct OttoSpec {
  double omega_ratio = 2.0;  // omega_h / omega_c
  double tc = 0.5;
  double th = 1.0;

  void validate() const {
    if (!(omega_ratio > 1.0) || !std::isfinite(omega_ratio)) throw DomainError("omega_ratio must be finite and > 1");
    if (!(tc > 0.0) || !std::isfinite(tc)) throw DomainError("Tc must be finite and > 0");
    if (!(th > tc) || !std::isfinite(th)) throw DomainError("Th must be finite and > Tc");
  }

  double gamma() const { return std::sqrt(omega_ratio); }
};

struct CycleEnergies {
  double ea = 0.0;      // after thermalization with the cold reservoir, at omega_c
  double ec = 0.0;      // after thermalization with the hot reservoir, at omega_h
  double ed_min = 0.0;  // adiabatic end point of the expansion
  double ed_sc = 0.0;   // sudden-quench end point of the expansion
};

// omega coth(omega / T) with omega relative to omega_h.
inline double equilibrium_energy(double omega_rel, double temperature) {
  if (!(omega_rel > 0.0) || !(temperature > 0.0)) {
    std::ostringstream os;
    os << "equilibrium_energy requires omega > 0 and T > 0 (got " << omega_rel << ", " << temperature << ")";
    throw DomainError(os.str());
  }
  return omega_rel / std::tanh(omega_rel / temperature);
}

inline CycleEnergies cycle_energies(const OttoSpec& spec) {
  spec.validate();
  CycleEnergies e;
  e.ea = equilibrium_energy(1.0 / spec.omega_ratio, spec.tc);
  e.ec = equilibrium_energy(1.0, spec.th);
  e.ed_min = e.ec / spec.omega_ratio;
  e.ed_sc = 0.5 * (1.0 + 1.0 / (spec.omega_ratio * spec.omega_ratio)) * e.ec;
  return e;
}

enum class DrivingRegime { Zero, Infeasible, Critical };

inline const char* regime_name(DrivingRegime r) noexcept {
  switch (r) {
    case DrivingRegime::Zero: return "Zero";
    case DrivingRegime::Infeasible: return "Infeasible";
    case DrivingRegime::Critical: return "Critical";
  }
  return "?";
}

struct RefrigeratorResult {
  DrivingRegime regime = DrivingRegime::Zero;
  CycleEnergies energies;
  double energy_ratio = 0.0;  // E_C / E_A
  double min_time = 0.0;
  std::optional<ExtremalSolution> solution;
  std::vector<std::string> warnings;
};

inline DrivingRegime classify(const CycleEnergies& e) noexcept {
  if (e.ed_sc < e.ea) return DrivingRegime::Zero;
  if (e.ea <= e.ed_min) return DrivingRegime::Infeasible;
  return DrivingRegime::Critical;
}

// Shortest expansion that still leaves E_D <= E_A, so the cold stroke extracts heat.
inline RefrigeratorResult refrigerator_min_driving_time(const OttoSpec& spec, const SolverConfig& config = {}) {
  RefrigeratorResult result;
  result.energies = cycle_energies(spec);
  result.energy_ratio = result.energies.ec / result.energies.ea;
  result.regime = classify(result.energies);
  if (result.regime != DrivingRegime::Critical) return result;
  const ControlBounds bounds(spec.gamma());
  // At E_D,sc == E_A the target sits on the sudden-quench bound, reached in zero time.
  if (!(result.energy_ratio > bounds.min_energy_ratio())) return result;
  const SolveResult solved = minimize(TargetCurve::checked(result.energy_ratio, bounds), bounds, config);
  result.min_time = solved.best.total_time;
  result.solution = solved.best;
  result.warnings = solved.warnings;
  return result;
}

struct AvailabilityQuery {
  double gamma = 2.0;
  double ed_ratio = 0.5;  // E_D / E_C

  double energy_ratio() const { return 1.0 / ed_ratio; }
};

inline ExtremalSolution availability_min_time(const AvailabilityQuery& q, const SolverConfig& config = {}) {
  if (!(q.ed_ratio > 0.0) || !std::isfinite(q.ed_ratio)) throw DomainError("E_D/E_C must be finite and > 0");
  const ControlBounds bounds(q.gamma);
  return minimize(TargetCurve::checked(q.energy_ratio(), bounds), bounds, config).best;
}

struct AvailabilityPoint {
  double ed_ratio = 0.0;
  double energy_ratio = 0.0;
  double work_over_ec = 0.0;  // (E_C - E_D) / E_C
  double min_time = 0.0;
  std::string label;
};

struct AvailabilitySweep {
  std::vector<AvailabilityPoint> points;
  // Indices i where min_time drops between points i-1 and i as rE increases.
  std::vector<std::size_t> monotonicity_violations;
};

// Minimum times over ed_ratio from `first` to `last` (inclusive, `count` points).
inline AvailabilitySweep availability_sweep(double gamma, double first, double last, int count,
                                            const SolverConfig& config = {}) {
  if (count < 1) throw DomainError("sweep needs at least one point");
  if (count == 1 && first != last) throw DomainError("a single-point sweep needs first == last");
  AvailabilitySweep sweep;
  for (int k = 0; k < count; ++k) {
    const double ed = count == 1 ? first : first + (last - first) * k / (count - 1);
    const ExtremalSolution sol = availability_min_time({gamma, ed}, config);
    sweep.points.push_back({ed, 1.0 / ed, 1.0 - ed, sol.total_time, sol.label()});
  }
  std::vector<std::size_t> order(sweep.points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return sweep.points[a].energy_ratio < sweep.points[b].energy_ratio; });
  for (std::size_t i = 1; i < order.size(); ++i)
    if (sweep.points[order[i]].min_time < sweep.points[order[i - 1]].min_time) sweep.monotonicity_violations.push_back(order[i]);
  return sweep;
}

// Leading-order arc times of the shortest XY extremal as s -> 0.
inline std::pair<double, double> small_s_equal_times(double s, const ControlBounds& bounds) {
  if (!(s >= 0.0)) throw DomainError("small_s_equal_times requires s >= 0");
  const double t = std::sqrt(s) / (1.0 - bounds.u1());
  return {t, t};
}

// Frequency omega'_f / omega_0 of the sudden quench that lands at E0 / rE.
inline double quench_frequency_for_energy(double rE, const ControlBounds& bounds) {
  if (!(rE >= 1.0 && rE <= bounds.min_energy_ratio())) {
    std::ostringstream os;
    os.precision(17);
    os << "sudden quench reaches rE in [1, " << bounds.min_energy_ratio() << "] only (got " << rE << ")";
    throw DomainError(os.str());
  }
  return std::sqrt(std::max(0.0, 2.0 / rE - 1.0));
}

}  // namespace minctrl
