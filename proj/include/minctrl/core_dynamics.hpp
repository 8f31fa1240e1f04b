// Reduced phase-plane model of the quantum parametric oscillator.
//
// Units: omega_0 = 1, E_0 = 1, time in 1/omega_0. The state (x1, x2) is the
// scaled RMS width b and its scaled velocity; u = omega^2 / omega_0^2 is the
// control. Along any constant-control arc the quantity
//     c = x2^2 + u x1^2 + 1/x1^2
// is conserved, and w = x1^2 obeys the linear equation w'' = 2c - 4u w, which
// is what makes exact arc propagation possible.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "minctrl/errors.hpp"

namespace minctrl {

struct PhasePoint {
  double x1 = 1.0;
  double x2 = 0.0;
};

inline void require_domain(const PhasePoint& p) {
  if (!(p.x1 > 0.0) || !std::isfinite(p.x1) || !std::isfinite(p.x2)) {
    std::ostringstream os;
    os << "phase point requires x1 > 0 (got x1=" << p.x1 << ", x2=" << p.x2 << ")";
    throw DomainError(os.str());
  }
}

// Admissible control interval [u1, u2] = [1/gamma^4, 1] for gamma = sqrt(omega_0/omega_f).
class ControlBounds {
 public:
  explicit ControlBounds(double gamma) : gamma_(gamma) {
    if (!(gamma > 1.0) || !std::isfinite(gamma)) {
      std::ostringstream os;
      os << "gamma must be finite and > 1 (got " << gamma << ")";
      throw DomainError(os.str());
    }
    const double g2 = gamma * gamma;
    u1_ = 1.0 / (g2 * g2);
  }

  double gamma() const noexcept { return gamma_; }
  double u1() const noexcept { return u1_; }
  static constexpr double u2() noexcept { return 1.0; }
  // Arc constant of the first X-segment through the start point (1, 0).
  double c1() const noexcept { return 1.0 + u1_; }

  // Upper end of the switching-ratio range, (1 - u1)^2 / 4.
  double max_ratio() const noexcept { return 0.25 * (1.0 - u1_) * (1.0 - u1_); }

  // Open interval of reachable energy ratios rE = E0/Ef between the sudden
  // quench and the absolute minimum energy.
  double min_energy_ratio() const noexcept { return 2.0 / (1.0 + u1_); }
  double max_energy_ratio() const noexcept { return gamma_ * gamma_; }

  bool contains(double u) const noexcept { return u >= u1_ && u <= u2(); }

 private:
  double gamma_;
  double u1_;
};

// Second moments (z1, z2, z3) = (m<q^2>, <p^2>/m, <qp+pq>), dimensionless.
struct ZState {
  double z1 = 1.0;
  double z2 = 1.0;
  double z3 = 0.0;

  // Casimir companion z1 z2 - z3^2/4; equals 1 for every state reached from equilibrium.
  double casimir() const noexcept { return z1 * z2 - 0.25 * z3 * z3; }
};

struct ControlSegment {
  double u = 1.0;
  double dt = 0.0;
};

// Piecewise-constant control. The boundary values describe the instantaneous
// jumps u(0) = u2 and u(T) = u1 at the ends of the transfer; they carry no duration.
class ControlSchedule {
 public:
  ControlSchedule() = default;
  ControlSchedule(double u_before, double u_after) : u_before_(u_before), u_after_(u_after) {}

  void append(double u, double dt) {
    if (!(dt >= 0.0) || !std::isfinite(dt)) {
      std::ostringstream os;
      os << "segment duration must be finite and >= 0 (got " << dt << ")";
      throw DomainError(os.str());
    }
    if (!(u > 0.0) || !std::isfinite(u)) {
      std::ostringstream os;
      os << "segment control must be finite and > 0 (got " << u << ")";
      throw DomainError(os.str());
    }
    segments_.push_back({u, dt});
  }

  std::span<const ControlSegment> segments() const noexcept { return segments_; }
  std::vector<ControlSegment>& mutable_segments() noexcept { return segments_; }
  std::size_t size() const noexcept { return segments_.size(); }
  bool empty() const noexcept { return segments_.empty(); }

  double total_duration() const noexcept {
    double total = 0.0;
    for (const auto& seg : segments_) total += seg.dt;
    return total;
  }

  double u_before() const noexcept { return u_before_; }
  double u_after() const noexcept { return u_after_; }

  // Control in effect at time t, with the boundary values at t <= 0 and t >= T.
  double control_at(double t) const noexcept {
    if (segments_.empty() || t <= 0.0) return u_before_;
    double start = 0.0;
    for (const auto& seg : segments_) {
      if (t < start + seg.dt) return seg.u;
      start += seg.dt;
    }
    return u_after_;
  }

 private:
  std::vector<ControlSegment> segments_;
  double u_before_ = 1.0;
  double u_after_ = 1.0;
};

// Locus of final states with average energy E_f = E0 / rE at the lower control u1:
//     x2^2 + u1 x1^2 + 1/x1^2 = 2/rE.
struct TargetCurve {
  double energy_ratio = 1.0;  // rE
  double u1 = 1.0;

  TargetCurve() = default;
  TargetCurve(double rE, double lower_control) : energy_ratio(rE), u1(lower_control) {
    if (!(rE > 0.0) || !std::isfinite(rE)) throw DomainError("energy ratio must be finite and > 0");
  }

  // Curve for a minimum-time transfer; rE must lie strictly inside the reachable interval.
  static TargetCurve checked(double rE, const ControlBounds& bounds) {
    if (!(rE > bounds.min_energy_ratio() && rE < bounds.max_energy_ratio())) {
      std::ostringstream os;
      os.precision(17);
      os << "energy ratio rE=" << rE << " outside admissible interval (" << bounds.min_energy_ratio()
         << ", " << bounds.max_energy_ratio() << ") for gamma=" << bounds.gamma();
      throw DomainError(os.str());
    }
    return TargetCurve(rE, bounds.u1());
  }

  double level() const noexcept { return 2.0 / energy_ratio; }
};

// Arc constant x2^2 + u x1^2 + 1/x1^2.
inline double arc_constant(const PhasePoint& p, double u) {
  require_domain(p);
  return p.x2 * p.x2 + u * p.x1 * p.x1 + 1.0 / (p.x1 * p.x1);
}

// Average energy in units of E0 at frequency sqrt(u): (u x1^2 + x2^2 + 1/x1^2) / 2.
inline double energy_ratio(const PhasePoint& p, double u) { return 0.5 * arc_constant(p, u); }

inline double curve_residual(const PhasePoint& p, const TargetCurve& curve) {
  return arc_constant(p, curve.u1) - curve.level();
}

inline ZState x_to_z(const PhasePoint& p) {
  require_domain(p);
  const double w = p.x1 * p.x1;
  return {w, p.x2 * p.x2 + 1.0 / w, 2.0 * p.x1 * p.x2};
}

namespace detail {

// Exact constant-control step on (x1, x2) in the requested precision.
template <class Real>
std::pair<Real, Real> advance_arc(Real x1, Real x2, Real u, Real dt) {
  using std::cos, std::sin, std::sqrt;
  const Real w0 = x1 * x1;
  const Real dw0 = 2 * x1 * x2;
  const Real c = x2 * x2 + u * w0 + 1 / w0;
  const Real omega = 2 * sqrt(u);
  const Real a = w0 - c / (2 * u);
  const Real b = dw0 / omega;
  const Real cs = cos(omega * dt);
  const Real sn = sin(omega * dt);
  const Real half = sin(omega * dt / 2);
  // w0 + a (cos - 1) + b sin, with cos - 1 = -2 sin^2(half).
  const Real w = w0 - 2 * a * half * half + b * sn;
  const Real dw = omega * (b * cs - a * sn);
  // w stays above its minimum (c - sqrt(c^2 - 4u)) / 2u > 0; guard roundoff only.
  const Real floor = 1 / (2 * c);
  const Real x1_next = sqrt(w > floor ? w : floor);
  return {x1_next, dw / (2 * x1_next)};
}

}  // namespace detail

// Exact state after dt under constant control u > 0.
inline PhasePoint propagate_arc(const PhasePoint& p, double u, double dt) {
  require_domain(p);
  if (!(u > 0.0) || !std::isfinite(u)) {
    std::ostringstream os;
    os << "propagate_arc requires u > 0 (got " << u << ")";
    throw DomainError(os.str());
  }
  if (!(dt >= 0.0) || !std::isfinite(dt)) {
    std::ostringstream os;
    os << "propagate_arc requires finite dt >= 0 (got " << dt << ")";
    throw DomainError(os.str());
  }
  const auto [x1, x2] = detail::advance_arc<double>(p.x1, p.x2, u, dt);
  return {x1, x2};
}

// Applies each segment of the schedule in turn.
inline PhasePoint propagate_schedule(const PhasePoint& start, const ControlSchedule& schedule) {
  PhasePoint p = start;
  for (const auto& seg : schedule.segments()) p = propagate_arc(p, seg.u, seg.dt);
  return p;
}

// State at time t in [0, T] along the schedule.
inline PhasePoint state_at(const PhasePoint& start, const ControlSchedule& schedule, double t) {
  PhasePoint p = start;
  double elapsed = 0.0;
  for (const auto& seg : schedule.segments()) {
    if (t <= elapsed + seg.dt) return propagate_arc(p, seg.u, std::max(0.0, t - elapsed));
    p = propagate_arc(p, seg.u, seg.dt);
    elapsed += seg.dt;
  }
  return p;
}

}  // namespace minctrl
