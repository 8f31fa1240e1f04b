#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "minctrl/oracle.hpp"

using namespace minctrl;

namespace {

const ControlBounds kBounds(10.0);

ExtremalSolution reference_optimum() {
  return minimize(TargetCurve::checked(90.8059, kBounds), kBounds).best;
}

ControlSchedule random_bang_bang(std::mt19937_64& rng, const ControlBounds& b, double duration, int arcs) {
  std::uniform_real_distribution<double> cut(0.0, 1.0);
  std::vector<double> w(arcs);
  double sum = 0.0;
  for (double& x : w) sum += (x = 0.1 + cut(rng));
  ControlSchedule s(b.u2(), b.u1());
  for (int k = 0; k < arcs; ++k) s.append(k % 2 == 0 ? b.u1() : b.u2(), duration * w[k] / sum);
  return s;
}

}  // namespace

TEST(IntegratorConfig, Validation) {
  EXPECT_NO_THROW(IntegratorConfig{}.validate());
  EXPECT_THROW((IntegratorConfig{.step = 0.0}).validate(), DomainError);
  EXPECT_THROW((IntegratorConfig{.event_tol = -1.0}).validate(), DomainError);
}

TEST(IntegrateX, EquilibriumUnderUpperControl) {
  ControlSchedule s(1.0, 1.0);
  s.append(1.0, 1.0);
  const XTrajectory t = integrate_x({1.0, 0.0}, s);
  EXPECT_NEAR(t.final_state.x1, 1.0, 1e-14);
  EXPECT_NEAR(t.final_state.x2, 0.0, 1e-14);
  EXPECT_EQ(t.samples.front().t, 0.0);
  EXPECT_NEAR(t.samples.back().t, 1.0, 1e-14);
}

TEST(IntegrateX, AgreesWithClosedFormArc) {
  ControlSchedule s(1.0, kBounds.u1());
  s.append(kBounds.u1(), 1.0);
  const XTrajectory t = integrate_x({1.0, 0.0}, s);
  double worst = 0.0;
  for (const XSample& smp : t.samples) {
    const PhasePoint exact = propagate_arc({1.0, 0.0}, kBounds.u1(), smp.t);
    worst = std::max({worst, std::abs(exact.x1 - smp.x1), std::abs(exact.x2 - smp.x2)});
  }
  EXPECT_LT(worst, 1e-10);
}

TEST(IntegrateX, ReferenceOptimumLandsOnCurve) {
  const ExtremalSolution sol = reference_optimum();
  const XTrajectory t = integrate_x({1.0, 0.0}, sol.schedule);
  EXPECT_LT(std::abs(curve_residual(t.final_state, TargetCurve::checked(90.8059, kBounds))), 1e-7);
  EXPECT_EQ(t.samples.front().u, kBounds.u2());
  EXPECT_EQ(t.samples.back().u, kBounds.u1());
}

TEST(IntegrateX, IntermediateArcTimeBetweenSwitchingLines) {
  const double s = 0.01;
  const KappaChain k = kappa_chain(s, {1, Branch::Plus}, kBounds);
  const double after_y = 1.0 / (k.first_sq * (s + kBounds.u2()));
  const double x = std::sqrt(after_y);
  ControlSchedule sched(1.0, kBounds.u1());
  sched.append(kBounds.u1(), tau_x(s, kBounds));
  const PhasePoint end = integrate_x({x, -std::sqrt(s) * x}, sched).final_state;
  EXPECT_NEAR(end.x2 / end.x1, std::sqrt(s), 1e-8);
  EXPECT_NEAR(end.x1 * end.x1, k.last_sq, 1e-8 * k.last_sq);

  const double y = std::sqrt(k.first_sq);
  ControlSchedule ysched(1.0, kBounds.u1());
  ysched.append(kBounds.u2(), tau_y(s, kBounds));
  const PhasePoint yend = integrate_x({y, std::sqrt(s) * y}, ysched).final_state;
  EXPECT_NEAR(yend.x2 / yend.x1, -std::sqrt(s), 1e-7);
  EXPECT_NEAR(yend.x1 * yend.x1, after_y, 1e-7 * after_y);
}

TEST(IntegrateX, ReportsNumericalCollapseOfWidth) {
  ControlSchedule s(1.0, 1.0);
  s.append(1.0, 0.01);
  // A half step lands exactly on x1 = 0.
  EXPECT_THROW(integrate_x({1e-3, -20.0}, s, {.step = 1e-4}), IntegrationError);
  EXPECT_NO_THROW(integrate_x({1e-3, -20.0}, s, {.step = 1e-7}));
}

TEST(IntegrateX, FourthOrderConvergence) {
  ControlSchedule s(1.0, 0.05);
  s.append(0.05, 1.3);
  s.append(1.0, 0.7);
  const PhasePoint exact = propagate_schedule({1.0, 0.0}, s);
  auto err = [&](double h) {
    const PhasePoint p = integrate_x({1.0, 0.0}, s, {.step = h}).final_state;
    return std::hypot(p.x1 - exact.x1, p.x2 - exact.x2);
  };
  const double coarse = err(0.02);
  const double fine = err(0.01);
  EXPECT_GE(coarse / fine, 8.0) << coarse << " " << fine;
}

TEST(IntegrateZ, EquilibriumIsStationary) {
  ControlSchedule s(1.0, 1.0);
  s.append(1.0, 5.0);
  const ZTrajectory t = integrate_z({}, s);
  EXPECT_NEAR(t.final_state.z1, 1.0, 1e-14);
  EXPECT_NEAR(t.final_state.z2, 1.0, 1e-14);
  EXPECT_NEAR(t.final_state.z3, 0.0, 1e-14);
}

TEST(IntegrateZ, CasimirDriftOverDurationTen) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 5; ++i) {
    const ZTrajectory t = integrate_z({}, random_bang_bang(rng, kBounds, 10.0, 5));
    EXPECT_LT(t.max_casimir_drift, 1e-9);
  }
}

TEST(IntegrateZ, MatchesXRepresentation) {
  std::mt19937_64 rng(11);
  const ControlSchedule s = random_bang_bang(rng, ControlBounds(3.0), 6.0, 4);
  const XTrajectory xt = integrate_x({1.0, 0.0}, s);
  const ZTrajectory zt = integrate_z({}, s);
  ASSERT_EQ(xt.samples.size(), zt.samples.size());
  for (std::size_t i = 0; i < xt.samples.size(); i += 97) {
    const ZState z = x_to_z({xt.samples[i].x1, xt.samples[i].x2});
    EXPECT_NEAR(z.z1, zt.samples[i].z.z1, 1e-8);
    EXPECT_NEAR(z.z2, zt.samples[i].z.z2, 1e-8);
    EXPECT_NEAR(z.z3, zt.samples[i].z.z3, 1e-8);
  }
}

TEST(IntegrateZ, RejectsNonUnitCasimir) {
  ControlSchedule s(1.0, 1.0);
  s.append(1.0, 1.0);
  EXPECT_THROW(integrate_z({2.0, 2.0, 0.0}, s), DomainError);
}

TEST(GridSearchSpec, Validation) {
  EXPECT_NO_THROW(GridSearchSpec{}.validate());
  EXPECT_THROW((GridSearchSpec{.n_switchings = 2}).validate(), DomainError);
  EXPECT_THROW((GridSearchSpec{.n_switchings = 0}).validate(), DomainError);
  EXPECT_THROW((GridSearchSpec{.time_horizon = 0.0}).validate(), DomainError);
}

TEST(GridSearch, SingleSwitchSmallTarget) {
  const TargetCurve curve = TargetCurve::checked(2.0003, kBounds);
  const GridSearchResult g = grid_search_min_time(curve, kBounds, {.n_switchings = 1, .time_horizon = 1.0});
  EXPECT_NEAR(g.min_time, 0.022364, 1e-3);
  const double analytic = minimize(curve, kBounds).best.total_time;
  EXPECT_GE(g.min_time, analytic - 1e-9);
  EXPECT_LE(analytic, g.min_time + g.resolution);
  ASSERT_EQ(g.durations.size(), 2u);
}

TEST(GridSearch, ThreeSwitchCoarseLattice) {
  const TargetCurve curve = TargetCurve::checked(90.8059, kBounds);
  GridSearchSpec spec{.n_switchings = 3, .per_arc_grid = 100, .time_horizon = 10.0};
  spec.window_grid = 10;
  const GridSearchResult g = grid_search_min_time(curve, kBounds, spec);
  EXPECT_NEAR(g.min_time, 7.386, 5e-3);
  EXPECT_GE(g.min_time, reference_optimum().total_time - 1e-9);
  ASSERT_EQ(g.durations.size(), 4u);
}

TEST(GridSearch, NearSuddenQuenchBoundTimeVanishes) {
  const double rE = kBounds.min_energy_ratio() * (1.0 + 1e-7);
  const TargetCurve curve = TargetCurve::checked(rE, kBounds);
  const GridSearchResult g = grid_search_min_time(curve, kBounds, {.n_switchings = 1, .time_horizon = 0.05});
  EXPECT_LT(g.min_time, 1e-3);
  EXPECT_GE(g.min_time, minimize(curve, kBounds).best.total_time - 1e-9);
}

TEST(GridSearch, NotReachedWithinShortHorizon) {
  const TargetCurve curve = TargetCurve::checked(90.8059, kBounds);
  EXPECT_THROW(grid_search_min_time(curve, kBounds, {.n_switchings = 1, .time_horizon = 0.5}), NotReached);
}

TEST(XTerminal, LastLowerArcNeverTouchesCurve) {
  const TargetCurve curve = TargetCurve::checked(90.8059, kBounds);
  for (int turns : {0, 1, 2}) {
    const XTerminalReport r = x_terminal_exclusion(curve, kBounds, turns, turns == 2 ? 12 : 60, 12.0);
    EXPECT_GT(r.lattice_points, 0);
    EXPECT_EQ(r.violations, 0);
    EXPECT_GT(r.min_abs_residual, 1e-6) << "turns=" << turns;
  }
}

TEST(VerifySolution, ReferenceOptimumPasses) {
  const ExtremalSolution sol = reference_optimum();
  const VerificationReport r = verify_solution(sol, TargetCurve::checked(90.8059, kBounds), kBounds);
  EXPECT_TRUE(r.passed);
  for (const auto& c : r.checks) EXPECT_TRUE(c.passed) << c.name << " " << c.value;
  EXPECT_EQ(r.switch_ratio_errors.size(), 3u);
}

TEST(VerifySolution, PerturbedLastArcFailsEndpoint) {
  ExtremalSolution sol = reference_optimum();
  sol.schedule.mutable_segments().back().dt += 1e-3;
  sol.total_time += 1e-3;
  const VerificationReport r = verify_solution(sol, TargetCurve::checked(90.8059, kBounds), kBounds);
  EXPECT_FALSE(r.passed);
  bool endpoint_failed = false;
  for (const auto& c : r.checks)
    if (c.name == "endpoint_residual_closed_form") endpoint_failed = !c.passed;
  EXPECT_TRUE(endpoint_failed);
}

TEST(VerifySolution, SwappedBranchFails) {
  const ExtremalSolution best = reference_optimum();
  const TargetCurve curve = TargetCurve::checked(90.8059, kBounds);
  const ExtremalSolution swapped = synthesize(best.s, {best.family.n, Branch::Minus}, curve, kBounds);
  EXPECT_FALSE(verify_solution(swapped, curve, kBounds).passed);
}
