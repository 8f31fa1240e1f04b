#include <gtest/gtest.h>

#include <cmath>

#include "minctrl/extremal_solver.hpp"

using namespace minctrl;

class ParameterGrid : public ::testing::TestWithParam<int> {};

TEST_P(ParameterGrid, EveryCandidateSatisfiesItsInvariants) {
  const double gamma = 1.5 + 8.5 * GetParam() / 9.0;
  const ControlBounds b(gamma);
  for (int k = 1; k <= 10; ++k) {
    const double rE = b.min_energy_ratio() + (b.max_energy_ratio() - b.min_energy_ratio()) * k / 11.0;
    const TargetCurve curve = TargetCurve::checked(rE, b);
    const SolveResult r = minimize(curve, b);
    ASSERT_FALSE(r.candidates.empty());
    for (const ExtremalSolution& c : r.candidates) {
      EXPECT_LT(std::abs(curve_residual(c.final_point, curve)), 1e-9) << c.label() << " rE=" << rE;
      for (const PhasePoint& p : c.switch_points) {
        const double slope = p.x2 / p.x1;
        EXPECT_LT(std::abs(slope * slope - c.s), 1e-9) << c.label() << " rE=" << rE;
      }
      EXPECT_LT(std::abs(c.root_residual), 1e-12) << c.label() << " rE=" << rE;
      EXPECT_GE(c.total_time, r.best.total_time);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Gamma, ParameterGrid, ::testing::Range(0, 10));

TEST(SolverProperty, MinimumTimeGrowsWithTarget) {
  const ControlBounds b(10.0);
  double prev = 0.0;
  for (int k = 1; k <= 40; ++k) {
    const double rE = b.min_energy_ratio() + (b.max_energy_ratio() - b.min_energy_ratio()) * k / 41.0;
    const double t = minimize(TargetCurve::checked(rE, b), b).best.total_time;
    EXPECT_GT(t, 0.0);
    if (k > 1) {
      EXPECT_GE(t, prev - 1e-9) << "rE=" << rE;
    }
    prev = t;
  }
}

TEST(SolverProperty, ScheduleIsBangBang) {
  const ControlBounds b(4.0);
  const SolveResult r = minimize(TargetCurve::checked(10.0, b), b);
  for (const ExtremalSolution& c : r.candidates) {
    const auto& segs = c.schedule.segments();
    ASSERT_EQ(static_cast<int>(segs.size()), 2 * c.family.n + 2);
    for (std::size_t i = 0; i < segs.size(); ++i) {
      EXPECT_EQ(segs[i].u, i % 2 == 0 ? b.u1() : b.u2());
      EXPECT_GT(segs[i].dt, 0.0);
    }
    EXPECT_NEAR(c.schedule.total_duration(), c.total_time, 1e-12 * c.total_time);
  }
}
