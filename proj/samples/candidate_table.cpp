// Lists every extremal reaching rE = 90.8059 at gamma = 10 and marks the fastest.
#include <cstdio>

#include "minctrl/extremal_solver.hpp"

int main() {
  const minctrl::ControlBounds bounds(10.0);
  const auto curve = minctrl::TargetCurve::checked(90.8059, bounds);
  const minctrl::SolveResult result = minctrl::minimize(curve, bounds);
  for (const auto& c : result.candidates) {
    std::printf("%-12s s=%.10f  T=%.6f%s\n", c.label().c_str(), c.s, c.total_time,
                c.label() == result.best.label() ? "  <- minimum" : "");
  }
  std::printf("final point (%.6f, %.6f)\n", result.best.final_point.x1, result.best.final_point.x2);
}
