// Minimum expansion time against the work left available, gamma = 10.
#include <cstdio>

#include "minctrl/thermo.hpp"

int main() {
  const minctrl::AvailabilitySweep sweep = minctrl::availability_sweep(10.0, 0.0105, 0.49, 12);
  std::printf("%-10s %-12s %-10s %s\n", "E_D/E_C", "W/E_C", "T", "extremal");
  for (const auto& p : sweep.points)
    std::printf("%-10.5f %-12.6f %-10.6f %s\n", p.ed_ratio, p.work_over_ec, p.min_time, p.label.c_str());
  if (!sweep.monotonicity_violations.empty()) std::printf("note: time is not monotone in rE here\n");
}
