// Minimum expansion time for an Otto refrigerator with omega_h / omega_c = 100.
#include <cstdio>

#include "minctrl/thermo.hpp"

int main() {
  for (double th : {0.05, 0.8218, 50.0}) {
    const minctrl::OttoSpec spec{100.0, 0.01, th};
    const minctrl::RefrigeratorResult r = minctrl::refrigerator_min_driving_time(spec);
    std::printf("Th=%-8g regime=%-10s EC/EA=%-12.6f T=%.6f\n", th, minctrl::regime_name(r.regime),
                r.energy_ratio, r.min_time);
  }
}
