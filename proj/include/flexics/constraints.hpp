#pragma once

#include <cmath>
#include <string>

#include "flexics/util.hpp"

namespace flexics {

// Declarative mining constraints shared by the oracles, the measure
// scaling rules and the CLI. The minimum-frequency threshold is carried
// both as the user-facing fraction and as the absolute transaction count
// actually enforced (ceiling of fraction * N).
struct Constraints {
  double minfreq_fraction = 0.0;  // theta in (0, 1]
  int minfreq_abs = 0;            // derived: ceil(theta * N), >= 1
  bool closed = false;
  int minlen = 0;                 // 0 = constraint absent

  static Constraints from_fraction(double theta, int num_transactions,
                                   bool closed = false, int minlen = 0) {
    if (theta <= 0.0 || theta > 1.0)
      throw ConfigError("minfreq fraction must be in (0,1], got " + std::to_string(theta));
    Constraints c;
    c.minfreq_fraction = theta;
    c.minfreq_abs = int(std::ceil(theta * num_transactions));
    if (c.minfreq_abs < 1) c.minfreq_abs = 1;
    c.closed = closed;
    c.minlen = minlen;
    return c;
  }
};

}  // namespace flexics
