#pragma once

#include <stdexcept>
#include <vector>

namespace shortcutlab {

/// Dense tableau simplex for  max c.x  s.t.  A.x <= b, x >= 0  with b >= 0,
/// so the all-slack basis is feasible. Bland's rule guards against cycling.
struct LpResult {
  bool bounded = true;
  double objective = 0;
  std::vector<double> x;
};

LpResult simplex_max(const std::vector<std::vector<double>>& a,
                     const std::vector<double>& b,
                     const std::vector<double>& c);

}  // namespace shortcutlab
