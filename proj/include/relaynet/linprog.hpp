#pragma once

#include <vector>

namespace relaynet::detail {

// Dense primal simplex for: maximize c.x subject to A x <= b, x >= 0,
// with b >= 0 (origin feasible). Bland's rule; throws on unboundedness.
struct LpSolution {
    double objective = 0.0;
    std::vector<double> x;
    std::vector<double> dual; // one multiplier per constraint, >= 0
};

LpSolution simplex_max(const std::vector<std::vector<double>>& A,
                       const std::vector<double>& b,
                       const std::vector<double>& c);

} // namespace relaynet::detail
