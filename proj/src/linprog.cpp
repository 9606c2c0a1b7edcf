#include "relaynet/linprog.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

namespace relaynet::detail {

LpSolution simplex_max(const std::vector<std::vector<double>>& A,
                       const std::vector<double>& b,
                       const std::vector<double>& c) {
    const std::size_t m = A.size();
    const std::size_t n = c.size();
    constexpr double tol = 1e-10;
    for (double bi : b)
        if (bi < -tol) throw std::invalid_argument("simplex_max: requires b >= 0");

    // Tableau rows 1..m: [A | I | b]; row 0: reduced costs [-c | 0 | 0].
    const std::size_t width = n + m + 1;
    std::vector<std::vector<double>> T(m + 1, std::vector<double>(width, 0.0));
    for (std::size_t j = 0; j < n; ++j) T[0][j] = -c[j];
    for (std::size_t i = 0; i < m; ++i) {
        if (A[i].size() != n) throw std::invalid_argument("simplex_max: ragged A");
        for (std::size_t j = 0; j < n; ++j) T[i + 1][j] = A[i][j];
        T[i + 1][n + i] = 1.0;
        T[i + 1][width - 1] = b[i];
    }
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

    const std::size_t max_pivots = 50 * (m + n) + 1000;
    for (std::size_t iter = 0;; ++iter) {
        if (iter > max_pivots) throw std::runtime_error("simplex_max: pivot limit exceeded");
        // Bland: entering = lowest-index column with negative reduced cost.
        std::size_t enter = width;
        for (std::size_t j = 0; j + 1 < width; ++j)
            if (T[0][j] < -tol) { enter = j; break; }
        if (enter == width) break; // optimal

        // Ratio test; Bland tie-break on lowest basis variable index.
        std::size_t leave = 0;
        double best_ratio = std::numeric_limits<double>::infinity();
        bool found = false;
        for (std::size_t i = 1; i <= m; ++i) {
            double a = T[i][enter];
            if (a > tol) {
                double ratio = T[i][width - 1] / a;
                if (!found || ratio < best_ratio - tol ||
                    (ratio < best_ratio + tol && basis[i - 1] < basis[leave - 1])) {
                    best_ratio = ratio;
                    leave = i;
                    found = true;
                }
            }
        }
        if (!found) throw std::runtime_error("simplex_max: objective unbounded");

        double piv = T[leave][enter];
        for (std::size_t j = 0; j < width; ++j) T[leave][j] /= piv;
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == leave) continue;
            double f = T[i][enter];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < width; ++j) T[i][j] -= f * T[leave][j];
        }
        basis[leave - 1] = enter;
    }

    LpSolution sol;
    sol.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] < n) sol.x[basis[i]] = T[i + 1][width - 1];
    sol.dual.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) sol.dual[i] = T[0][n + i];
    sol.objective = T[0][width - 1];
    return sol;
}

} // namespace relaynet::detail
