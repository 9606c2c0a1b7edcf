#include "relaynet/peg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace relaynet {

namespace {
constexpr uint32_t kUnvisited = std::numeric_limits<uint32_t>::max();
}

std::vector<std::size_t> largest_remainder_counts(const std::vector<double>& fractions,
                                                  std::size_t n) {
    std::vector<std::size_t> counts(fractions.size(), 0);
    std::vector<std::pair<double, std::size_t>> rema;
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < fractions.size(); ++i) {
        double exact = fractions[i] * static_cast<double>(n);
        counts[i] = static_cast<std::size_t>(std::floor(exact));
        assigned += counts[i];
        rema.push_back({exact - std::floor(exact), i});
    }
    std::sort(rema.begin(), rema.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (std::size_t k = 0; assigned < n; ++k, ++assigned) counts[rema[k % rema.size()].second]++;
    return counts;
}

SparseBinaryMatrix peg_grow(std::size_t n_checks,
                            const std::vector<std::vector<int>>& check_sockets,
                            const std::vector<PegVariable>& vars) {
    const std::size_t m = n_checks;
    const std::size_t nv = vars.size();
    if (check_sockets.size() != m) throw std::invalid_argument("peg_grow: socket table size");
    const std::size_t n_types = check_sockets.empty() ? 1 : check_sockets[0].size();

    std::vector<std::vector<uint32_t>> var_adj(nv), check_adj(m);
    std::vector<std::vector<int>> socket_left(check_sockets);
    std::vector<uint32_t> check_deg(m, 0);

    // BFS scratch
    std::vector<uint32_t> var_stamp(nv, 0), check_stamp(m, 0), check_layer(m, 0);
    uint32_t stamp = 0;
    std::vector<uint32_t> frontier, next_frontier, touched_checks;

    for (std::size_t vi = 0; vi < nv; ++vi) {
        const auto& v = vars[vi];
        if (v.edge_type < 0 || static_cast<std::size_t>(v.edge_type) >= n_types)
            throw std::invalid_argument("peg_grow: bad edge type");
        for (int e = 0; e < v.degree; ++e) {
            // Grow the BFS tree of the current graph from vi; layer of a
            // check = its distance in variable hops.
            ++stamp;
            frontier.clear();
            touched_checks.clear();
            var_stamp[vi] = stamp;
            frontier.push_back(static_cast<uint32_t>(vi));
            uint32_t layer = 0;
            std::size_t checks_seen = 0;
            while (!frontier.empty()) {
                next_frontier.clear();
                bool new_checks = false;
                for (uint32_t fv : frontier) {
                    for (uint32_t c : var_adj[fv]) {
                        if (check_stamp[c] == stamp) continue;
                        check_stamp[c] = stamp;
                        check_layer[c] = layer;
                        touched_checks.push_back(c);
                        ++checks_seen;
                        new_checks = true;
                        for (uint32_t v2 : check_adj[c]) {
                            if (var_stamp[v2] == stamp) continue;
                            var_stamp[v2] = stamp;
                            next_frontier.push_back(v2);
                        }
                    }
                }
                if (!new_checks) break;
                frontier.swap(next_frontier);
                ++layer;
                if (checks_seen == m) break; // tree saturated the check side
            }

            uint32_t best = kUnvisited;
            uint32_t best_deg = std::numeric_limits<uint32_t>::max();
            if (checks_seen < m) {
                // Unreachable checks exist: pick among them.
                for (uint32_t c = 0; c < m; ++c) {
                    if (check_stamp[c] == stamp) continue;
                    if (socket_left[c][static_cast<std::size_t>(v.edge_type)] <= 0) continue;
                    if (check_deg[c] < best_deg) { best_deg = check_deg[c]; best = c; }
                }
            }
            if (best == kUnvisited) {
                // All reachable (or no unreachable with sockets): deepest
                // layer >= 1; layer 0 checks are already neighbours.
                uint32_t max_layer = 0;
                for (uint32_t c : touched_checks)
                    if (socket_left[c][static_cast<std::size_t>(v.edge_type)] > 0 && check_layer[c] > max_layer)
                        max_layer = check_layer[c];
                if (max_layer >= 1) {
                    for (uint32_t c : touched_checks) {
                        if (check_layer[c] != max_layer) continue;
                        if (socket_left[c][static_cast<std::size_t>(v.edge_type)] <= 0) continue;
                        if (check_deg[c] < best_deg) { best_deg = check_deg[c]; best = c; }
                    }
                }
            }
            if (best == kUnvisited)
                throw std::runtime_error("peg_grow: no admissible check socket (unrealizable profile)");

            var_adj[vi].push_back(best);
            check_adj[best].push_back(static_cast<uint32_t>(vi));
            socket_left[best][static_cast<std::size_t>(v.edge_type)]--;
            check_deg[best]++;
        }
    }

    std::vector<std::vector<uint32_t>> rows(m);
    for (std::size_t c = 0; c < m; ++c) rows[c] = check_adj[c];
    return SparseBinaryMatrix(m, nv, std::move(rows));
}

SparseBinaryMatrix peg_construct(const MultiEdgeEnsemble& ensemble, std::size_t n, uint64_t seed,
                                 std::size_t n_checks_override) {
    if (ensemble.kind() != MultiEdgeEnsemble::Kind::source)
        throw std::invalid_argument("peg_construct: single-class (source/regular) ensembles only");
    if (n < 100) throw std::invalid_argument("peg_construct: n must be at least 100");

    auto nf = ensemble.lambda_node_fractions();
    std::vector<int> degrees;
    std::vector<double> fractions;
    for (const auto& [d, f] : nf) { degrees.push_back(d); fractions.push_back(f); }
    auto counts = largest_remainder_counts(fractions, n);

    std::size_t n_edges = 0;
    std::vector<int> col_degree;
    col_degree.reserve(n);
    for (std::size_t i = 0; i < degrees.size(); ++i) {
        for (std::size_t k = 0; k < counts[i]; ++k) col_degree.push_back(degrees[i]);
        n_edges += counts[i] * static_cast<std::size_t>(degrees[i]);
    }

    // Columns draw their degree from a seeded shuffle of the realized list.
    std::mt19937_64 rng(seed);
    std::shuffle(col_degree.begin(), col_degree.end(), rng);

    const int d_c = ensemble.d_w();
    std::size_t m = n_checks_override
        ? n_checks_override
        : (n_edges + static_cast<std::size_t>(d_c) / 2) / static_cast<std::size_t>(d_c);
    if (m == 0 || m > n_edges) throw std::invalid_argument("peg_construct: degenerate profile");

    // Socket budgets: spread edges over m checks as evenly as possible.
    std::vector<std::vector<int>> sockets(m, std::vector<int>(1, static_cast<int>(n_edges / m)));
    std::size_t extra = n_edges - (n_edges / m) * m;
    for (std::size_t c = 0; c < extra; ++c) sockets[c][0]++;

    // Process in increasing degree order, original index as tie-break.
    std::vector<uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](uint32_t a, uint32_t b) { return col_degree[a] < col_degree[b]; });
    std::vector<PegVariable> vars(n);
    for (std::size_t k = 0; k < n; ++k) vars[k] = {0, col_degree[order[k]]};

    auto grown = peg_grow(m, sockets, vars);

    // Undo the processing permutation so column j carries col_degree[j].
    std::vector<std::vector<uint32_t>> rows(m);
    std::vector<uint32_t> inv(n);
    for (std::size_t k = 0; k < n; ++k) inv[k] = order[k];
    for (std::size_t r = 0; r < m; ++r)
        for (uint32_t c : grown.row(r)) rows[r].push_back(inv[c]);
    return SparseBinaryMatrix(m, n, std::move(rows));
}

} // namespace relaynet
