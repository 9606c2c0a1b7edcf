#pragma once

#include <cstdint>
#include <vector>

#include "relaynet/ensemble.hpp"
#include "relaynet/sparse_matrix.hpp"

namespace relaynet {

// One variable to be placed by the progressive-edge-growth construction.
struct PegVariable {
    int edge_type;  // index into the check socket classes
    int degree;
};

// Low-level multi-edge PEG: places each variable's edges one at a time,
// connecting to a check at maximal tree depth (unreachable first), tie-broken
// by lowest current check degree then lowest check index. Socket capacities
// bound how many edges of each type a check accepts.
//
// vars are processed in the order given; check_sockets[c][t] is the socket
// budget of check c for edge type t. Returns the m-by-vars.size() matrix.
SparseBinaryMatrix peg_grow(std::size_t n_checks,
                            const std::vector<std::vector<int>>& check_sockets,
                            const std::vector<PegVariable>& vars);

// Ensemble-driven construction for single-class ensembles (source codes and
// regular codes): realizes node counts by largest-remainder rounding, orders
// variables by increasing degree, and grows the graph. Deterministic; the
// seed only breaks largest-remainder ties through a fixed shuffle.
SparseBinaryMatrix peg_construct(const MultiEdgeEnsemble& ensemble, std::size_t n, uint64_t seed,
                                 std::size_t n_checks_override = 0);

// Largest-remainder apportionment of n items to the given fractions.
std::vector<std::size_t> largest_remainder_counts(const std::vector<double>& fractions,
                                                  std::size_t n);

} // namespace relaynet
