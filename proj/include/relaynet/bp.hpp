#pragma once

#include <cstdint>
#include <vector>

#include "relaynet/bit_vector.hpp"
#include "relaynet/channels.hpp"
#include "relaynet/codebook.hpp"
#include "relaynet/sparse_matrix.hpp"

namespace relaynet {

// Bipartite factor graph for sum-product decoding. Checks enforce parity
// targets; +/-infinite priors pin variables exactly (they are folded into
// the targets before iteration starts and never change sign).
class FactorGraph {
public:
    FactorGraph(std::size_t n_vars, LlrVector priors);

    // target = required parity of the XOR over vars.
    void add_check(const std::vector<uint32_t>& vars, bool target);
    void add_matrix(const SparseBinaryMatrix& H, uint32_t col_offset, const BitVector* targets);

    std::size_t n_vars() const { return priors_.size(); }
    std::size_t n_checks() const { return check_vars_.size(); }
    const LlrVector& priors() const { return priors_; }

    const std::vector<std::vector<uint32_t>>& check_lists() const { return check_vars_; }
    const std::vector<uint8_t>& check_targets() const { return targets_; }

private:
    LlrVector priors_;
    std::vector<std::vector<uint32_t>> check_vars_;
    std::vector<uint8_t> targets_;
};

struct BpOptions {
    int max_iters = 200;
    double damping = 1.0;  // 1.0 = undamped
    double clamp = 50.0;
};

struct DecodeResult {
    BitVector decisions;  // every graph variable, pinned ones included
    LlrVector final_llrs; // posterior totals; +/-inf at pinned variables
    bool converged = false;
    int iterations_used = 0;
    std::size_t unsatisfied_checks = 0;
};

// Flooding-schedule sum-product with the exact tanh-domain check update.
DecodeResult bp_decode(const FactorGraph& graph, const BpOptions& opt = {});

DecodeResult bp_channel_decode(const SparseBinaryMatrix& H, const LlrVector& priors,
                               int max_iters = 200, double damping = 1.0);

// Slepian-Wolf syndrome decoding: checks carry the syndrome as parity
// targets, priors come from the source correlation against the side info.
DecodeResult sw_source_decode(const SparseBinaryMatrix& Hs, const BitVector& syndrome,
                              const BitVector& side_info, double rho, int max_iters = 200);

struct RelayDecodeResult {
    BitVector w_estimate;   // the other node's source block
    BitVector b_estimate;   // the other node's bin index
    bool converged = false;
    bool stage1_converged = false;  // channel part
    bool stage2_converged = false;  // source part
    int iterations_used = 0;
    std::size_t unsatisfied_checks = 0;
};

// Two-stage decoder of node `node` (0 or 1): channel-decode the other bin
// index with the own index pinned, hard-decide, then source-decode. No
// information flows back.
RelayDecodeResult separate_decode(const RelayCodebook& cb, int node, const BitVector& own_bits,
                                  const BitVector& own_index, const LlrVector& x_llr, double rho,
                                  const BpOptions& opt = {});

// One sum-product pass over the combined graph: downlink code, the other
// node's source code, and the correlation priors from the own source block.
RelayDecodeResult joint_decode(const RelayCodebook& cb, int node, const BitVector& own_bits,
                               const BitVector& own_index, const LlrVector& x_llr, double rho,
                               const BpOptions& opt = {});

} // namespace relaynet
