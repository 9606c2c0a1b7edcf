#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "relaynet/bit_vector.hpp"

namespace relaynet {

// LLR convention throughout: natural log, positive means bit 0 more likely;
// +/-infinity encodes an exactly known bit.
using LlrVector = std::vector<double>;

enum class ChannelKind { noiseless, bsc, bec, biawgn };

struct ChannelModel {
    ChannelKind kind = ChannelKind::noiseless;
    double param = 0.0; // bsc: crossover p; bec: erasure eps; biawgn: sigma^2

    static ChannelModel noiseless() { return {ChannelKind::noiseless, 0.0}; }
    static ChannelModel bsc(double p);
    static ChannelModel bec(double eps);
    static ChannelModel biawgn(double sigma2);
};

// Channel output sequence. BIAWGN fills `reals` (BPSK bit 0 -> +1 plus
// noise); BSC and noiseless fill `bits`; BEC fills `bits` and `erased`.
struct Observation {
    ChannelKind kind = ChannelKind::noiseless;
    std::vector<double> reals;
    BitVector bits;
    BitVector erased;
};

// Deterministic stream splitting: one master seed per experiment, one
// substream per (trial, role) pair.
uint64_t derive_seed(uint64_t master, uint64_t stream);
std::mt19937_64 make_rng(uint64_t master, uint64_t stream);

// W1 uniform i.i.d.; W2 = W1 xor Bernoulli(rho) noise.
std::pair<BitVector, BitVector> sample_dsbs(double rho, std::size_t n, std::mt19937_64& rng);

Observation transmit(const ChannelModel& ch, const BitVector& x, std::mt19937_64& rng);

LlrVector channel_llr(const ChannelModel& ch, const Observation& obs);

// LLR the source-correlation factor sends toward the unknown partner bit.
double correlation_llr(double rho, bool own_bit);
LlrVector correlation_llrs(double rho, const BitVector& own_bits);

// Es/N0 in dB for unit-energy BPSK with noise variance sigma2 per dimension.
double sigma2_to_es_n0_db(double sigma2);
double es_n0_db_to_sigma2(double es_n0_db);

} // namespace relaynet
