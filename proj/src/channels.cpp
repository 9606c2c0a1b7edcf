#include "relaynet/channels.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace relaynet {

ChannelModel ChannelModel::bsc(double p) {
    if (!(p >= 0.0 && p <= 0.5)) throw std::domain_error("bsc: crossover outside [0, 1/2]");
    return {ChannelKind::bsc, p};
}

ChannelModel ChannelModel::bec(double eps) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw std::domain_error("bec: erasure outside [0, 1]");
    return {ChannelKind::bec, eps};
}

ChannelModel ChannelModel::biawgn(double sigma2) {
    if (!(sigma2 > 0.0)) throw std::domain_error("biawgn: sigma2 must be positive");
    return {ChannelKind::biawgn, sigma2};
}

uint64_t derive_seed(uint64_t master, uint64_t stream) {
    // splitmix64 over the combined word
    uint64_t z = master + 0x9e3779b97f4a7c15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::mt19937_64 make_rng(uint64_t master, uint64_t stream) {
    return std::mt19937_64(derive_seed(master, stream));
}

std::pair<BitVector, BitVector> sample_dsbs(double rho, std::size_t n, std::mt19937_64& rng) {
    if (!(rho > 0.0 && rho < 0.5)) throw std::domain_error("sample_dsbs: rho outside (0, 1/2)");
    BitVector w1(n), w2(n);
    std::bernoulli_distribution half(0.5), noise(rho);
    for (std::size_t i = 0; i < n; ++i) {
        bool b = half(rng);
        w1.set(i, b);
        w2.set(i, b ^ noise(rng));
    }
    return {std::move(w1), std::move(w2)};
}

Observation transmit(const ChannelModel& ch, const BitVector& x, std::mt19937_64& rng) {
    Observation obs;
    obs.kind = ch.kind;
    const std::size_t n = x.size();
    switch (ch.kind) {
        case ChannelKind::noiseless:
            obs.bits = x;
            break;
        case ChannelKind::bsc: {
            obs.bits = x;
            std::bernoulli_distribution flip(ch.param);
            for (std::size_t i = 0; i < n; ++i)
                if (flip(rng)) obs.bits.flip(i);
            break;
        }
        case ChannelKind::bec: {
            obs.bits = x;
            obs.erased = BitVector(n);
            std::bernoulli_distribution erase(ch.param);
            for (std::size_t i = 0; i < n; ++i)
                if (erase(rng)) obs.erased.set(i, true);
            break;
        }
        case ChannelKind::biawgn: {
            obs.reals.resize(n);
            std::normal_distribution<double> noise(0.0, std::sqrt(ch.param));
            for (std::size_t i = 0; i < n; ++i)
                obs.reals[i] = (x.get(i) ? -1.0 : 1.0) + noise(rng);
            break;
        }
    }
    return obs;
}

LlrVector channel_llr(const ChannelModel& ch, const Observation& obs) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    LlrVector llr;
    switch (ch.kind) {
        case ChannelKind::noiseless: {
            llr.resize(obs.bits.size());
            for (std::size_t i = 0; i < llr.size(); ++i) llr[i] = obs.bits.get(i) ? -inf : inf;
            break;
        }
        case ChannelKind::bsc: {
            double mag = std::log((1.0 - ch.param) / ch.param);
            llr.resize(obs.bits.size());
            for (std::size_t i = 0; i < llr.size(); ++i)
                llr[i] = obs.bits.get(i) ? -mag : mag;
            break;
        }
        case ChannelKind::bec: {
            llr.resize(obs.bits.size());
            for (std::size_t i = 0; i < llr.size(); ++i) {
                if (obs.erased.get(i)) llr[i] = 0.0;
                else llr[i] = obs.bits.get(i) ? -inf : inf;
            }
            break;
        }
        case ChannelKind::biawgn: {
            llr.resize(obs.reals.size());
            for (std::size_t i = 0; i < llr.size(); ++i) llr[i] = 2.0 * obs.reals[i] / ch.param;
            break;
        }
    }
    return llr;
}

double correlation_llr(double rho, bool own_bit) {
    if (!(rho > 0.0 && rho < 0.5)) throw std::domain_error("correlation_llr: rho outside (0, 1/2)");
    double mag = std::log((1.0 - rho) / rho);
    return own_bit ? -mag : mag;
}

LlrVector correlation_llrs(double rho, const BitVector& own_bits) {
    LlrVector llr(own_bits.size());
    double mag = std::log((1.0 - rho) / rho);
    for (std::size_t i = 0; i < llr.size(); ++i) llr[i] = own_bits.get(i) ? -mag : mag;
    return llr;
}

double sigma2_to_es_n0_db(double sigma2) {
    return 10.0 * std::log10(1.0 / (2.0 * sigma2));
}

double es_n0_db_to_sigma2(double es_n0_db) {
    return 1.0 / (2.0 * std::pow(10.0, es_n0_db / 10.0));
}

} // namespace relaynet
