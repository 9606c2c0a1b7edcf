#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "relaynet/channels.hpp"

using namespace relaynet;
using doctest::Approx;

TEST_CASE("dsbs disagreement rate matches rho") {
    auto rng = make_rng(7, 0);
    const std::size_t n = 1'000'000;
    SUBCASE("small rho") {
        auto [w1, w2] = sample_dsbs(1e-3, n, rng);
        BitVector diff = w1 ^ w2;
        double rate = static_cast<double>(diff.popcount()) / n;
        double sd = std::sqrt(1e-3 * (1 - 1e-3) / n);
        CHECK(std::abs(rate - 1e-3) < 3 * sd);
    }
    SUBCASE("rho = 0.1 and uniform marginals") {
        auto [w1, w2] = sample_dsbs(0.1, n, rng);
        BitVector diff = w1 ^ w2;
        double rate = static_cast<double>(diff.popcount()) / n;
        CHECK(std::abs(rate - 0.1) < 3 * std::sqrt(0.1 * 0.9 / n));
        double m1 = static_cast<double>(w1.popcount()) / n;
        double m2 = static_cast<double>(w2.popcount()) / n;
        CHECK(std::abs(m1 - 0.5) < 3 * std::sqrt(0.25 / n));
        CHECK(std::abs(m2 - 0.5) < 3 * std::sqrt(0.25 / n));
    }
    CHECK_THROWS_AS(sample_dsbs(0.6, 10, rng), std::domain_error);
}

TEST_CASE("noiseless transmission is exact") {
    auto rng = make_rng(3, 1);
    BitVector x = BitVector::from_bits({1, 0, 0, 1, 1});
    auto obs = transmit(ChannelModel::noiseless(), x, rng);
    CHECK(obs.bits == x);
}

TEST_CASE("bsc flip fraction concentrates at the crossover") {
    auto rng = make_rng(5, 2);
    const std::size_t n = 1'000'000;
    BitVector x(n);
    auto obs = transmit(ChannelModel::bsc(0.184), x, rng);
    double rate = static_cast<double>(obs.bits.popcount()) / n;
    CHECK(std::abs(rate - 0.184) < 3 * std::sqrt(0.184 * 0.816 / n));
}

TEST_CASE("biawgn noise variance matches sigma2") {
    auto rng = make_rng(5, 3);
    const std::size_t n = 1'000'000;
    BitVector x(n);
    for (std::size_t i = 0; i < n; i += 3) x.set(i, true);
    double sigma2 = 0.8;
    auto obs = transmit(ChannelModel::biawgn(sigma2), x, rng);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = obs.reals[i] - (x.get(i) ? -1.0 : 1.0);
        acc += d * d;
    }
    CHECK(acc / n == Approx(sigma2).epsilon(0.01));
}

TEST_CASE("channel llr values") {
    Observation obs;
    obs.kind = ChannelKind::biawgn;
    obs.reals = {0.0, 1.0, -2.0};
    auto llr = channel_llr(ChannelModel::biawgn(0.5), obs);
    CHECK(llr[0] == 0.0);
    CHECK(llr[1] == Approx(4.0));   // 2y/sigma2, linear in y
    CHECK(llr[2] == Approx(-8.0));

    Observation bobs;
    bobs.kind = ChannelKind::bsc;
    bobs.bits = BitVector::from_bits({0, 1});
    auto bllr = channel_llr(ChannelModel::bsc(0.1), bobs);
    CHECK(bllr[0] == Approx(std::log(9.0)).epsilon(1e-12));
    CHECK(bllr[1] == Approx(-std::log(9.0)).epsilon(1e-12));

    Observation eobs;
    eobs.kind = ChannelKind::bec;
    eobs.bits = BitVector::from_bits({0, 1, 0});
    eobs.erased = BitVector::from_bits({0, 0, 1});
    auto ellr = channel_llr(ChannelModel::bec(0.3), eobs);
    CHECK(std::isinf(ellr[0]));
    CHECK(ellr[0] > 0);
    CHECK(std::isinf(ellr[1]));
    CHECK(ellr[1] < 0);
    CHECK(ellr[2] == 0.0);
}

TEST_CASE("biawgn llr distribution is symmetric under input negation") {
    // Empirical: llr(x=0 path) and -llr(x=1 path) have matching moments.
    auto rng1 = make_rng(11, 0);
    auto rng2 = make_rng(11, 0); // identical noise stream
    const std::size_t n = 200'000;
    BitVector zeros(n), ones(n, true);
    auto ch = ChannelModel::biawgn(1.3);
    auto llr0 = channel_llr(ch, transmit(ch, zeros, rng1));
    auto llr1 = channel_llr(ch, transmit(ch, ones, rng2));
    double m0 = 0, m1 = 0, v0 = 0, v1 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        m0 += llr0[i];
        m1 += -llr1[i];
    }
    m0 /= n; m1 /= n;
    for (std::size_t i = 0; i < n; ++i) {
        v0 += (llr0[i] - m0) * (llr0[i] - m0);
        v1 += (-llr1[i] - m1) * (-llr1[i] - m1);
    }
    CHECK(std::abs(m0 - m1) < 0.03);        // Monte Carlo tolerance
    CHECK(v0 / n == Approx(v1 / n).epsilon(0.02));
}

TEST_CASE("channel output densities satisfy the symmetry identity") {
    // E[exp(-LLR)] = 1 for the all-zero input on a symmetric channel.
    auto rng = make_rng(13, 5);
    const std::size_t n = 2'000'000;
    BitVector zeros(n);
    auto ch = ChannelModel::biawgn(0.9);
    auto llr = channel_llr(ch, transmit(ch, zeros, rng));
    double acc = 0.0;
    for (double v : llr) acc += std::exp(-v);
    CHECK(acc / n == Approx(1.0).epsilon(0.01));
}

TEST_CASE("correlation llr closed form") {
    CHECK(correlation_llr(0.05, false) == Approx(std::log(19.0)).epsilon(1e-12));
    CHECK(correlation_llr(0.05, true) == Approx(-std::log(19.0)).epsilon(1e-12));
    CHECK(std::abs(correlation_llr(0.4999, false)) < 5e-4);
    CHECK_THROWS_AS(correlation_llr(0.0, false), std::domain_error);
}

TEST_CASE("es/n0 conversion round-trips") {
    for (double db : {-3.0, -1.5, 0.0, 2.0}) {
        CHECK(sigma2_to_es_n0_db(es_n0_db_to_sigma2(db)) == Approx(db).epsilon(1e-12));
    }
    // Unit-energy BPSK: sigma2 = 0.5 is 0 dB.
    CHECK(sigma2_to_es_n0_db(0.5) == Approx(0.0).epsilon(1e-12));
}

TEST_CASE("seed derivation separates streams") {
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
    CHECK(derive_seed(1, 0) == derive_seed(1, 0));
}
