#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "relaynet/bp.hpp"
#include "relaynet/peg.hpp"

using namespace relaynet;
using doctest::Approx;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const RelayCodebook& codebook() {
    static RelayCodebook cb = build_relay_codebook(table1_ensemble("chan_sep_r12"),
                                                   table1_ensemble("source_r12"), 1000, 0.5, 0.5, 21);
    return cb;
}

BitVector random_codeword(const RelayCodebook& cb, std::mt19937_64& rng) {
    auto b1 = testutil::random_bits(cb.k1(), rng);
    auto b2 = testutil::random_bits(cb.k2(), rng);
    auto x0 = relay_encode(cb, b1, b2);
    BitVector word(cb.H().n_cols());
    for (std::size_t i = 0; i < cb.k1(); ++i) word.set(i, b1.get(i));
    for (std::size_t i = 0; i < cb.k2(); ++i) word.set(cb.k1() + i, b2.get(i));
    for (std::size_t i = 0; i < x0.size(); ++i) word.set(cb.k1() + cb.k2() + i, x0.get(i));
    return word;
}

} // namespace

TEST_CASE("noiseless priors of a valid codeword converge immediately") {
    std::mt19937_64 rng(1);
    const auto& cb = codebook();
    auto word = random_codeword(cb, rng);
    LlrVector priors(word.size());
    for (std::size_t i = 0; i < word.size(); ++i) priors[i] = word.get(i) ? -kInf : kInf;
    auto res = bp_channel_decode(cb.H(), priors);
    CHECK(res.converged);
    CHECK(res.iterations_used <= 1);
    CHECK(res.decisions == word);
    CHECK(res.unsatisfied_checks == 0);
}

TEST_CASE("on the erasure channel BP reproduces peeling exactly") {
    std::mt19937_64 rng(2);
    const auto& cb = codebook();
    const auto& H = cb.H();
    for (int t = 0; t < 8; ++t) {
        auto word = random_codeword(cb, rng);
        BitVector mask(word.size(), true);
        std::bernoulli_distribution erase(0.35);
        for (std::size_t i = 0; i < word.size(); ++i)
            if (erase(rng)) mask.set(i, false);
        auto peel = peel_erasures(H, mask, word);

        LlrVector priors(word.size(), 0.0);
        for (std::size_t i = 0; i < word.size(); ++i)
            if (mask.get(i)) priors[i] = word.get(i) ? -kInf : kInf;
        auto bp = bp_channel_decode(H, priors, 300);

        std::vector<char> in_residual(word.size(), 0);
        for (uint32_t r : peel.residual) in_residual[r] = 1;
        for (std::size_t i = 0; i < word.size(); ++i) {
            if (in_residual[i]) {
                CHECK(bp.final_llrs[i] == 0.0); // still erased for BP as well
            } else {
                CHECK(bp.decisions.get(i) == peel.values.get(i));
                CHECK(bp.decisions.get(i) == word.get(i));
            }
        }
        CHECK(bp.converged == (peel.status == PeelStatus::resolved));
    }
}

TEST_CASE("extrinsic discipline on a hand-computed star graph") {
    // Two checks share variable 0: c1 = {0,1}, c2 = {0,2}; priors 0, +2, -3.
    FactorGraph g(3, {0.0, 2.0, -3.0});
    g.add_check({0, 1}, false);
    g.add_check({0, 2}, false);
    auto res = bp_decode(g);
    // Flood 1: totals (0+2-3, 2+0, -3+0) = (-1, 2, -3): checks unsatisfied.
    // Flood 2 uses extrinsic messages only:
    //   c1->1 = prior0 + c2->0 = -3, c2->2 = prior0 + c1->0 = +2,
    //   totals (-1, -1, -1), all-ones decisions satisfy both checks.
    CHECK(res.converged);
    CHECK(res.iterations_used == 2);
    CHECK(res.decisions.to_bits() == std::vector<int>{1, 1, 1});
    CHECK(res.final_llrs[0] == Approx(-1.0).epsilon(1e-12));
    CHECK(res.final_llrs[1] == Approx(-1.0).epsilon(1e-12));
    CHECK(res.final_llrs[2] == Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("pinned variables never change sign") {
    FactorGraph g(3, {kInf, -kInf, -8.0});
    g.add_check({0, 1, 2}, false);
    auto res = bp_decode(g);
    CHECK(res.decisions.get(0) == false);
    CHECK(res.decisions.get(1) == true);
    // check demands parity 0: third bit must resolve to 1 despite its prior
    CHECK(res.decisions.get(2) == true);
}

TEST_CASE("regular (3,6) below the DE threshold decodes reliably") {
    // The asymptotic (3,6) BIAWGN threshold is sigma2 ~ 0.776; at n = 2000
    // the finite-length waterfall needs a margin below it.
    auto H = peg_construct(regular_ensemble(3, 6), 2000, 31);
    const double sigma2 = 0.55;
    auto ch = ChannelModel::biawgn(sigma2);
    int word_errors = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
        auto rng = make_rng(5150, static_cast<uint64_t>(t));
        BitVector zeros(H.n_cols());
        auto obs = transmit(ch, zeros, rng);
        auto res = bp_channel_decode(H, channel_llr(ch, obs));
        if (!res.converged || !res.decisions.all_zero()) ++word_errors;
    }
    CHECK(word_errors < 2); // WER < 1e-2
}

TEST_CASE("source decoding with perfect correlation needs no correction") {
    const auto& cb = codebook();
    std::mt19937_64 rng(9);
    auto w = testutil::random_bits(cb.block_length(), rng);
    auto synd = syndrome_compress(cb.Hs(0), w);
    auto res = sw_source_decode(cb.Hs(0), synd, w, 1e-6, 100);
    CHECK(res.converged);
    CHECK(res.iterations_used == 0);
    CHECK(res.decisions == w);
}

TEST_CASE("converged source decoding reproduces the input syndrome") {
    const auto& cb = codebook();
    auto rng = make_rng(10, 0);
    auto [w1, w2] = sample_dsbs(0.04, cb.block_length(), rng);
    auto synd = syndrome_compress(cb.Hs(1), w2);
    auto res = sw_source_decode(cb.Hs(1), synd, w1, 0.04, 200);
    REQUIRE(res.converged);
    CHECK(mat_vec_syndrome(cb.Hs(1), res.decisions) == synd);
    CHECK(res.decisions == w2);
}

TEST_CASE("separate decoding over a noiseless downlink recovers exactly") {
    const auto& cb = codebook();
    auto rng = make_rng(11, 0);
    auto [w1, w2] = sample_dsbs(0.04, cb.block_length(), rng);
    auto b1 = syndrome_compress(cb.Hs(0), w1);
    auto b2 = syndrome_compress(cb.Hs(1), w2);
    auto x0 = relay_encode(cb, b1, b2);
    LlrVector x_llr(x0.size());
    for (std::size_t i = 0; i < x0.size(); ++i) x_llr[i] = x0.get(i) ? -kInf : kInf;

    auto res0 = separate_decode(cb, 0, w1, b1, x_llr, 0.04);
    CHECK(res0.stage1_converged);
    CHECK(res0.b_estimate == b2);
    CHECK(res0.converged);
    CHECK(res0.w_estimate == w2);

    auto res1 = separate_decode(cb, 1, w2, b2, x_llr, 0.04);
    CHECK(res1.converged);
    CHECK(res1.w_estimate == w1);
}

TEST_CASE("joint decoding over a noiseless downlink recovers the bin index at any rho") {
    const auto& cb = codebook();
    for (double rho : {0.05, 0.2, 0.4}) {
        auto rng = make_rng(12, static_cast<uint64_t>(rho * 1000));
        auto [w1, w2] = sample_dsbs(rho, cb.block_length(), rng);
        auto b1 = syndrome_compress(cb.Hs(0), w1);
        auto b2 = syndrome_compress(cb.Hs(1), w2);
        auto x0 = relay_encode(cb, b1, b2);
        LlrVector x_llr(x0.size());
        for (std::size_t i = 0; i < x0.size(); ++i) x_llr[i] = x0.get(i) ? -kInf : kInf;
        auto res = joint_decode(cb, 0, w1, b1, x_llr, rho);
        CHECK(res.b_estimate == b2);  // the erased message always resolves
        if (rho < 0.1) {
            // below the source threshold the full source block comes back too
            CHECK(res.converged);
            CHECK(res.w_estimate == w2);
        }
    }
}

TEST_CASE("stage-1 failure propagates to the result flags") {
    const auto& cb = codebook();
    auto rng = make_rng(13, 0);
    auto [w1, w2] = sample_dsbs(0.05, cb.block_length(), rng);
    auto b1 = syndrome_compress(cb.Hs(0), w1);
    auto b2 = syndrome_compress(cb.Hs(1), w2);
    auto x0 = relay_encode(cb, b1, b2);
    auto ch = ChannelModel::biawgn(6.0);  // far above any threshold
    auto obs = transmit(ch, x0, rng);
    auto res = separate_decode(cb, 0, w1, b1, channel_llr(ch, obs), 0.05, {50, 1.0, 50.0});
    CHECK_FALSE(res.stage1_converged);
    CHECK_FALSE(res.converged);
    CHECK(res.unsatisfied_checks > 0);
}

TEST_CASE("joint and separate agree when correlation is uninformative") {
    const auto& cb = codebook();
    const double rho = 0.4999, sigma2 = 0.55;  // high SNR, useless correlation
    auto ch = ChannelModel::biawgn(sigma2);
    int agree = 0, total = 0;
    for (int t = 0; t < 20; ++t) {
        auto rng = make_rng(99, static_cast<uint64_t>(t));
        auto [w1, w2] = sample_dsbs(rho, cb.block_length(), rng);
        auto b1 = syndrome_compress(cb.Hs(0), w1);
        auto b2 = syndrome_compress(cb.Hs(1), w2);
        auto x0 = relay_encode(cb, b1, b2);
        auto obs = transmit(ch, x0, rng);
        auto llr = channel_llr(ch, obs);
        auto sep = separate_decode(cb, 0, w1, b1, llr, rho);
        auto joint = joint_decode(cb, 0, w1, b1, llr, rho);
        BitVector diff = sep.b_estimate;
        diff ^= joint.b_estimate;
        total += 1;
        if (diff.all_zero()) ++agree;
    }
    CHECK(agree >= 19);  // >= 99% of bin decisions identical in expectation
}
