#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "relaynet/codebook.hpp"

using namespace relaynet;

namespace {

const RelayCodebook& small_codebook() {
    static RelayCodebook cb = build_relay_codebook(table1_ensemble("chan_sep_r12"),
                                                   table1_ensemble("source_r12"), 1000, 0.5, 0.5, 11);
    return cb;
}

} // namespace

TEST_CASE("codebook enforces the rank constraint on H0") {
    const auto& cb = small_codebook();
    CHECK(gf2_rank(cb.H0()) == cb.block_length());
}

TEST_CASE("codebook blocks H1 and H2 peel completely when erased") {
    const auto& cb = small_codebook();
    const std::size_t total = cb.H().n_cols();
    for (int blk = 0; blk < 2; ++blk) {
        BitVector mask(total, true), values(total);
        std::size_t first = blk == 0 ? 0 : cb.k1();
        std::size_t last = blk == 0 ? cb.k1() : cb.k1() + cb.k2();
        for (std::size_t j = first; j < last; ++j) mask.set(j, false);
        auto res = peel_erasures(cb.H(), mask, values);
        CHECK(res.status == PeelStatus::resolved);
    }
}

TEST_CASE("overall codebook shape carries the design rate") {
    const auto& cb = small_codebook();
    std::size_t n = cb.block_length();
    CHECK(cb.k1() == n / 2);
    CHECK(cb.k2() == n / 2);
    CHECK(cb.H().n_cols() == cb.k1() + cb.k2() + n);       // r1 n + r2 n message bits
    CHECK(cb.H().n_rows() == n);                           // carried by n parity symbols
    double design_rate = static_cast<double>(n) / static_cast<double>(cb.H().n_cols());
    CHECK(design_rate == doctest::Approx(0.5));
    CHECK(cb.Hs(0).n_rows() == cb.k1());
    CHECK(cb.Hs(0).n_cols() == n);
}

TEST_CASE("relay encoding of zero indices is the zero word") {
    const auto& cb = small_codebook();
    BitVector b1(cb.k1()), b2(cb.k2());
    CHECK(relay_encode(cb, b1, b2).all_zero());
}

TEST_CASE("relay encoding satisfies every parity check") {
    const auto& cb = small_codebook();
    std::mt19937_64 rng(5);
    for (int t = 0; t < 5; ++t) {
        auto b1 = testutil::random_bits(cb.k1(), rng);
        auto b2 = testutil::random_bits(cb.k2(), rng);
        auto x0 = relay_encode(cb, b1, b2);
        BitVector word(cb.H().n_cols());
        for (std::size_t i = 0; i < cb.k1(); ++i) word.set(i, b1.get(i));
        for (std::size_t i = 0; i < cb.k2(); ++i) word.set(cb.k1() + i, b2.get(i));
        for (std::size_t i = 0; i < x0.size(); ++i) word.set(cb.k1() + cb.k2() + i, x0.get(i));
        CHECK(mat_vec_syndrome(cb.H(), word).all_zero());
    }
}

TEST_CASE("relay encoding is linear") {
    const auto& cb = small_codebook();
    std::mt19937_64 rng(6);
    for (int t = 0; t < 5; ++t) {
        auto b1 = testutil::random_bits(cb.k1(), rng);
        auto b2 = testutil::random_bits(cb.k2(), rng);
        auto c1 = testutil::random_bits(cb.k1(), rng);
        auto c2 = testutil::random_bits(cb.k2(), rng);
        auto lhs = relay_encode(cb, b1 ^ c1, b2 ^ c2);
        auto rhs = relay_encode(cb, b1, b2) ^ relay_encode(cb, c1, c2);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("codebook construction is bit-reproducible under a fixed seed") {
    auto a = build_relay_codebook(table1_ensemble("chan_sep_r12"), table1_ensemble("source_r12"),
                                  600, 0.5, 0.5, 77);
    auto b = build_relay_codebook(table1_ensemble("chan_sep_r12"), table1_ensemble("source_r12"),
                                  600, 0.5, 0.5, 77);
    CHECK(a.H().rows() == b.H().rows());
    CHECK(a.Hs(0).rows() == b.Hs(0).rows());
    CHECK(a.Hs(1).rows() == b.Hs(1).rows());
}

TEST_CASE("syndrome compression length matches the bin index") {
    const auto& cb = small_codebook();
    std::mt19937_64 rng(8);
    auto w = testutil::random_bits(cb.block_length(), rng);
    auto b = syndrome_compress(cb.Hs(0), w);
    CHECK(b.size() == cb.k1());
}

TEST_CASE("joint-design ensemble also builds a valid codebook") {
    auto cb = build_relay_codebook(table1_ensemble("chan_joint_r12"), table1_ensemble("source_r12"),
                                   600, 0.5, 0.5, 3);
    CHECK(gf2_rank(cb.H0()) == 600);
}
