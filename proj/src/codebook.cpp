#include "relaynet/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "relaynet/channels.hpp"
#include "relaynet/peg.hpp"

namespace relaynet {

RelayCodebook::RelayCodebook(SparseBinaryMatrix H, std::size_t n, double r1, double r2,
                             SparseBinaryMatrix Hs1, SparseBinaryMatrix Hs2)
    : n_(n), r1_(r1), r2_(r2), H_(std::move(H)), Hs1_(std::move(Hs1)), Hs2_(std::move(Hs2)) {
    k1_ = static_cast<std::size_t>(std::lround(r1 * static_cast<double>(n)));
    k2_ = static_cast<std::size_t>(std::lround(r2 * static_cast<double>(n)));
    if (H_.n_rows() != n_ || H_.n_cols() != k1_ + k2_ + n_)
        throw std::invalid_argument("RelayCodebook: H has wrong shape");
    if (Hs1_.n_rows() != k1_ || Hs1_.n_cols() != n_)
        throw std::invalid_argument("RelayCodebook: Hs1 has wrong shape");
    if (Hs2_.n_rows() != k2_ || Hs2_.n_cols() != n_)
        throw std::invalid_argument("RelayCodebook: Hs2 has wrong shape");
    H1_ = H_.col_slice(0, k1_);
    H2_ = H_.col_slice(k1_, k1_ + k2_);
    H0_ = H_.col_slice(k1_ + k2_, k1_ + k2_ + n_);
    solver_ = std::make_shared<Gf2Solver>(H0_);
    if (!solver_->full_rank())
        throw std::invalid_argument("RelayCodebook: H0 is rank deficient");
    BitVector all_unknown(k1_ + k2_ + n_), values(k1_ + k2_ + n_);
    // H1 and H2 peelable with their own columns erased and everything else known.
    for (int blk = 0; blk < 2; ++blk) {
        BitVector mask(k1_ + k2_ + n_, true);
        std::size_t first = blk == 0 ? 0 : k1_;
        std::size_t last = blk == 0 ? k1_ : k1_ + k2_;
        for (std::size_t j = first; j < last; ++j) mask.set(j, false);
        auto res = peel_erasures(H_, mask, values);
        if (res.status != PeelStatus::resolved)
            throw std::invalid_argument("RelayCodebook: H" + std::to_string(blk + 1) +
                                        " contains a stopping set");
    }
}

const SparseBinaryMatrix& RelayCodebook::Hs(int node) const {
    if (node == 0) return Hs1_;
    if (node == 1) return Hs2_;
    throw std::out_of_range("RelayCodebook::Hs: node must be 0 or 1");
}

BitVector syndrome_compress(const SparseBinaryMatrix& Hs, const BitVector& w) {
    return mat_vec_syndrome(Hs, w);
}

BitVector relay_encode(const RelayCodebook& cb, const BitVector& b1, const BitVector& b2) {
    if (b1.size() != cb.k1() || b2.size() != cb.k2())
        throw std::invalid_argument("relay_encode: bin index length mismatch");
    BitVector rhs = mat_vec_syndrome(cb.H1(), b1);
    rhs ^= mat_vec_syndrome(cb.H2(), b2);
    return cb.solver().solve(rhs);
}

namespace {

struct DownlinkDraft {
    std::size_t n, k1, k2;
    std::vector<std::vector<uint32_t>> col_checks; // per column (k1+k2+n)
    std::vector<std::vector<int>> socket_left;     // per check: b1,b2,x
};

DownlinkDraft grow_downlink(const MultiEdgeEnsemble& ens, std::size_t n, double r1, double r2,
                            uint64_t seed) {
    const std::size_t k1 = static_cast<std::size_t>(std::lround(r1 * static_cast<double>(n)));
    const std::size_t k2 = static_cast<std::size_t>(std::lround(r2 * static_cast<double>(n)));
    const int bdeg = ens.bin_var_degree();
    const int d_x = ens.d_x();
    const int d_b = ens.d_b();

    // Check socket budgets. The d_b bin sockets alternate between the
    // (hi, lo) and (lo, hi) class splits; x sockets absorb the rounding
    // remainder of the lambda_x realization.
    auto nf = ens.lambda_node_fractions();
    std::vector<int> xdegs;
    std::vector<double> xfracs;
    for (const auto& [d, f] : nf) { xdegs.push_back(d); xfracs.push_back(f); }
    auto xcounts = largest_remainder_counts(xfracs, n);
    std::vector<int> x_col_degree;
    x_col_degree.reserve(n);
    std::size_t x_edges = 0;
    for (std::size_t i = 0; i < xdegs.size(); ++i) {
        for (std::size_t k = 0; k < xcounts[i]; ++k) x_col_degree.push_back(xdegs[i]);
        x_edges += xcounts[i] * static_cast<std::size_t>(xdegs[i]);
    }
    std::mt19937_64 rng(derive_seed(seed, 101));
    std::shuffle(x_col_degree.begin(), x_col_degree.end(), rng);

    const int hi = d_b - d_b / 2, lo = d_b / 2;
    std::vector<std::vector<int>> sockets(n, std::vector<int>(3, 0));
    for (std::size_t c = 0; c < n; ++c) {
        bool flip = (c % 2) == 1;
        sockets[c][0] = flip ? lo : hi;
        sockets[c][1] = flip ? hi : lo;
        sockets[c][2] = static_cast<int>(x_edges / n);
    }
    std::size_t extra = x_edges - (x_edges / n) * n;
    for (std::size_t c = 0; c < extra; ++c) sockets[c][2]++;
    // Guard the bin edge balance: k1*bdeg must equal the b1 socket total.
    std::size_t b1_sockets = 0, b2_sockets = 0;
    for (std::size_t c = 0; c < n; ++c) {
        b1_sockets += static_cast<std::size_t>(sockets[c][0]);
        b2_sockets += static_cast<std::size_t>(sockets[c][1]);
    }
    auto adjust = [&](std::size_t want, std::size_t have, int type) {
        // Move leftover sockets across checks one at a time.
        std::size_t c = 0;
        while (have < want) { sockets[c % n][type]++; ++have; ++c; }
        while (have > want) {
            if (sockets[c % n][type] > 0) { sockets[c % n][type]--; --have; }
            ++c;
        }
    };
    adjust(k1 * static_cast<std::size_t>(bdeg), b1_sockets, 0);
    adjust(k2 * static_cast<std::size_t>(bdeg), b2_sockets, 1);

    // Variable order: bin classes first, then x columns by increasing degree.
    std::vector<PegVariable> vars;
    vars.reserve(k1 + k2 + n);
    for (std::size_t i = 0; i < k1; ++i) vars.push_back({0, bdeg});
    for (std::size_t i = 0; i < k2; ++i) vars.push_back({1, bdeg});
    std::vector<uint32_t> xorder(n);
    std::iota(xorder.begin(), xorder.end(), 0u);
    std::stable_sort(xorder.begin(), xorder.end(),
                     [&](uint32_t a, uint32_t b) { return x_col_degree[a] < x_col_degree[b]; });
    for (std::size_t k = 0; k < n; ++k) vars.push_back({2, x_col_degree[xorder[k]]});

    auto grown = peg_grow(n, sockets, vars);

    DownlinkDraft draft;
    draft.n = n;
    draft.k1 = k1;
    draft.k2 = k2;
    draft.col_checks.assign(k1 + k2 + n, {});
    for (std::size_t r = 0; r < n; ++r) {
        for (uint32_t cidx : grown.row(r)) {
            std::size_t col = cidx;
            if (col >= k1 + k2) col = k1 + k2 + xorder[col - (k1 + k2)]; // undo x ordering
            draft.col_checks[col].push_back(static_cast<uint32_t>(r));
        }
    }
    draft.socket_left.assign(n, std::vector<int>(3, 0));
    return draft;
}

SparseBinaryMatrix draft_to_matrix(const DownlinkDraft& d) {
    std::vector<std::vector<uint32_t>> rows(d.n);
    for (std::size_t col = 0; col < d.col_checks.size(); ++col)
        for (uint32_t r : d.col_checks[col]) rows[r].push_back(static_cast<uint32_t>(col));
    return SparseBinaryMatrix(d.n, d.col_checks.size(), std::move(rows));
}

// Redraw every edge of one column to distinct uniformly random checks.
void resample_column(DownlinkDraft& d, std::size_t col, std::mt19937_64& rng) {
    std::size_t deg = d.col_checks[col].size();
    std::uniform_int_distribution<uint32_t> pick(0, static_cast<uint32_t>(d.n - 1));
    std::vector<uint32_t> draw;
    while (draw.size() < deg) {
        uint32_t c = pick(rng);
        if (std::find(draw.begin(), draw.end(), c) == draw.end()) draw.push_back(c);
    }
    std::sort(draw.begin(), draw.end());
    d.col_checks[col] = draw;
}

} // namespace

RelayCodebook build_relay_codebook(const MultiEdgeEnsemble& ens_down,
                                   const MultiEdgeEnsemble& ens_src, std::size_t n, double r1,
                                   double r2, uint64_t seed) {
    if (ens_down.kind() != MultiEdgeEnsemble::Kind::channel)
        throw std::invalid_argument("build_relay_codebook: ens_down must be a channel ensemble");
    if (ens_src.kind() != MultiEdgeEnsemble::Kind::source)
        throw std::invalid_argument("build_relay_codebook: ens_src must be a source ensemble");
    if (!(r1 > 0.0 && r1 < 1.0 && r2 > 0.0 && r2 < 1.0))
        throw std::invalid_argument("build_relay_codebook: rates must lie in (0,1)");

    auto draft = grow_downlink(ens_down, n, r1, r2, seed);
    const std::size_t k1 = draft.k1, k2 = draft.k2;
    std::mt19937_64 repair_rng(derive_seed(seed, 202));

    // Constraint (a): H0 full rank; resample deficient x-columns.
    for (int attempt = 0;; ++attempt) {
        auto H = draft_to_matrix(draft);
        Gf2Solver solver(H.col_slice(k1 + k2, k1 + k2 + n));
        if (solver.full_rank()) break;
        if (attempt >= 100)
            throw std::runtime_error(
                "build_relay_codebook: H0 rank completion failed (deficiency " +
                std::to_string(n - solver.rank()) + ")");
        for (uint32_t c : solver.deficient_cols())
            resample_column(draft, k1 + k2 + c, repair_rng);
    }

    // Constraint (b): H1, H2 free of stopping sets when fully erased.
    for (int blk = 0; blk < 2; ++blk) {
        std::size_t first = blk == 0 ? 0 : k1;
        std::size_t last = blk == 0 ? k1 : k1 + k2;
        for (int attempt = 0;; ++attempt) {
            auto H = draft_to_matrix(draft);
            BitVector mask(H.n_cols(), true), values(H.n_cols());
            for (std::size_t j = first; j < last; ++j) mask.set(j, false);
            auto res = peel_erasures(H, mask, values);
            if (res.status == PeelStatus::resolved) break;
            if (attempt >= 100)
                throw std::runtime_error("build_relay_codebook: stopping-set removal failed (block " +
                                         std::to_string(blk + 1) + ", residual " +
                                         std::to_string(res.residual.size()) + ")");
            for (uint32_t c : res.residual) resample_column(draft, c, repair_rng);
        }
    }
    // Resampling H1/H2 cannot break H0, but re-verify the rank anyway: the
    // codebook constructor enforces every invariant once more.
    auto H = draft_to_matrix(draft);

    auto Hs1 = peg_construct(ens_src, n, derive_seed(seed, 301), k1);
    auto Hs2 = peg_construct(ens_src, n, derive_seed(seed, 302), k2);
    return RelayCodebook(std::move(H), n, r1, r2, std::move(Hs1), std::move(Hs2));
}

} // namespace relaynet
