#pragma once

// Test-only dense GF(2) oracles, kept independent of the sparse
// implementation paths they check.

#include <cstdint>
#include <random>
#include <vector>

#include "relaynet/bit_vector.hpp"
#include "relaynet/sparse_matrix.hpp"

namespace testutil {

using DenseMat = std::vector<std::vector<int>>; // entries 0/1

inline DenseMat to_dense(const relaynet::SparseBinaryMatrix& H) {
    DenseMat D(H.n_rows(), std::vector<int>(H.n_cols(), 0));
    for (std::size_t i = 0; i < H.n_rows(); ++i)
        for (uint32_t c : H.row(i)) D[i][c] = 1;
    return D;
}

inline std::vector<int> dense_mat_vec(const DenseMat& D, const std::vector<int>& w) {
    std::vector<int> out(D.size(), 0);
    for (std::size_t i = 0; i < D.size(); ++i) {
        int acc = 0;
        for (std::size_t j = 0; j < w.size(); ++j) acc ^= D[i][j] & w[j];
        out[i] = acc;
    }
    return out;
}

inline std::size_t dense_rank(DenseMat D) {
    std::size_t rank = 0;
    std::size_t rows = D.size(), cols = rows ? D[0].size() : 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t piv = rank;
        while (piv < rows && D[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(D[piv], D[rank]);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r != rank && D[r][c]) {
                for (std::size_t j = c; j < cols; ++j) D[r][j] ^= D[rank][j];
            }
        }
        ++rank;
    }
    return rank;
}

// Dense solve of D x = b for square full-rank D; returns empty on failure.
inline std::vector<int> dense_solve(DenseMat D, std::vector<int> b) {
    const std::size_t n = D.size();
    std::vector<std::size_t> perm(n);
    std::size_t rank = 0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = rank;
        while (piv < n && D[piv][c] == 0) ++piv;
        if (piv == n) return {};
        std::swap(D[piv], D[rank]);
        std::swap(b[piv], b[rank]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r != rank && D[r][c]) {
                for (std::size_t j = 0; j < n; ++j) D[r][j] ^= D[rank][j];
                b[r] ^= b[rank];
            }
        }
        perm[rank] = c;
        ++rank;
    }
    std::vector<int> x(n, 0);
    for (std::size_t i = 0; i < n; ++i) x[perm[i]] = b[i];
    return x;
}

inline relaynet::SparseBinaryMatrix random_sparse(std::size_t m, std::size_t n, double density,
                                                  std::mt19937_64& rng) {
    std::bernoulli_distribution coin(density);
    std::vector<std::vector<uint32_t>> rows(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (coin(rng)) rows[i].push_back(static_cast<uint32_t>(j));
    return relaynet::SparseBinaryMatrix(m, n, std::move(rows));
}

inline relaynet::BitVector random_bits(std::size_t n, std::mt19937_64& rng) {
    relaynet::BitVector v(n);
    std::bernoulli_distribution coin(0.5);
    for (std::size_t i = 0; i < n; ++i) v.set(i, coin(rng));
    return v;
}

// Maximal stopping set contained in `erased`, by exhaustive subset search:
// S is a stopping set when every row meeting S meets it at least twice.
inline std::vector<uint32_t> brute_force_max_stopping_set(const relaynet::SparseBinaryMatrix& H,
                                                          const std::vector<uint32_t>& erased) {
    const std::size_t k = erased.size();
    uint64_t best = 0;
    std::size_t best_count = 0;
    for (uint64_t s = 1; s < (1ull << k); ++s) {
        bool stopping = true;
        for (std::size_t i = 0; i < H.n_rows() && stopping; ++i) {
            int hits = 0;
            for (std::size_t t = 0; t < k; ++t)
                if ((s >> t) & 1ull) hits += H.get(i, erased[t]) ? 1 : 0;
            if (hits == 1) stopping = false;
        }
        if (stopping) {
            best |= s; // union of stopping sets is a stopping set
        }
    }
    std::vector<uint32_t> out;
    for (std::size_t t = 0; t < k; ++t)
        if ((best >> t) & 1ull) out.push_back(erased[t]);
    (void)best_count;
    return out;
}

} // namespace testutil
