#include "relaynet/sparse_matrix.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace relaynet {

namespace {
constexpr uint32_t kNone = std::numeric_limits<uint32_t>::max();
}

SparseBinaryMatrix::SparseBinaryMatrix(std::size_t n_rows, std::size_t n_cols,
                                       std::vector<std::vector<uint32_t>> rows)
    : n_rows_(n_rows), n_cols_(n_cols), row_adj_(std::move(rows)) {
    if (row_adj_.size() != n_rows_)
        throw std::invalid_argument("SparseBinaryMatrix: row list size != n_rows");
    col_adj_.assign(n_cols_, {});
    for (std::size_t i = 0; i < n_rows_; ++i) {
        auto& r = row_adj_[i];
        std::sort(r.begin(), r.end());
        if (std::adjacent_find(r.begin(), r.end()) != r.end())
            throw std::invalid_argument("SparseBinaryMatrix: duplicate entry in row");
        for (uint32_t c : r) {
            if (c >= n_cols_) throw std::invalid_argument("SparseBinaryMatrix: column index out of range");
            col_adj_[c].push_back(static_cast<uint32_t>(i));
        }
        n_entries_ += r.size();
    }
}

bool SparseBinaryMatrix::get(std::size_t i, std::size_t j) const {
    const auto& r = row_adj_[i];
    return std::binary_search(r.begin(), r.end(), static_cast<uint32_t>(j));
}

SparseBinaryMatrix SparseBinaryMatrix::hconcat(const std::vector<const SparseBinaryMatrix*>& blocks) {
    if (blocks.empty()) throw std::invalid_argument("hconcat: no blocks");
    std::size_t m = blocks[0]->n_rows();
    std::size_t total_cols = 0;
    for (auto* b : blocks) {
        if (b->n_rows() != m) throw std::invalid_argument("hconcat: row count mismatch");
        total_cols += b->n_cols();
    }
    std::vector<std::vector<uint32_t>> rows(m);
    std::size_t offset = 0;
    for (auto* b : blocks) {
        for (std::size_t i = 0; i < m; ++i)
            for (uint32_t c : b->row(i)) rows[i].push_back(static_cast<uint32_t>(c + offset));
        offset += b->n_cols();
    }
    return SparseBinaryMatrix(m, total_cols, std::move(rows));
}

SparseBinaryMatrix SparseBinaryMatrix::col_slice(std::size_t first, std::size_t last) const {
    if (first > last || last > n_cols_) throw std::invalid_argument("col_slice: bad range");
    std::vector<std::vector<uint32_t>> rows(n_rows_);
    for (std::size_t i = 0; i < n_rows_; ++i)
        for (uint32_t c : row_adj_[i])
            if (c >= first && c < last) rows[i].push_back(static_cast<uint32_t>(c - first));
    return SparseBinaryMatrix(n_rows_, last - first, std::move(rows));
}

BitVector mat_vec_syndrome(const SparseBinaryMatrix& H, const BitVector& w) {
    if (w.size() != H.n_cols())
        throw std::invalid_argument("mat_vec_syndrome: vector length != n_cols");
    BitVector s(H.n_rows());
    for (std::size_t i = 0; i < H.n_rows(); ++i) {
        int parity = 0;
        for (uint32_t c : H.row(i)) parity ^= w.get(c) ? 1 : 0;
        if (parity) s.set(i, true);
    }
    return s;
}

PeelResult peel_erasures(const SparseBinaryMatrix& H, const BitVector& known_mask,
                         const BitVector& known_values) {
    const std::size_t m = H.n_rows(), n = H.n_cols();
    if (known_mask.size() != n || known_values.size() != n)
        throw std::invalid_argument("peel_erasures: mask/value length != n_cols");

    PeelResult res;
    res.values = BitVector(n);
    std::vector<char> known(n, 0);
    std::size_t n_unknown = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (known_mask.get(j)) {
            known[j] = 1;
            res.values.set(j, known_values.get(j));
        } else {
            ++n_unknown;
        }
    }

    // Per row: residual degree over unknown columns and accumulated parity of
    // the known ones.
    std::vector<uint32_t> deg(m, 0);
    std::vector<char> parity(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        for (uint32_t c : H.row(i)) {
            if (known[c]) parity[i] ^= res.values.get(c) ? 1 : 0;
            else ++deg[i];
        }
    }

    std::vector<uint32_t> queue;
    for (std::size_t i = 0; i < m; ++i) {
        if (deg[i] == 1) queue.push_back(static_cast<uint32_t>(i));
        else if (deg[i] == 0 && parity[i]) {
            res.status = PeelStatus::contradiction;
            res.conflicting_row = i;
            return res;
        }
    }

    while (!queue.empty()) {
        uint32_t r = queue.back();
        queue.pop_back();
        if (deg[r] != 1) continue;
        uint32_t target = kNone;
        for (uint32_t c : H.row(r)) if (!known[c]) { target = c; break; }
        bool value = parity[r] != 0;
        known[target] = 1;
        res.values.set(target, value);
        --n_unknown;
        for (uint32_t r2 : H.col(target)) {
            parity[r2] ^= value ? 1 : 0;
            if (--deg[r2] == 1) queue.push_back(r2);
            else if (deg[r2] == 0 && parity[r2]) {
                res.status = PeelStatus::contradiction;
                res.conflicting_row = r2;
                return res;
            }
        }
    }

    if (n_unknown > 0) {
        res.status = PeelStatus::stuck;
        for (std::size_t j = 0; j < n; ++j)
            if (!known[j]) res.residual.push_back(static_cast<uint32_t>(j));
    }
    return res;
}

Triangulation approximate_triangulate(const SparseBinaryMatrix& H) {
    const std::size_t m = H.n_rows(), n = H.n_cols();
    Triangulation tri;
    std::vector<char> col_done(n, 0), row_done(m, 0);
    std::vector<uint32_t> row_deg(m, 0);
    for (std::size_t i = 0; i < m; ++i) row_deg[i] = static_cast<uint32_t>(H.row(i).size());

    std::vector<uint32_t> deg1;
    deg1.reserve(m);
    for (std::size_t i = 0; i < m; ++i)
        if (row_deg[i] == 1) deg1.push_back(static_cast<uint32_t>(i));

    std::size_t cols_remaining = n;
    auto remove_column = [&](uint32_t c, bool as_gap) {
        col_done[c] = 1;
        --cols_remaining;
        if (as_gap) tri.gap_cols.push_back(c);
        for (uint32_t r : H.col(c)) {
            if (row_done[r]) continue;
            if (--row_deg[r] == 1) deg1.push_back(r);
        }
    };

    while (cols_remaining > 0) {
        // Extend the diagonal with a residual-degree-1 row, picking the one
        // whose active column index is lowest.
        uint32_t best_row = kNone, best_col = kNone;
        std::size_t w = 0;
        for (std::size_t k = 0; k < deg1.size(); ++k) {
            uint32_t r = deg1[k];
            if (row_done[r] || row_deg[r] != 1) continue;
            deg1[w++] = r;
            uint32_t c = kNone;
            for (uint32_t cc : H.row(r)) if (!col_done[cc]) { c = cc; break; }
            if (c < best_col) { best_col = c; best_row = r; }
        }
        deg1.resize(w);
        if (best_row != kNone) {
            row_done[best_row] = 1;
            tri.row_order.push_back(best_row);
            tri.col_order.push_back(best_col);
            remove_column(best_col, false);
            continue;
        }
        // Stuck: move the minimum-residual-degree active column to the gap
        // (lowest index on ties).
        uint32_t best = kNone;
        uint32_t best_deg = std::numeric_limits<uint32_t>::max();
        for (std::size_t j = 0; j < n; ++j) {
            if (col_done[j]) continue;
            uint32_t d = 0;
            for (uint32_t r : H.col(j)) if (!row_done[r]) ++d;
            if (d < best_deg) { best_deg = d; best = static_cast<uint32_t>(j); }
        }
        remove_column(best, true);
    }
    for (std::size_t i = 0; i < m; ++i)
        if (!row_done[i]) tri.leftover_rows.push_back(static_cast<uint32_t>(i));
    return tri;
}

Gf2Solver::Gf2Solver(SparseBinaryMatrix H) : H_(std::move(H)), tri_(approximate_triangulate(H_)) {
    const SparseBinaryMatrix& Hm = H_;
    const std::size_t m = Hm.n_rows(), n = Hm.n_cols();
    const std::size_t p = tri_.col_order.size();
    g_ = tri_.gap_cols.size();
    const std::size_t L = tri_.leftover_rows.size();
    const std::size_t mw = (g_ + 63) / 64;

    gap_index_of_col_.assign(n, kNone);
    for (std::size_t k = 0; k < g_; ++k) gap_index_of_col_[tri_.gap_cols[k]] = static_cast<uint32_t>(k);
    pivot_slot_of_row_.assign(m, kNone);
    pivot_slot_of_col_.assign(n, kNone);
    for (std::size_t i = 0; i < p; ++i) {
        pivot_slot_of_row_[tri_.row_order[i]] = static_cast<uint32_t>(i);
        pivot_slot_of_col_[tri_.col_order[i]] = static_cast<uint32_t>(i);
    }

    // M = T^{-1} B, one g-bit row per pivot in diagonal order:
    // M_i = B_i xor sum of M_j over earlier pivot columns in row i's support.
    std::vector<uint64_t> M(std::max<std::size_t>(1, p * mw), 0);
    for (std::size_t i = 0; i < p && g_ > 0; ++i) {
        uint64_t* Mi = &M[i * mw];
        for (uint32_t c : Hm.row(tri_.row_order[i])) {
            uint32_t gk = gap_index_of_col_[c];
            if (gk != kNone) {
                Mi[gk >> 6] ^= 1ull << (gk & 63);
                continue;
            }
            uint32_t ps = pivot_slot_of_col_[c];
            if (ps != kNone && ps < i) {
                const uint64_t* Mj = &M[ps * mw];
                for (std::size_t w = 0; w < mw; ++w) Mi[w] ^= Mj[w];
            }
        }
    }

    // Schur complement S = C M xor D over the leftover rows.
    std::vector<uint64_t> S(std::max<std::size_t>(1, L * mw), 0);
    for (std::size_t li = 0; li < L && g_ > 0; ++li) {
        uint64_t* Si = &S[li * mw];
        for (uint32_t c : Hm.row(tri_.leftover_rows[li])) {
            uint32_t gk = gap_index_of_col_[c];
            if (gk != kNone) {
                Si[gk >> 6] ^= 1ull << (gk & 63);
            } else {
                const uint64_t* Mj = &M[pivot_slot_of_col_[c] * mw];
                for (std::size_t w = 0; w < mw; ++w) Si[w] ^= Mj[w];
            }
        }
    }

    // Gauss-Jordan over [S | I]: rank of S and, when square and invertible,
    // the row combinations isolating each gap column.
    lw_ = (L + 63) / 64;
    std::vector<uint64_t> ident(std::max<std::size_t>(1, L * lw_), 0);
    for (std::size_t li = 0; li < L; ++li) ident[li * lw_ + (li >> 6)] = 1ull << (li & 63);
    std::vector<uint32_t> pivot_row_of_gapcol(g_, kNone);
    std::vector<char> row_used(L, 0);
    rank_ = p;
    for (std::size_t col = 0; col < g_; ++col) {
        std::size_t pr = kNone;
        for (std::size_t li = 0; li < L; ++li) {
            if (row_used[li]) continue;
            if ((S[li * mw + (col >> 6)] >> (col & 63)) & 1ull) { pr = li; break; }
        }
        if (pr == static_cast<std::size_t>(kNone)) {
            deficient_cols_.push_back(tri_.gap_cols[col]);
            continue;
        }
        row_used[pr] = 1;
        pivot_row_of_gapcol[col] = static_cast<uint32_t>(pr);
        ++rank_;
        for (std::size_t li = 0; li < L; ++li) {
            if (li == pr) continue;
            if ((S[li * mw + (col >> 6)] >> (col & 63)) & 1ull) {
                for (std::size_t w = 0; w < mw; ++w) S[li * mw + w] ^= S[pr * mw + w];
                for (std::size_t w = 0; w < lw_; ++w) ident[li * lw_ + w] ^= ident[pr * lw_ + w];
            }
        }
    }
    full_rank_ = (m == n) && (rank_ == n);
    if (full_rank_) {
        schur_inv_.assign(std::max<std::size_t>(1, g_ * lw_), 0);
        for (std::size_t col = 0; col < g_; ++col) {
            uint32_t pr = pivot_row_of_gapcol[col];
            for (std::size_t w = 0; w < lw_; ++w)
                schur_inv_[col * lw_ + w] = ident[pr * lw_ + w];
        }
    }
}

BitVector Gf2Solver::solve(const BitVector& rhs) const {
    if (!full_rank_) throw std::runtime_error("Gf2Solver: matrix is singular");
    if (rhs.size() != H_.n_rows()) throw std::invalid_argument("Gf2Solver::solve: rhs length mismatch");
    const std::size_t n = H_.n_cols();
    const std::size_t p = tri_.col_order.size();
    const std::size_t L = tri_.leftover_rows.size();
    const std::size_t g = tri_.gap_cols.size();

    // Forward substitution with gap columns held at zero: u = T^{-1} b_P.
    std::vector<char> u(p, 0);
    for (std::size_t i = 0; i < p; ++i) {
        char acc = rhs.get(tri_.row_order[i]) ? 1 : 0;
        for (uint32_t c : H_.row(tri_.row_order[i])) {
            if (gap_index_of_col_[c] != kNone) continue;
            uint32_t ps = pivot_slot_of_col_[c];
            if (ps < i) acc ^= u[ps];
        }
        u[i] = acc;
    }

    // v = b_R xor C u over leftover rows; then x_G = S^{-1} v.
    std::vector<char> v(L, 0);
    for (std::size_t li = 0; li < L; ++li) {
        char acc = rhs.get(tri_.leftover_rows[li]) ? 1 : 0;
        for (uint32_t c : H_.row(tri_.leftover_rows[li])) {
            if (gap_index_of_col_[c] != kNone) continue;
            acc ^= u[pivot_slot_of_col_[c]];
        }
        v[li] = acc;
    }
    std::vector<char> xg(g, 0);
    for (std::size_t k = 0; k < g; ++k) {
        const uint64_t* row = &schur_inv_[k * lw_];
        int acc = 0;
        for (std::size_t w = 0; w < lw_; ++w) {
            uint64_t bits = row[w];
            while (bits) {
                std::size_t b = static_cast<std::size_t>(__builtin_ctzll(bits));
                acc ^= v[w * 64 + b];
                bits &= bits - 1;
            }
        }
        xg[k] = static_cast<char>(acc);
    }

    // Final forward substitution with the gap contribution folded in.
    BitVector x(n);
    for (std::size_t k = 0; k < g; ++k) if (xg[k]) x.set(tri_.gap_cols[k], true);
    std::vector<char> xp(p, 0);
    for (std::size_t i = 0; i < p; ++i) {
        char acc = rhs.get(tri_.row_order[i]) ? 1 : 0;
        for (uint32_t c : H_.row(tri_.row_order[i])) {
            uint32_t gk = gap_index_of_col_[c];
            if (gk != kNone) { acc ^= xg[gk]; continue; }
            uint32_t ps = pivot_slot_of_col_[c];
            if (ps < i) acc ^= xp[ps];
        }
        xp[i] = acc;
        if (acc) x.set(tri_.col_order[i], true);
    }
    return x;
}

std::size_t gf2_rank(const SparseBinaryMatrix& H) {
    return Gf2Solver(H).rank();
}

BitVector solve_relay_parity(const SparseBinaryMatrix& H0, const BitVector& rhs) {
    if (H0.n_rows() != H0.n_cols())
        throw std::invalid_argument("solve_relay_parity: H0 must be square");
    Gf2Solver solver(H0);
    if (!solver.full_rank())
        throw std::runtime_error("solve_relay_parity: H0 is rank deficient");
    return solver.solve(rhs);
}

} // namespace relaynet
