#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relaynet/bit_vector.hpp"

namespace relaynet {

// Sparse matrix over GF(2) held as mirrored row/column adjacency lists.
// Immutable after construction; safe to share across threads.
class SparseBinaryMatrix {
public:
    SparseBinaryMatrix() = default;

    // rows[i] lists the column indices of the 1-entries of row i.
    // Entries are sorted internally; duplicates are rejected.
    SparseBinaryMatrix(std::size_t n_rows, std::size_t n_cols,
                       std::vector<std::vector<uint32_t>> rows);

    std::size_t n_rows() const { return n_rows_; }
    std::size_t n_cols() const { return n_cols_; }
    std::size_t n_entries() const { return n_entries_; }

    const std::vector<uint32_t>& row(std::size_t i) const { return row_adj_[i]; }
    const std::vector<uint32_t>& col(std::size_t j) const { return col_adj_[j]; }
    const std::vector<std::vector<uint32_t>>& rows() const { return row_adj_; }
    const std::vector<std::vector<uint32_t>>& cols() const { return col_adj_; }

    bool get(std::size_t i, std::size_t j) const;

    // Horizontal concatenation [A | B]; row counts must match.
    static SparseBinaryMatrix hconcat(const std::vector<const SparseBinaryMatrix*>& blocks);

    // Column slice [first, last).
    SparseBinaryMatrix col_slice(std::size_t first, std::size_t last) const;

private:
    std::size_t n_rows_ = 0;
    std::size_t n_cols_ = 0;
    std::size_t n_entries_ = 0;
    std::vector<std::vector<uint32_t>> row_adj_;
    std::vector<std::vector<uint32_t>> col_adj_;
};

// s_i = XOR of w over the support of row i (s = H * w over GF(2)).
BitVector mat_vec_syndrome(const SparseBinaryMatrix& H, const BitVector& w);

// Rank over GF(2).
std::size_t gf2_rank(const SparseBinaryMatrix& H);

enum class PeelStatus { resolved, stuck, contradiction };

struct PeelResult {
    PeelStatus status = PeelStatus::resolved;
    // Values for every column (known columns keep their input value).
    BitVector values;
    // Unknown columns left after peeling; by construction a stopping set.
    std::vector<uint32_t> residual;
    // Row where a fully-known check had odd parity (contradiction only).
    std::size_t conflicting_row = 0;
};

// Iteratively solves checks with exactly one unknown column, assuming
// H * w = 0 for the completed vector. Columns with known_mask set carry
// known_values; all others start unknown.
PeelResult peel_erasures(const SparseBinaryMatrix& H, const BitVector& known_mask,
                         const BitVector& known_values);

struct Triangulation {
    // Pivot columns/rows in diagonal order; row_order[i] has support within
    // col_order[0..i] plus gap columns.
    std::vector<uint32_t> col_order;
    std::vector<uint32_t> row_order;
    std::vector<uint32_t> gap_cols;
    std::vector<uint32_t> leftover_rows;
    std::size_t gap() const { return gap_cols.size(); }
};

// Greedy approximate lower triangulation by row/column permutation only.
// When stuck, the minimum-residual-degree column (lowest index on ties)
// is moved to the gap.
Triangulation approximate_triangulate(const SparseBinaryMatrix& H);

// LU-style factorization built on the triangulation; solves H * x = rhs
// repeatedly without refactoring. Keeps its own copy of the matrix.
class Gf2Solver {
public:
    explicit Gf2Solver(SparseBinaryMatrix H);

    bool full_rank() const { return full_rank_; }
    std::size_t rank() const { return rank_; }
    std::size_t gap() const { return tri_.gap(); }
    // Gap columns that elimination could not pivot (full_rank() == false).
    const std::vector<uint32_t>& deficient_cols() const { return deficient_cols_; }

    // Throws std::runtime_error when the matrix is singular.
    BitVector solve(const BitVector& rhs) const;

private:
    SparseBinaryMatrix H_;
    Triangulation tri_;
    bool full_rank_ = false;
    std::size_t rank_ = 0;
    std::vector<uint32_t> deficient_cols_;
    std::size_t g_ = 0, lw_ = 0;
    std::vector<uint64_t> schur_inv_;            // g rows of leftover-row combos
    std::vector<uint32_t> gap_index_of_col_;     // n_cols -> gap slot or npos
    std::vector<uint32_t> pivot_slot_of_row_;    // n_rows -> pivot slot or npos
    std::vector<uint32_t> pivot_slot_of_col_;    // n_cols -> pivot slot or npos
};

// Solves x * H0^T = rhs (equivalently H0 x = rhs for symmetric use here)
// for square full-rank H0. Hard error when H0 is singular.
BitVector solve_relay_parity(const SparseBinaryMatrix& H0, const BitVector& rhs);

// alist-style text format (see docs in the implementation).
void write_alist(const SparseBinaryMatrix& H, const std::string& path);
SparseBinaryMatrix read_alist(const std::string& path);
std::string alist_to_string(const SparseBinaryMatrix& H);
SparseBinaryMatrix alist_from_string(const std::string& text);

} // namespace relaynet
