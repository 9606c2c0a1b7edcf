#include "relaynet/sparse_matrix.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace relaynet {

// alist-style format:
//   line 1: n_cols n_rows
//   line 2: max_col_deg max_row_deg
//   line 3: column degrees
//   line 4: row degrees
//   then per-column 1-based row indices, zero-padded to max_col_deg,
//   then per-row 1-based column indices, zero-padded to max_row_deg.
std::string alist_to_string(const SparseBinaryMatrix& H) {
    std::ostringstream os;
    const std::size_t m = H.n_rows(), n = H.n_cols();
    std::size_t max_col = 0, max_row = 0;
    for (std::size_t j = 0; j < n; ++j) max_col = std::max(max_col, H.col(j).size());
    for (std::size_t i = 0; i < m; ++i) max_row = std::max(max_row, H.row(i).size());
    os << n << ' ' << m << '\n';
    os << max_col << ' ' << max_row << '\n';
    for (std::size_t j = 0; j < n; ++j) os << H.col(j).size() << (j + 1 < n ? ' ' : '\n');
    if (n == 0) os << '\n';
    for (std::size_t i = 0; i < m; ++i) os << H.row(i).size() << (i + 1 < m ? ' ' : '\n');
    if (m == 0) os << '\n';
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < max_col; ++k) {
            std::size_t v = k < H.col(j).size() ? H.col(j)[k] + 1 : 0;
            os << v << (k + 1 < max_col ? ' ' : '\n');
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = 0; k < max_row; ++k) {
            std::size_t v = k < H.row(i).size() ? H.row(i)[k] + 1 : 0;
            os << v << (k + 1 < max_row ? ' ' : '\n');
        }
    }
    return os.str();
}

SparseBinaryMatrix alist_from_string(const std::string& text) {
    std::istringstream is(text);
    std::size_t n = 0, m = 0, max_col = 0, max_row = 0;
    if (!(is >> n >> m)) throw std::runtime_error("alist: bad header");
    if (!(is >> max_col >> max_row)) throw std::runtime_error("alist: bad degree header");
    std::vector<std::size_t> col_deg(n), row_deg(m);
    for (auto& d : col_deg) if (!(is >> d)) throw std::runtime_error("alist: bad column degrees");
    for (auto& d : row_deg) if (!(is >> d)) throw std::runtime_error("alist: bad row degrees");
    std::vector<std::vector<uint32_t>> rows(m);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < max_col; ++k) {
            long long v = 0;
            if (!(is >> v)) throw std::runtime_error("alist: truncated column lists");
            if (v == 0) continue; // tolerated padding
            if (v < 0 || static_cast<std::size_t>(v) > m) throw std::runtime_error("alist: row index out of range");
            rows[static_cast<std::size_t>(v - 1)].push_back(static_cast<uint32_t>(j));
        }
    }
    // Row lists are redundant with the column lists; consume and cross-check
    // the entry count when present.
    std::size_t listed = 0;
    long long v = 0;
    while (is >> v) if (v != 0) ++listed;
    SparseBinaryMatrix H(m, n, std::move(rows));
    if (listed != 0 && listed != H.n_entries())
        throw std::runtime_error("alist: row lists disagree with column lists");
    return H;
}

void write_alist(const SparseBinaryMatrix& H, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_alist: cannot open " + path);
    f << alist_to_string(H);
    if (!f) throw std::runtime_error("write_alist: write failed for " + path);
}

SparseBinaryMatrix read_alist(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("read_alist: cannot open " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return alist_from_string(buf.str());
}

} // namespace relaynet
