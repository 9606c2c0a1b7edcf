#include "relaynet/info_region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "relaynet/linprog.hpp"

namespace relaynet {

namespace {

constexpr double kStrictEps = 1e-9; // slack below which an inequality counts as tight

double xlog2x(double p) {
    return p > 0.0 ? p * std::log2(p) : 0.0;
}

double softplus(double x) {
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

} // namespace

JointPmf::JointPmf(std::vector<std::size_t> alphabet_sizes, std::vector<double> probs)
    : sizes_(std::move(alphabet_sizes)), probs_(std::move(probs)) {
    if (sizes_.empty()) throw std::invalid_argument("JointPmf: no variables");
    if (sizes_.size() > 20) throw std::invalid_argument("JointPmf: too many variables");
    std::size_t cells = 1;
    for (std::size_t k : sizes_) {
        if (k < 1) throw std::invalid_argument("JointPmf: empty alphabet");
        cells *= k;
    }
    if (probs_.size() != cells)
        throw std::invalid_argument("JointPmf: table length != product of cardinalities");
    double sum = 0.0;
    for (double p : probs_) {
        if (p < 0.0) throw std::invalid_argument("JointPmf: negative probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("JointPmf: probabilities sum to " + std::to_string(sum));
}

double JointPmf::subset_entropy(uint32_t mask) const {
    const std::size_t L = sizes_.size();
    if (mask == 0) return 0.0;
    if (mask >= (1u << L)) throw std::invalid_argument("subset_entropy: mask out of range");

    std::size_t marg_cells = 1;
    for (std::size_t l = 0; l < L; ++l)
        if (mask & (1u << l)) marg_cells *= sizes_[l];
    std::vector<double> marg(marg_cells, 0.0);

    std::vector<std::size_t> idx(L, 0);
    for (std::size_t cell = 0; cell < probs_.size(); ++cell) {
        std::size_t key = 0;
        for (std::size_t l = 0; l < L; ++l)
            if (mask & (1u << l)) key = key * sizes_[l] + idx[l];
        marg[key] += probs_[cell];
        for (std::size_t l = L; l-- > 0;) {
            if (++idx[l] < sizes_[l]) break;
            idx[l] = 0;
        }
    }
    double h = 0.0;
    for (double p : marg) h -= xlog2x(p);
    return h;
}

JointPmf JointPmf::parse(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    std::vector<std::string> tokens;
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) tokens.push_back(tok);
    }
    if (tokens.empty()) throw std::runtime_error("JointPmf::parse: empty input");
    std::size_t pos = 0;
    std::size_t L = std::stoul(tokens[pos++]);
    if (L == 0 || pos + L > tokens.size()) throw std::runtime_error("JointPmf::parse: bad header");
    std::vector<std::size_t> sizes(L);
    std::size_t cells = 1;
    for (std::size_t l = 0; l < L; ++l) {
        sizes[l] = std::stoul(tokens[pos++]);
        cells *= sizes[l];
    }
    if (tokens.size() - pos != cells)
        throw std::runtime_error("JointPmf::parse: expected " + std::to_string(cells) + " probabilities");
    std::vector<double> probs(cells);
    for (std::size_t i = 0; i < cells; ++i) probs[i] = std::stod(tokens[pos++]);
    return JointPmf(std::move(sizes), std::move(probs));
}

std::string JointPmf::format() const {
    std::ostringstream os;
    os << sizes_.size();
    for (std::size_t k : sizes_) os << ' ' << k;
    os << '\n';
    os.precision(17);
    for (double p : probs_) os << p << '\n';
    return os.str();
}

DsbsSource::DsbsSource(double rho_) : rho(rho_) {
    if (!(rho > 0.0 && rho < 0.5))
        throw std::domain_error("DsbsSource: rho must lie in (0, 1/2)");
}

JointPmf DsbsSource::to_joint_pmf() const {
    double agree = 0.5 * (1.0 - rho), differ = 0.5 * rho;
    return JointPmf({2, 2}, {agree, differ, differ, agree});
}

RegionQuery::RegionQuery(JointPmf src, std::vector<double> up, std::vector<double> down)
    : source(std::move(src)), uplink_capacities(std::move(up)), downlink_mutuals(std::move(down)) {
    const std::size_t L = source.num_vars();
    if (uplink_capacities.size() != L || downlink_mutuals.size() != L)
        throw std::invalid_argument("RegionQuery: capacity lists must have one entry per node");
    for (double c : uplink_capacities)
        if (c < 0.0) throw std::invalid_argument("RegionQuery: negative uplink capacity");
    for (double d : downlink_mutuals)
        if (d < 0.0) throw std::invalid_argument("RegionQuery: negative downlink mutual information");
}

double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binary_entropy: p outside [0,1]");
    return -xlog2x(p) - xlog2x(1.0 - p);
}

double bsc_capacity(double crossover) {
    if (!(crossover >= 0.0 && crossover <= 0.5))
        throw std::domain_error("bsc_capacity: crossover outside [0, 1/2]");
    return 1.0 - binary_entropy(crossover);
}

double biawgn_capacity(double sigma2) {
    if (!(sigma2 > 0.0)) throw std::domain_error("biawgn_capacity: sigma2 must be positive");
    const double sigma = std::sqrt(sigma2);
    // C = 1 - E_{z~N(0,1)}[ log2(1 + exp(-2(1+sigma z)/sigma2)) ], composite
    // Simpson over |z| <= 12 (the discarded Gaussian tail is ~1e-32).
    const int n = 8000; // even
    const double a = -12.0, b = 12.0, h = (b - a) / n;
    const double inv_sqrt2pi = 0.3989422804014326779;
    auto f = [&](double z) {
        double e = -2.0 * (1.0 + sigma * z) / sigma2;
        return inv_sqrt2pi * std::exp(-0.5 * z * z) * softplus(e);
    };
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    double expectation = acc * h / 3.0 / std::log(2.0);
    double c = 1.0 - expectation;
    if (c < 0.0) c = 0.0;
    if (c > 1.0) c = 1.0;
    return c;
}

double biawgn_sigma2_for_capacity(double capacity) {
    if (!(capacity > 0.0 && capacity < 1.0))
        throw std::domain_error("biawgn_sigma2_for_capacity: capacity outside (0,1)");
    double lo = 1e-6, hi = 1e6;
    for (int it = 0; it < 200; ++it) {
        double mid = std::sqrt(lo * hi);
        if (biawgn_capacity(mid) > capacity) lo = mid;
        else hi = mid;
    }
    return std::sqrt(lo * hi);
}

double conditional_entropy(const JointPmf& pmf, const std::vector<std::size_t>& target_set,
                           const std::vector<std::size_t>& given_set) {
    const std::size_t L = pmf.num_vars();
    if (target_set.empty()) throw std::invalid_argument("conditional_entropy: empty target set");
    uint32_t t_mask = 0, g_mask = 0;
    for (std::size_t v : target_set) {
        if (v >= L) throw std::out_of_range("conditional_entropy: target index out of range");
        t_mask |= 1u << v;
    }
    for (std::size_t v : given_set) {
        if (v >= L) throw std::out_of_range("conditional_entropy: given index out of range");
        g_mask |= 1u << v;
    }
    if (t_mask & g_mask) throw std::invalid_argument("conditional_entropy: sets must be disjoint");
    return pmf.subset_entropy(t_mask | g_mask) - pmf.subset_entropy(g_mask);
}

namespace {

double subset_conditional_entropy(const JointPmf& pmf, uint32_t subset) {
    uint32_t full = (1u << pmf.num_vars()) - 1u;
    uint32_t complement = full & ~subset;
    return pmf.subset_entropy(full) - pmf.subset_entropy(complement);
}

} // namespace

JsccReport check_jscc_achievable(const RegionQuery& q) {
    const std::size_t L = q.num_nodes();
    if (L < 2) throw std::invalid_argument("check_jscc_achievable: need at least two nodes");
    const uint32_t full = (1u << L) - 1u;
    JsccReport rep;
    rep.min_slack = std::numeric_limits<double>::infinity();

    for (uint32_t mask = 1; mask < full; ++mask) {
        InequalityReport r;
        r.kind = InequalityReport::Kind::uplink_subset;
        r.subset_mask = mask;
        r.lhs = subset_conditional_entropy(q.source, mask);
        r.rhs = 0.0;
        for (std::size_t l = 0; l < L; ++l)
            if (mask & (1u << l)) r.rhs += q.uplink_capacities[l];
        rep.min_slack = std::min(rep.min_slack, r.slack());
        rep.inequalities.push_back(r);
    }
    for (std::size_t l = 0; l < L; ++l) {
        InequalityReport r;
        r.kind = InequalityReport::Kind::downlink_node;
        r.subset_mask = 1u << l;
        r.lhs = subset_conditional_entropy(q.source, full & ~(1u << l));
        r.rhs = q.downlink_mutuals[l];
        rep.min_slack = std::min(rep.min_slack, r.slack());
        rep.inequalities.push_back(r);
    }

    bool violated = false, tight = false;
    for (const auto& r : rep.inequalities) {
        if (r.slack() < -kStrictEps) violated = true;
        else if (r.slack() <= kStrictEps) tight = true;
    }
    rep.verdict = violated ? RegionVerdict::not_achievable
                : tight    ? RegionVerdict::boundary
                           : RegionVerdict::achievable;
    return rep;
}

SeparationResult check_separation_feasible(const RegionQuery& q) {
    const std::size_t L = q.num_nodes();
    if (L < 2) throw std::invalid_argument("check_separation_feasible: need at least two nodes");
    if (L > 16) throw std::invalid_argument("check_separation_feasible: subset enumeration capped at L=16");
    const uint32_t full = (1u << L) - 1u;

    // Feasibility of (strict) subset-sum bounds, relaxed to slack >= eps, as
    // the LP "maximize the minimum slack t":
    //   lower S: sum_{l in S} r_l - t >= H(W_S | W_{S^c})
    //   upper S: sum_{l in S} r_l + t <= sum_{l in S} C_l
    //   node  l: sum_{k != l} r_k + t <= I(X0;Y_l)
    // with r >= 0 and t shifted by T0 to keep the origin feasible.
    struct Row {
        CertificateTerm term;   // identity of the constraint
        bool is_lower;
        double bound;           // H (lower) or capacity side (upper)
    };
    std::vector<Row> rows;
    for (uint32_t mask = 1; mask < full; ++mask) {
        double hs = subset_conditional_entropy(q.source, mask);
        rows.push_back({{InequalityReport::Kind::uplink_subset, mask, 0.0}, true, hs});
        double cs = 0.0;
        for (std::size_t l = 0; l < L; ++l)
            if (mask & (1u << l)) cs += q.uplink_capacities[l];
        rows.push_back({{InequalityReport::Kind::uplink_subset, mask, 0.0}, false, cs});
    }
    for (std::size_t l = 0; l < L; ++l) {
        rows.push_back({{InequalityReport::Kind::downlink_node, static_cast<uint32_t>(1u << l), 0.0},
                        false, q.downlink_mutuals[l]});
    }

    double T0 = 1.0;
    for (const auto& r : rows)
        if (r.is_lower) T0 = std::max(T0, r.bound + 1.0);

    const std::size_t nv = L + 1; // r_0..r_{L-1}, t' = t + T0
    std::vector<std::vector<double>> A;
    std::vector<double> b;
    for (const auto& row : rows) {
        std::vector<double> a(nv, 0.0);
        uint32_t members = row.term.kind == InequalityReport::Kind::uplink_subset
                               ? row.term.subset_mask
                               : (full & ~row.term.subset_mask);
        double sign = row.is_lower ? -1.0 : 1.0;
        for (std::size_t l = 0; l < L; ++l)
            if (members & (1u << l)) a[l] = sign;
        a[L] = 1.0;
        A.push_back(std::move(a));
        b.push_back(row.is_lower ? T0 - row.bound : T0 + row.bound);
    }
    std::vector<double> c(nv, 0.0);
    c[L] = 1.0;

    auto lp = detail::simplex_max(A, b, c);
    double t_star = lp.objective - T0;

    SeparationResult res;
    res.max_min_slack = t_star;
    if (t_star >= kStrictEps) {
        res.feasible = true;
        res.witness.rates.assign(lp.x.begin(), lp.x.begin() + L);
        return res;
    }

    res.feasible = false;
    double lower_value = 0.0, upper_value = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        double y = lp.dual[i];
        if (y <= 1e-12) continue;
        CertificateTerm term = rows[i].term;
        term.weight = y;
        if (rows[i].is_lower) {
            res.lower_terms.push_back(term);
            lower_value += y * rows[i].bound;
        } else {
            res.upper_terms.push_back(term);
            upper_value += y * rows[i].bound;
        }
    }
    res.lower_value = lower_value;
    res.upper_value = upper_value;
    return res;
}

JointPmf build_appendix_b_source() {
    // Six independent Bernoulli bits; W1 = U1^U12^U13, W2 = U2^U12^U23,
    // W3 = U3^U13^U23.
    const double p[6] = {0.0085, 0.0052, 0.0052, 0.0128, 0.0128, 0.138};
    std::vector<double> table(8, 0.0);
    for (unsigned u = 0; u < 64; ++u) {
        double pr = 1.0;
        int bit[6];
        for (int i = 0; i < 6; ++i) {
            bit[i] = (u >> i) & 1;
            pr *= bit[i] ? p[i] : (1.0 - p[i]);
        }
        int w1 = bit[0] ^ bit[3] ^ bit[4];
        int w2 = bit[1] ^ bit[3] ^ bit[5];
        int w3 = bit[2] ^ bit[4] ^ bit[5];
        table[static_cast<std::size_t>((w1 << 2) | (w2 << 1) | w3)] += pr;
    }
    return JointPmf({2, 2, 2}, std::move(table));
}

RegionQuery build_appendix_b_query() {
    JointPmf src = build_appendix_b_source();
    std::vector<double> up(3, 2.0);
    std::vector<double> down = {bsc_capacity(0.0508), bsc_capacity(0.184), bsc_capacity(0.184)};
    return RegionQuery(std::move(src), std::move(up), std::move(down));
}

} // namespace relaynet
