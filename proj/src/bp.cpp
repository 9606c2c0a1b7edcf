#include "relaynet/bp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace relaynet {

FactorGraph::FactorGraph(std::size_t n_vars, LlrVector priors) : priors_(std::move(priors)) {
    if (priors_.size() != n_vars) throw std::invalid_argument("FactorGraph: prior length mismatch");
}

void FactorGraph::add_check(const std::vector<uint32_t>& vars, bool target) {
    for (uint32_t v : vars)
        if (v >= priors_.size()) throw std::invalid_argument("FactorGraph: variable out of range");
    check_vars_.push_back(vars);
    targets_.push_back(target ? 1 : 0);
}

void FactorGraph::add_matrix(const SparseBinaryMatrix& H, uint32_t col_offset,
                             const BitVector* targets) {
    if (targets && targets->size() != H.n_rows())
        throw std::invalid_argument("FactorGraph: target length mismatch");
    for (std::size_t i = 0; i < H.n_rows(); ++i) {
        std::vector<uint32_t> vars;
        vars.reserve(H.row(i).size());
        for (uint32_t c : H.row(i)) vars.push_back(c + col_offset);
        add_check(vars, targets ? targets->get(i) : false);
    }
}

DecodeResult bp_decode(const FactorGraph& graph, const BpOptions& opt) {
    const std::size_t nv = graph.n_vars();
    const std::size_t nc = graph.n_checks();
    const double clamp = opt.clamp;

    // Fold pinned variables into the check targets; the compact graph holds
    // only free variables.
    std::vector<char> pinned(nv, 0);
    DecodeResult res;
    res.decisions = BitVector(nv);
    res.final_llrs.assign(nv, 0.0);
    for (std::size_t v = 0; v < nv; ++v) {
        double p = graph.priors()[v];
        if (std::isinf(p)) {
            pinned[v] = 1;
            res.decisions.set(v, p < 0);
            res.final_llrs[v] = p;
        }
    }

    // Edge arrays grouped by check.
    std::vector<uint32_t> check_ptr(nc + 1, 0);
    std::vector<uint8_t> target(nc);
    for (std::size_t c = 0; c < nc; ++c) {
        uint8_t t = graph.check_targets()[c];
        uint32_t deg = 0;
        for (uint32_t v : graph.check_lists()[c]) {
            if (pinned[v]) t ^= res.decisions.get(v) ? 1 : 0;
            else ++deg;
        }
        target[c] = t;
        check_ptr[c + 1] = check_ptr[c] + deg;
    }
    const std::size_t ne = check_ptr[nc];
    std::vector<uint32_t> edge_var(ne);
    {
        std::vector<uint32_t> fill(check_ptr.begin(), check_ptr.end() - 1);
        for (std::size_t c = 0; c < nc; ++c)
            for (uint32_t v : graph.check_lists()[c])
                if (!pinned[v]) edge_var[fill[c]++] = v;
    }
    std::vector<uint32_t> var_edge_ptr(nv + 1, 0);
    for (uint32_t v : edge_var) var_edge_ptr[v + 1]++;
    for (std::size_t v = 0; v < nv; ++v) var_edge_ptr[v + 1] += var_edge_ptr[v];
    std::vector<uint32_t> var_edges(ne);
    {
        std::vector<uint32_t> fill(var_edge_ptr.begin(), var_edge_ptr.end() - 1);
        for (std::size_t e = 0; e < ne; ++e) var_edges[fill[edge_var[e]]++] = static_cast<uint32_t>(e);
    }

    std::vector<double> v2c(ne, 0.0), c2v(ne, 0.0), total(nv, 0.0);

    auto decide = [&]() {
        for (std::size_t v = 0; v < nv; ++v) {
            if (pinned[v]) continue;
            double t = graph.priors()[v];
            for (uint32_t e = var_edge_ptr[v]; e < var_edge_ptr[v + 1]; ++e) t += c2v[var_edges[e]];
            total[v] = t;
            res.final_llrs[v] = t;
            res.decisions.set(v, t < 0.0);
        }
    };
    auto unsatisfied = [&]() {
        std::size_t bad = 0;
        for (std::size_t c = 0; c < nc; ++c) {
            int parity = target[c];
            for (uint32_t e = check_ptr[c]; e < check_ptr[c + 1]; ++e)
                parity ^= res.decisions.get(edge_var[e]) ? 1 : 0;
            bad += parity;
        }
        return bad;
    };

    decide();
    res.unsatisfied_checks = unsatisfied();
    if (res.unsatisfied_checks == 0) {
        res.converged = true;
        res.iterations_used = 0;
        return res;
    }

    std::vector<double> fwd, bwd;
    for (int iter = 1; iter <= opt.max_iters; ++iter) {
        // Variable pass: leave-one-out sums of the current check messages.
        for (std::size_t v = 0; v < nv; ++v) {
            if (pinned[v]) continue;
            double t = graph.priors()[v];
            for (uint32_t e = var_edge_ptr[v]; e < var_edge_ptr[v + 1]; ++e) t += c2v[var_edges[e]];
            for (uint32_t e = var_edge_ptr[v]; e < var_edge_ptr[v + 1]; ++e) {
                uint32_t eid = var_edges[e];
                double msg = t - c2v[eid];
                if (msg > clamp) msg = clamp;
                if (msg < -clamp) msg = -clamp;
                v2c[eid] = msg;
            }
        }
        // Check pass: exact tanh-domain update via forward/backward products.
        for (std::size_t c = 0; c < nc; ++c) {
            uint32_t first = check_ptr[c], last = check_ptr[c + 1];
            std::size_t deg = last - first;
            if (deg == 0) continue;
            fwd.assign(deg + 1, 1.0);
            bwd.assign(deg + 1, 1.0);
            for (std::size_t k = 0; k < deg; ++k)
                fwd[k + 1] = fwd[k] * std::tanh(0.5 * v2c[first + k]);
            for (std::size_t k = deg; k-- > 0;)
                bwd[k] = bwd[k + 1] * std::tanh(0.5 * v2c[first + k]);
            double sign = target[c] ? -1.0 : 1.0;
            for (std::size_t k = 0; k < deg; ++k) {
                double prod = sign * fwd[k] * bwd[k + 1];
                if (prod > 1.0 - 1e-15) prod = 1.0 - 1e-15;
                if (prod < -1.0 + 1e-15) prod = -1.0 + 1e-15;
                double msg = 2.0 * std::atanh(prod);
                if (msg > clamp) msg = clamp;
                if (msg < -clamp) msg = -clamp;
                c2v[first + k] = opt.damping * msg + (1.0 - opt.damping) * c2v[first + k];
            }
        }
        decide();
        res.unsatisfied_checks = unsatisfied();
        res.iterations_used = iter;
        if (res.unsatisfied_checks == 0) {
            res.converged = true;
            break;
        }
    }
    return res;
}

DecodeResult bp_channel_decode(const SparseBinaryMatrix& H, const LlrVector& priors,
                               int max_iters, double damping) {
    if (priors.size() != H.n_cols())
        throw std::invalid_argument("bp_channel_decode: prior length != n_cols");
    FactorGraph g(H.n_cols(), priors);
    g.add_matrix(H, 0, nullptr);
    BpOptions opt;
    opt.max_iters = max_iters;
    opt.damping = damping;
    return bp_decode(g, opt);
}

DecodeResult sw_source_decode(const SparseBinaryMatrix& Hs, const BitVector& syndrome,
                              const BitVector& side_info, double rho, int max_iters) {
    if (syndrome.size() != Hs.n_rows())
        throw std::invalid_argument("sw_source_decode: syndrome length != n_rows");
    if (side_info.size() != Hs.n_cols())
        throw std::invalid_argument("sw_source_decode: side info length != n_cols");
    FactorGraph g(Hs.n_cols(), correlation_llrs(rho, side_info));
    g.add_matrix(Hs, 0, &syndrome);
    BpOptions opt;
    opt.max_iters = max_iters;
    return bp_decode(g, opt);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Stage-1 priors over the columns of H = [H1 | H2 | H0]: own index pinned,
// other index unknown, parity columns from the channel.
LlrVector downlink_priors(const RelayCodebook& cb, int node, const BitVector& own_index,
                          const LlrVector& x_llr) {
    const std::size_t k1 = cb.k1(), k2 = cb.k2(), n = cb.block_length();
    if (x_llr.size() != n) throw std::invalid_argument("decode: x_llr length != n");
    std::size_t own_first = node == 0 ? 0 : k1;
    std::size_t own_len = node == 0 ? k1 : k2;
    if (own_index.size() != own_len) throw std::invalid_argument("decode: own index length");
    LlrVector priors(k1 + k2 + n, 0.0);
    for (std::size_t i = 0; i < own_len; ++i)
        priors[own_first + i] = own_index.get(i) ? -kInf : kInf;
    for (std::size_t i = 0; i < n; ++i) priors[k1 + k2 + i] = x_llr[i];
    return priors;
}

BitVector extract(const BitVector& all, std::size_t first, std::size_t len) {
    BitVector out(len);
    for (std::size_t i = 0; i < len; ++i) out.set(i, all.get(first + i));
    return out;
}

} // namespace

RelayDecodeResult separate_decode(const RelayCodebook& cb, int node, const BitVector& own_bits,
                                  const BitVector& own_index, const LlrVector& x_llr, double rho,
                                  const BpOptions& opt) {
    if (node != 0 && node != 1) throw std::invalid_argument("separate_decode: node must be 0 or 1");
    const std::size_t k1 = cb.k1(), k2 = cb.k2();
    FactorGraph g(cb.H().n_cols(), downlink_priors(cb, node, own_index, x_llr));
    g.add_matrix(cb.H(), 0, nullptr);
    DecodeResult stage1 = bp_decode(g, opt);

    std::size_t other_first = node == 0 ? k1 : 0;
    std::size_t other_len = node == 0 ? k2 : k1;
    BitVector b_other = extract(stage1.decisions, other_first, other_len);

    DecodeResult stage2 = sw_source_decode(cb.Hs(1 - node), b_other, own_bits, rho, opt.max_iters);

    RelayDecodeResult res;
    res.w_estimate = stage2.decisions;
    res.b_estimate = std::move(b_other);
    res.stage1_converged = stage1.converged;
    res.stage2_converged = stage2.converged;
    res.converged = stage1.converged && stage2.converged;
    res.iterations_used = stage1.iterations_used + stage2.iterations_used;
    res.unsatisfied_checks = stage1.unsatisfied_checks + stage2.unsatisfied_checks;
    return res;
}

RelayDecodeResult joint_decode(const RelayCodebook& cb, int node, const BitVector& own_bits,
                               const BitVector& own_index, const LlrVector& x_llr, double rho,
                               const BpOptions& opt) {
    if (node != 0 && node != 1) throw std::invalid_argument("joint_decode: node must be 0 or 1");
    const std::size_t k1 = cb.k1(), k2 = cb.k2(), n = cb.block_length();
    const std::size_t n_down = k1 + k2 + n;
    // Variable layout: [downlink columns b1 b2 x | other node's source block].
    LlrVector priors = downlink_priors(cb, node, own_index, x_llr);
    priors.resize(n_down + n);
    LlrVector corr = correlation_llrs(rho, own_bits);
    for (std::size_t i = 0; i < n; ++i) priors[n_down + i] = corr[i];

    FactorGraph g(n_down + n, std::move(priors));
    g.add_matrix(cb.H(), 0, nullptr);
    // Source checks of the other node: row i of Hs ties its w-support to bin
    // bit i (w Hs^T = b, so the bin bit joins the parity check).
    const SparseBinaryMatrix& Hs = cb.Hs(1 - node);
    std::size_t other_first = node == 0 ? k1 : 0;
    for (std::size_t i = 0; i < Hs.n_rows(); ++i) {
        std::vector<uint32_t> vars;
        vars.reserve(Hs.row(i).size() + 1);
        for (uint32_t c : Hs.row(i)) vars.push_back(static_cast<uint32_t>(n_down + c));
        vars.push_back(static_cast<uint32_t>(other_first + i));
        g.add_check(vars, false);
    }
    DecodeResult joint = bp_decode(g, opt);

    RelayDecodeResult res;
    res.w_estimate = extract(joint.decisions, n_down, n);
    std::size_t other_len = node == 0 ? k2 : k1;
    res.b_estimate = extract(joint.decisions, other_first, other_len);
    res.converged = joint.converged;
    res.stage1_converged = joint.converged;
    res.stage2_converged = joint.converged;
    res.iterations_used = joint.iterations_used;
    res.unsatisfied_checks = joint.unsatisfied_checks;
    return res;
}

} // namespace relaynet
