#include "relaynet/density_evolution.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "relaynet/info_region.hpp"

namespace relaynet {

namespace {

inline std::size_t fast_range(uint64_t word, std::size_t n) {
    return static_cast<std::size_t>((static_cast<__uint128_t>(word) * n) >> 64);
}

struct PriorSampler {
    DePrior kind;
    double a = 0.0, b = 0.0; // bsc: +/-a with P(-)=b; biawgn: mean a, sd b; bec: 0 w.p. b else a
    double clamp;

    double sample(std::mt19937_64& rng, std::normal_distribution<double>& gauss) const {
        switch (kind) {
            case DePrior::none: return 0.0;
            case DePrior::known: return clamp;
            case DePrior::bsc_correlation:
                return (rng() < bar) ? -a : a;
            case DePrior::bec:
                return (rng() < bar) ? 0.0 : a;
            case DePrior::biawgn: return a + b * gauss(rng);
        }
        return 0.0;
    }
    uint64_t bar = 0; // P(branch) scaled to 2^64
};

PriorSampler make_sampler(DePrior kind, const DeSystem& sys, double clamp) {
    PriorSampler s;
    s.kind = kind;
    s.clamp = clamp;
    switch (kind) {
        case DePrior::bsc_correlation: {
            s.a = std::log((1.0 - sys.rho) / sys.rho);
            s.b = sys.rho;
            break;
        }
        case DePrior::biawgn: {
            s.a = 2.0 / sys.sigma2;
            s.b = 2.0 / std::sqrt(sys.sigma2);
            break;
        }
        case DePrior::bec: {
            s.a = clamp;
            s.b = sys.eps;
            break;
        }
        default: break;
    }
    s.bar = static_cast<uint64_t>(s.b * 18446744073709551615.0);
    return s;
}

} // namespace

DePoint de_run_system(const DeSystem& sys, const DeOptions& opt) {
    const std::size_t T = sys.edge_types.size();
    const std::size_t pop = opt.pop_size;
    if (pop < 1000) throw std::invalid_argument("de_run_system: population too small");
    std::mt19937_64 rng(derive_seed(opt.seed, 7777));
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double clamp = opt.clamp;

    // Which edge types have a symbolically known variable side.
    std::vector<char> type_known(T, 1);
    for (const auto& v : sys.var_profiles)
        for (std::size_t t = 0; t < T; ++t)
            if (v.degrees[t] > 0 && v.prior != DePrior::known) type_known[t] = 0;

    // Edge-perspective profile tables per type.
    struct Pick {
        std::vector<double> cume;
        std::vector<uint32_t> profile;
    };
    auto build_pick = [&](auto const& profiles, std::size_t t) {
        Pick p;
        double tot = 0.0;
        for (std::size_t i = 0; i < profiles.size(); ++i)
            tot += profiles[i].weight * profiles[i].degrees[t];
        double acc = 0.0;
        for (std::size_t i = 0; i < profiles.size(); ++i) {
            double w = profiles[i].weight * profiles[i].degrees[t];
            if (w <= 0.0) continue;
            acc += w / tot;
            p.cume.push_back(acc);
            p.profile.push_back(static_cast<uint32_t>(i));
        }
        if (!p.cume.empty()) p.cume.back() = 1.0;
        return p;
    };
    std::vector<Pick> var_pick(T), chk_pick(T);
    for (std::size_t t = 0; t < T; ++t) {
        if (type_known[t]) continue;
        var_pick[t] = build_pick(sys.var_profiles, t);
        chk_pick[t] = build_pick(sys.check_profiles, t);
        if (var_pick[t].cume.empty() || chk_pick[t].cume.empty())
            throw std::invalid_argument("de_run_system: edge type with no endpoints");
    }

    std::vector<PriorSampler> samplers;
    for (const auto& v : sys.var_profiles) samplers.push_back(make_sampler(v.prior, sys, clamp));

    // Error-class node-perspective profile table.
    std::vector<uint32_t> err_profiles;
    std::vector<double> err_cume;
    {
        double tot = 0.0;
        for (const auto& v : sys.var_profiles)
            if (v.error_class) tot += v.weight;
        if (tot <= 0.0) throw std::invalid_argument("de_run_system: no error class");
        double acc = 0.0;
        for (std::size_t i = 0; i < sys.var_profiles.size(); ++i) {
            if (!sys.var_profiles[i].error_class) continue;
            acc += sys.var_profiles[i].weight / tot;
            err_profiles.push_back(static_cast<uint32_t>(i));
            err_cume.push_back(acc);
        }
        err_cume.back() = 1.0;
    }

    std::uniform_real_distribution<double> unif(0.0, 1.0);
    auto pick_from = [&](const Pick& p) -> uint32_t {
        double u = unif(rng);
        for (std::size_t i = 0; i < p.cume.size(); ++i)
            if (u <= p.cume[i]) return p.profile[i];
        return p.profile.back();
    };

    std::vector<std::vector<double>> v2c(T, std::vector<double>(pop, 0.0));
    std::vector<std::vector<double>> c2v(T, std::vector<double>(pop, 0.0));

    auto draw_c2v = [&](std::size_t t) { return c2v[t][fast_range(rng(), pop)]; };
    auto draw_v2c_tanh = [&](std::size_t t) {
        return std::tanh(0.5 * v2c[t][fast_range(rng(), pop)]);
    };

    DePoint out;
    out.rho = sys.rho;
    out.sigma2_d = sys.sigma2;
    std::vector<double> history;
    history.reserve(opt.max_iters);

    for (int iter = 1; iter <= opt.max_iters; ++iter) {
        // Variable-side update.
        for (std::size_t t = 0; t < T; ++t) {
            if (type_known[t]) continue;
            auto& dst = v2c[t];
            for (std::size_t i = 0; i < pop; ++i) {
                uint32_t pi = pick_from(var_pick[t]);
                const auto& prof = sys.var_profiles[pi];
                double x = samplers[pi].sample(rng, gauss);
                for (std::size_t t2 = 0; t2 < T; ++t2) {
                    int reps = prof.degrees[t2] - (t2 == t ? 1 : 0);
                    for (int r = 0; r < reps; ++r) x += draw_c2v(t2);
                }
                if (x > clamp) x = clamp;
                if (x < -clamp) x = -clamp;
                dst[i] = x;
            }
        }
        // Check-side update.
        std::vector<std::vector<double>> c2v_new(T);
        for (std::size_t t = 0; t < T; ++t) {
            if (type_known[t]) { c2v_new[t] = c2v[t]; continue; }
            c2v_new[t].resize(pop);
            for (std::size_t i = 0; i < pop; ++i) {
                uint32_t pi = pick_from(chk_pick[t]);
                const auto& prof = sys.check_profiles[pi];
                double prod = 1.0;
                for (std::size_t t2 = 0; t2 < T; ++t2) {
                    if (type_known[t2]) continue; // tanh factor exactly +1
                    int reps = prof.degrees[t2] - (t2 == t ? 1 : 0);
                    for (int r = 0; r < reps; ++r) prod *= draw_v2c_tanh(t2);
                }
                if (prod > 1.0 - 1e-15) prod = 1.0 - 1e-15;
                if (prod < -1.0 + 1e-15) prod = -1.0 + 1e-15;
                double m = 2.0 * std::atanh(prod);
                if (m > clamp) m = clamp;
                if (m < -clamp) m = -clamp;
                c2v_new[t][i] = m;
            }
        }
        c2v.swap(c2v_new);

        // Residual error from full variable LLRs of the error class.
        std::size_t neg = 0, zero = 0;
        for (std::size_t i = 0; i < pop; ++i) {
            double u = unif(rng);
            uint32_t pi = err_profiles[0];
            for (std::size_t k = 0; k < err_cume.size(); ++k)
                if (u <= err_cume[k]) { pi = err_profiles[k]; break; }
            const auto& prof = sys.var_profiles[pi];
            double x = samplers[pi].sample(rng, gauss);
            for (std::size_t t2 = 0; t2 < T; ++t2)
                for (int r = 0; r < prof.degrees[t2]; ++r) x += draw_c2v(t2);
            if (x < 0.0) ++neg;
            else if (x == 0.0) ++zero;
        }
        double err = (static_cast<double>(neg) + 0.5 * static_cast<double>(zero)) /
                     static_cast<double>(pop);
        history.push_back(err);
        out.residual_error = err;
        out.iterations = iter;
        if (err < opt.target_error) {
            out.converged = true;
            return out;
        }
        // Fixed-point detection: no meaningful progress across two long
        // windows. Near-threshold convergent runs keep inching down, so the
        // comparison is deliberately loose.
        const int w = 100;
        if (iter >= 2 * w + 20 && err > 20 * opt.target_error) {
            double recent = *std::min_element(history.end() - w, history.end());
            double before = *std::min_element(history.end() - 2 * w, history.end() - w);
            if (recent > 0.97 * before && err > 2e-3) return out;
        }
    }
    return out;
}

DeSystem source_de_system(const MultiEdgeEnsemble& ens_src, double rho) {
    if (ens_src.kind() != MultiEdgeEnsemble::Kind::source)
        throw std::invalid_argument("source_de_system: need a source ensemble");
    if (!(rho > 0.0 && rho < 0.5)) throw std::domain_error("source_de_system: rho outside (0,1/2)");
    DeSystem sys;
    sys.edge_types = {"w"};
    sys.rho = rho;
    auto nf = ens_src.lambda_node_fractions();
    for (const auto& [d, f] : nf)
        sys.var_profiles.push_back({f, {d}, DePrior::bsc_correlation, true});
    sys.check_profiles.push_back({1.0, {ens_src.d_w()}});
    return sys;
}

namespace {

void apply_channel(DeSystem& sys, const ChannelModel& ch) {
    switch (ch.kind) {
        case ChannelKind::biawgn: sys.sigma2 = ch.param; break;
        case ChannelKind::bec: sys.eps = ch.param; break;
        default: throw std::invalid_argument("density evolution: channel must be biawgn or bec");
    }
}

DePrior channel_prior(const ChannelModel& ch) {
    return ch.kind == ChannelKind::biawgn ? DePrior::biawgn : DePrior::bec;
}

} // namespace

DeSystem channel_stage_de_system(const MultiEdgeEnsemble& ens_chan, const ChannelModel& ch) {
    if (ens_chan.kind() != MultiEdgeEnsemble::Kind::channel)
        throw std::invalid_argument("channel_stage_de_system: need a channel ensemble");
    DeSystem sys;
    sys.edge_types = {"b_oth", "b_own", "x"};
    apply_channel(sys, ch);
    const double r1 = ens_chan.rate1(), r2 = ens_chan.rate2();
    const int bdeg = ens_chan.bin_var_degree();
    // Per check: one bin-class unknown with the other known; symmetric rates.
    sys.var_profiles.push_back({r2, {bdeg, 0, 0}, DePrior::none, true});   // other bin
    sys.var_profiles.push_back({r1, {0, bdeg, 0}, DePrior::known, false}); // own bin
    auto nf = ens_chan.lambda_node_fractions();
    for (const auto& [d, f] : nf)
        sys.var_profiles.push_back({f, {0, 0, d}, channel_prior(ch), false});
    const int d_b = ens_chan.d_b(), d_x = ens_chan.d_x();
    const int hi = d_b - d_b / 2, lo = d_b / 2;
    if (hi == lo) {
        sys.check_profiles.push_back({1.0, {lo, hi, d_x}});
    } else {
        sys.check_profiles.push_back({0.5, {hi, lo, d_x}});
        sys.check_profiles.push_back({0.5, {lo, hi, d_x}});
    }
    return sys;
}

DeSystem joint_de_system(const MultiEdgeEnsemble& ens_src, const MultiEdgeEnsemble& ens_chan,
                         double rho, const ChannelModel& ch, bool measure_bin_error) {
    if (ens_src.kind() != MultiEdgeEnsemble::Kind::source ||
        ens_chan.kind() != MultiEdgeEnsemble::Kind::channel)
        throw std::invalid_argument("joint_de_system: ensemble kinds");
    if (!(rho > 0.0 && rho < 0.5)) throw std::domain_error("joint_de_system: rho outside (0,1/2)");
    DeSystem sys;
    sys.edge_types = {"w", "s", "b_oth", "b_own", "x"};
    sys.rho = rho;
    apply_channel(sys, ch);
    const double r1 = ens_chan.rate1(), r2 = ens_chan.rate2();
    const int bdeg = ens_chan.bin_var_degree();
    // Node counts per downlink check: 1 source bit (of the other node's
    // block, length n), r2 other-bin bits, 1 parity bit; source checks r2*n.
    auto nf_w = ens_src.lambda_node_fractions();
    for (const auto& [d, f] : nf_w)
        sys.var_profiles.push_back({f * 1.0, {d, 0, 0, 0, 0}, DePrior::bsc_correlation,
                                    !measure_bin_error});
    sys.var_profiles.push_back({r2, {0, 1, bdeg, 0, 0}, DePrior::none, measure_bin_error});
    sys.var_profiles.push_back({r1, {0, 0, 0, bdeg, 0}, DePrior::known, false});
    auto nf_x = ens_chan.lambda_node_fractions();
    for (const auto& [d, f] : nf_x)
        sys.var_profiles.push_back({f * 1.0, {0, 0, 0, 0, d}, channel_prior(ch), false});

    const int d_w = ens_src.d_w();
    const int d_b = ens_chan.d_b(), d_x = ens_chan.d_x();
    const int hi = d_b - d_b / 2, lo = d_b / 2;
    sys.check_profiles.push_back({r2, {d_w, 1, 0, 0, 0}});  // source checks of the other node
    if (hi == lo) {
        sys.check_profiles.push_back({1.0, {0, 0, lo, hi, d_x}});
    } else {
        sys.check_profiles.push_back({0.5, {0, 0, hi, lo, d_x}});
        sys.check_profiles.push_back({0.5, {0, 0, lo, hi, d_x}});
    }
    return sys;
}

DeSystem plain_code_de_system(const MultiEdgeEnsemble& ens, const ChannelModel& ch) {
    if (ens.kind() != MultiEdgeEnsemble::Kind::source)
        throw std::invalid_argument("plain_code_de_system: single-class ensembles only");
    DeSystem sys;
    sys.edge_types = {"e"};
    apply_channel(sys, ch);
    auto nf = ens.lambda_node_fractions();
    for (const auto& [d, f] : nf)
        sys.var_profiles.push_back({f, {d}, channel_prior(ch), true});
    sys.check_profiles.push_back({1.0, {ens.d_w()}});
    return sys;
}

DePoint de_run(const MultiEdgeEnsemble& ens_joint_chan, const MultiEdgeEnsemble& ens_src,
               double rho, double sigma2_d, std::size_t pop_size, int max_iters, uint64_t seed) {
    DeOptions opt;
    opt.pop_size = pop_size;
    opt.max_iters = max_iters;
    opt.seed = seed;
    auto sys = joint_de_system(ens_src, ens_joint_chan, rho, ChannelModel::biawgn(sigma2_d));
    return de_run_system(sys, opt);
}

double de_bec_exact(const MultiEdgeEnsemble& ensemble, double eps) {
    if (ensemble.kind() != MultiEdgeEnsemble::Kind::source)
        throw std::invalid_argument("de_bec_exact: single-class ensembles only");
    if (!(eps >= 0.0 && eps <= 1.0)) throw std::domain_error("de_bec_exact: eps outside [0,1]");
    const int dc = ensemble.d_w();
    double x = eps;
    for (int it = 0; it < 10000; ++it) {
        double y = 1.0 - std::pow(1.0 - x, dc - 1); // check-regular rho(1-x)
        double lx = 0.0;
        for (const auto& [d, f] : ensemble.lambda()) lx += f * std::pow(y, d - 1);
        double next = eps * lx;
        if (std::abs(next - x) < 1e-12) return next;
        x = next;
    }
    return x;
}

double de_bec_exact_threshold(const MultiEdgeEnsemble& ensemble, double tol) {
    double lo = 0.0, hi = 1.0;
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (de_bec_exact(ensemble, mid) < 1e-10) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

// Generic bisection: probe(x) true means "converges"; returns the largest
// converging x within tol, given probe(lo) true and probe(hi) false.
template <typename F>
std::optional<double> bisect_threshold(double lo, double hi, double tol, F&& probe) {
    if (!probe(lo)) return std::nullopt;
    if (probe(hi)) return hi;
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (probe(mid)) lo = mid;
        else hi = mid;
    }
    return lo;
}

double inverse_binary_entropy(double h) {
    double lo = 0.0, hi = 0.5;
    for (int i = 0; i < 80; ++i) {
        double mid = 0.5 * (lo + hi);
        if (binary_entropy(mid) < h) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

std::optional<double> de_threshold_sigma(const MultiEdgeEnsemble& ens_chan,
                                         const MultiEdgeEnsemble& ens_src, DecoderKind decoder,
                                         double rho, double tol, const DeOptions& opt) {
    if (tol < 1e-3) throw std::invalid_argument("de_threshold_sigma: tol below 1e-3");
    int probe_idx = 0;
    auto probe = [&](double sigma2) {
        DeOptions o = opt;
        o.seed = derive_seed(opt.seed, 900 + static_cast<uint64_t>(probe_idx++));
        DeSystem sys = decoder == DecoderKind::separate
                           ? channel_stage_de_system(ens_chan, ChannelModel::biawgn(sigma2))
                           : joint_de_system(ens_src, ens_chan, rho, ChannelModel::biawgn(sigma2));
        return de_run_system(sys, o).converged;
    };
    // Known-good: far below the rate floor; known-bad: below the converse
    // bound (capacity under the source entropy for the joint decoder, under
    // the bin rate for the channel stage).
    double lo = biawgn_sigma2_for_capacity(0.98);
    double bad_cap = decoder == DecoderKind::joint
                         ? std::max(0.75 * binary_entropy(rho), 0.02)
                         : 0.60 * ens_chan.rate2();
    double hi = biawgn_sigma2_for_capacity(std::min(0.98, bad_cap));
    if (hi <= lo) hi = lo * 4.0;
    return bisect_threshold(lo, hi, tol, probe);
}

std::optional<double> de_threshold_bec(const MultiEdgeEnsemble& ens, double tol,
                                       const DeOptions& opt) {
    int probe_idx = 0;
    auto probe = [&](double eps) {
        DeOptions o = opt;
        o.seed = derive_seed(opt.seed, 1300 + static_cast<uint64_t>(probe_idx++));
        return de_run_system(plain_code_de_system(ens, ChannelModel::bec(eps)), o).converged;
    };
    return bisect_threshold(0.02, 0.99, tol, probe);
}

std::optional<double> de_source_threshold_rho(const MultiEdgeEnsemble& ens_src, double tol,
                                              const DeOptions& opt) {
    double r = ens_src.design_compression_rate();
    double hi = inverse_binary_entropy(std::min(0.999, 1.12 * r));
    int probe_idx = 0;
    auto probe = [&](double rho) {
        DeOptions o = opt;
        o.seed = derive_seed(opt.seed, 1500 + static_cast<uint64_t>(probe_idx++));
        return de_run_system(source_de_system(ens_src, rho), o).converged;
    };
    return bisect_threshold(0.01, hi, tol, probe);
}

std::vector<DeSweepPoint> de_region_sweep(const MultiEdgeEnsemble& ens_chan,
                                          const MultiEdgeEnsemble& ens_src, DecoderKind decoder,
                                          const std::vector<double>& rho_grid, double tol,
                                          const DeOptions& opt) {
    std::optional<double> rho_th;
    if (decoder == DecoderKind::separate) {
        DeOptions o = opt;
        o.seed = derive_seed(opt.seed, 1700);
        rho_th = de_source_threshold_rho(ens_src, tol, o);
    }
    std::vector<DeSweepPoint> out;
    uint64_t k = 0;
    for (double rho : rho_grid) {
        if (!(rho > 0.0 && rho < 0.5)) throw std::domain_error("de_region_sweep: rho outside (0,1/2)");
        DeSweepPoint pt;
        pt.rho = rho;
        pt.h_rho = binary_entropy(rho);
        DeOptions o = opt;
        o.seed = derive_seed(opt.seed, 1800 + k++);
        if (decoder == DecoderKind::separate && rho_th && rho > *rho_th) {
            // source stage infeasible: no downlink threshold at this rho
            out.push_back(pt);
            continue;
        }
        auto th = de_threshold_sigma(ens_chan, ens_src, decoder, rho, tol, o);
        if (th) {
            pt.sigma2_threshold = th;
            pt.capacity_at_threshold = biawgn_capacity(*th);
            DeSystem sys = decoder == DecoderKind::separate
                               ? channel_stage_de_system(ens_chan, ChannelModel::biawgn(*th))
                               : joint_de_system(ens_src, ens_chan, rho, ChannelModel::biawgn(*th));
            DeOptions o2 = o;
            o2.seed = derive_seed(o.seed, 31);
            pt.converged_iters = de_run_system(sys, o2).iterations;
        }
        out.push_back(pt);
    }
    return out;
}

std::string sweep_to_csv(const std::vector<DeSweepPoint>& points) {
    std::ostringstream os;
    os << "rho,h_rho,sigma2_threshold,capacity_at_threshold,converged_iters\n";
    os.precision(10);
    for (const auto& p : points) {
        os << p.rho << ',' << p.h_rho << ',';
        if (p.sigma2_threshold) os << *p.sigma2_threshold;
        else os << "nan";
        os << ',' << p.capacity_at_threshold << ',' << p.converged_iters << '\n';
    }
    return os.str();
}

} // namespace relaynet
