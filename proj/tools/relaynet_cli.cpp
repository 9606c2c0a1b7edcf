// Command-line front end: region computations, capacities, code
// construction, density-evolution thresholds and sweeps, and the full
// two-way relay simulation pipeline.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "relaynet/bp.hpp"
#include "relaynet/channels.hpp"
#include "relaynet/codebook.hpp"
#include "relaynet/density_evolution.hpp"
#include "relaynet/ensemble.hpp"
#include "relaynet/info_region.hpp"
#include "relaynet/peg.hpp"
#include "relaynet/simulation.hpp"
#include "relaynet/sparse_matrix.hpp"

using namespace relaynet;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitModelError = 1;
constexpr int kExitUsage = 2;

void write_or_print(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw std::runtime_error("cannot open output file " + out_path);
    f << text;
}

std::string require_file(const std::string& path) {
    if (!std::filesystem::exists(path))
        throw CLI::ValidationError("file does not exist: " + path);
    return path;
}

MultiEdgeEnsemble ensemble_by_name(const std::string& name) {
    for (const auto& known : table1_ensemble_names())
        if (known == name) return table1_ensemble(name);
    require_file(name);
    return load_ensemble_file(name);
}

std::string subset_to_string(uint32_t mask, std::size_t L) {
    std::string s = "{";
    bool first = true;
    for (std::size_t l = 0; l < L; ++l) {
        if (mask & (1u << l)) {
            if (!first) s += ",";
            s += std::to_string(l + 1);
            first = false;
        }
    }
    return s + "}";
}

void print_jscc_report(const RegionQuery& q, const JsccReport& rep) {
    const std::size_t L = q.num_nodes();
    std::printf("%-10s %-12s %12s %12s %12s\n", "kind", "set", "entropy", "budget", "slack");
    for (const auto& r : rep.inequalities) {
        const char* kind = r.kind == InequalityReport::Kind::uplink_subset ? "uplink" : "downlink";
        std::string set = subset_to_string(r.subset_mask, L);
        std::printf("%-10s %-12s %12.6f %12.6f %12.6f\n", kind, set.c_str(), r.lhs, r.rhs, r.slack());
    }
    const char* verdict = rep.verdict == RegionVerdict::achievable ? "ACHIEVABLE"
                          : rep.verdict == RegionVerdict::boundary ? "BOUNDARY"
                                                                   : "NOT ACHIEVABLE";
    std::printf("jscc: %s (min slack %.3g)\n", verdict, rep.min_slack);
}

void print_separation(const RegionQuery& q, const SeparationResult& sep) {
    const std::size_t L = q.num_nodes();
    if (sep.feasible) {
        std::printf("separation: FEASIBLE (max min-slack %.6g)\nwitness rates:", sep.max_min_slack);
        for (double r : sep.witness.rates) std::printf(" %.6f", r);
        std::printf("\n");
        return;
    }
    std::printf("separation: INFEASIBLE\ncertificate (contradicting aggregated inequalities):\n");
    std::printf("  lower side:");
    for (const auto& t : sep.lower_terms)
        std::printf(" %.4f*[sum_%s > H]", t.weight, subset_to_string(t.subset_mask, L).c_str());
    std::printf("  => value %.6f\n", sep.lower_value);
    std::printf("  upper side:");
    for (const auto& t : sep.upper_terms) {
        if (t.kind == InequalityReport::Kind::downlink_node)
            std::printf(" %.4f*[sum_complement_of_%s < I]", t.weight,
                        subset_to_string(t.subset_mask, L).c_str());
        else
            std::printf(" %.4f*[sum_%s < C]", t.weight, subset_to_string(t.subset_mask, L).c_str());
    }
    std::printf("  => value %.6f\n", sep.upper_value);
    std::printf("  contradiction: %.6f > %.6f\n", sep.lower_value, sep.upper_value);
}

RegionQuery query_from_options(const std::string& pmf_path, std::vector<double> up,
                               std::vector<double> down) {
    require_file(pmf_path);
    std::ifstream f(pmf_path);
    std::ostringstream buf;
    buf << f.rdbuf();
    JointPmf pmf = JointPmf::parse(buf.str());
    return RegionQuery(std::move(pmf), std::move(up), std::move(down));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-way relay network coding toolkit"};
    app.require_subcommand(1);
    uint64_t seed = 1;
    app.add_option("--seed", seed, "master random seed")->capture_default_str();

    // region ------------------------------------------------------------
    auto* region = app.add_subcommand("region", "achievability region checks");
    region->require_subcommand(1);
    std::string pmf_path, out_path;
    std::vector<double> uplinks, downlinks;

    auto add_query_opts = [&](CLI::App* cmd) {
        cmd->add_option("--pmf", pmf_path, "joint pmf file (header 'L k1..kL', then probabilities)")
            ->required();
        cmd->add_option("--uplink", uplinks, "per-node uplink capacities (bits/use)")->required();
        cmd->add_option("--downlink", downlinks, "per-node downlink mutual informations (bits/use)")
            ->required();
    };
    auto* reg_check = region->add_subcommand("check", "test the JSC achievability conditions");
    add_query_opts(reg_check);
    auto* reg_sep = region->add_subcommand("separation", "test separate source-channel feasibility");
    add_query_opts(reg_sep);
    auto* reg_cex =
        region->add_subcommand("counterexample", "evaluate the three-node counterexample source");

    // capacity ----------------------------------------------------------
    auto* capacity = app.add_subcommand("capacity", "channel capacities");
    capacity->require_subcommand(1);
    double cap_arg = 0.0;
    auto* cap_bsc = capacity->add_subcommand("bsc", "binary symmetric channel");
    cap_bsc->add_option("crossover", cap_arg, "crossover probability")->required();
    auto* cap_awgn = capacity->add_subcommand("biawgn", "binary-input AWGN channel");
    cap_awgn->add_option("sigma2", cap_arg, "noise variance")->required();

    // construct ----------------------------------------------------------
    auto* construct = app.add_subcommand("construct", "PEG code construction (alist output)");
    std::string ens_name, chan_name = "chan_sep_r12", src_name = "source_r12";
    std::size_t n_arg = 2000;
    double r1 = 0.5, r2 = 0.5;
    bool codebook_mode = false;
    construct->add_option("--ensemble", ens_name, "single-class ensemble name or file");
    construct->add_flag("--codebook", codebook_mode, "construct the full relay codebook");
    construct->add_option("--channel-ensemble", chan_name, "downlink ensemble (codebook mode)");
    construct->add_option("--source-ensemble", src_name, "source ensemble (codebook mode)");
    construct->add_option("--n", n_arg, "block length")->capture_default_str();
    construct->add_option("--r1", r1, "rate of node 1")->capture_default_str();
    construct->add_option("--r2", r2, "rate of node 2")->capture_default_str();
    construct->add_option("--out", out_path, "output path (or prefix in codebook mode)")->required();

    // de ------------------------------------------------------------------
    auto* de = app.add_subcommand("de", "density evolution");
    de->require_subcommand(1);
    double rho = 0.05, tol = 5e-3;
    std::size_t pop = 100000;
    int max_iters = 500;
    std::string decoder = "joint";
    std::vector<double> rho_grid;
    auto add_de_common = [&](CLI::App* cmd) {
        cmd->add_option("--pop", pop, "population size")->capture_default_str();
        cmd->add_option("--max-iters", max_iters, "iteration cap")->capture_default_str();
        cmd->add_option("--tol", tol, "bisection tolerance")->capture_default_str();
        cmd->add_option("--out", out_path, "output file (default stdout)");
    };
    auto* de_thresh = de->add_subcommand("threshold", "downlink noise threshold at one rho");
    de_thresh->add_option("--rho", rho, "source crossover")->capture_default_str();
    de_thresh->add_option("--decoder", decoder, "separate | joint")->capture_default_str();
    de_thresh->add_option("--channel-ensemble", chan_name, "downlink ensemble")->capture_default_str();
    de_thresh->add_option("--source-ensemble", src_name, "source ensemble")->capture_default_str();
    add_de_common(de_thresh);
    auto* de_sweep = de->add_subcommand("sweep", "achievable-region boundary sweep (CSV)");
    de_sweep->add_option("--rho-grid", rho_grid, "rho grid points")->required();
    de_sweep->add_option("--decoder", decoder, "separate | joint")->capture_default_str();
    de_sweep->add_option("--channel-ensemble", chan_name, "downlink ensemble")->capture_default_str();
    de_sweep->add_option("--source-ensemble", src_name, "source ensemble")->capture_default_str();
    add_de_common(de_sweep);
    auto* de_srcth = de->add_subcommand("source-threshold", "source-code crossover threshold");
    de_srcth->add_option("--source-ensemble", src_name, "source ensemble")->capture_default_str();
    add_de_common(de_srcth);

    // simulate -------------------------------------------------------------
    auto* sim = app.add_subcommand("simulate", "finite-length Monte Carlo pipeline");
    sim->require_subcommand(1);
    std::string config_path;
    std::vector<double> snr_grid;
    auto* sim_run = sim->add_subcommand("run", "run one configuration");
    sim_run->add_option("--config", config_path, "experiment config file")->required();
    sim_run->add_option("--out", out_path, "CSV output (default stdout)");
    auto* sim_sweep = sim->add_subcommand("sweep", "paired separate/joint SNR sweep");
    sim_sweep->add_option("--config", config_path, "experiment config file")->required();
    sim_sweep->add_option("--snr-grid", snr_grid, "Es/N0 grid in dB")->required();
    sim_sweep->add_option("--out", out_path, "CSV output (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }
    bool seed_given = app.count("--seed") > 0;

    try {
        if (reg_check->parsed()) {
            RegionQuery q = query_from_options(pmf_path, uplinks, downlinks);
            print_jscc_report(q, check_jscc_achievable(q));
        } else if (reg_sep->parsed()) {
            RegionQuery q = query_from_options(pmf_path, uplinks, downlinks);
            print_separation(q, check_separation_feasible(q));
        } else if (reg_cex->parsed()) {
            RegionQuery q = build_appendix_b_query();
            const JointPmf& pmf = q.source;
            auto ce = [&](std::vector<std::size_t> t, std::vector<std::size_t> g) {
                return conditional_entropy(pmf, t, g);
            };
            std::printf("three-node counterexample source (six independent bit components)\n");
            std::printf("H(W1|W2,W3) = %.4f\n", ce({0}, {1, 2}));
            std::printf("H(W2|W1,W3) = %.4f\n", ce({1}, {0, 2}));
            std::printf("H(W3|W1,W2) = %.4f\n", ce({2}, {0, 1}));
            std::printf("H(W1,W2|W3) = %.4f\n", ce({0, 1}, {2}));
            std::printf("H(W1,W3|W2) = %.4f\n", ce({0, 2}, {1}));
            std::printf("H(W2,W3|W1) = %.4f\n", ce({1, 2}, {0}));
            std::printf("H(W1)       = %.4f\n", pmf.subset_entropy(1));
            std::printf("uplink capacities: 2 2 2; downlink mutuals: %.4f %.4f %.4f\n",
                        q.downlink_mutuals[0], q.downlink_mutuals[1], q.downlink_mutuals[2]);
            print_jscc_report(q, check_jscc_achievable(q));
            print_separation(q, check_separation_feasible(q));
        } else if (cap_bsc->parsed()) {
            std::printf("%.6f\n", bsc_capacity(cap_arg));
        } else if (cap_awgn->parsed()) {
            std::printf("%.6f\n", biawgn_capacity(cap_arg));
        } else if (construct->parsed()) {
            if (codebook_mode) {
                auto cb = build_relay_codebook(ensemble_by_name(chan_name),
                                               ensemble_by_name(src_name), n_arg, r1, r2, seed);
                write_alist(cb.H(), out_path + "_H.alist");
                write_alist(cb.Hs(0), out_path + "_Hs1.alist");
                write_alist(cb.Hs(1), out_path + "_Hs2.alist");
                std::printf("wrote %s_H.alist, %s_Hs1.alist, %s_Hs2.alist\n", out_path.c_str(),
                            out_path.c_str(), out_path.c_str());
            } else {
                if (ens_name.empty())
                    throw CLI::ValidationError("construct: need --ensemble or --codebook");
                auto H = peg_construct(ensemble_by_name(ens_name), n_arg, seed);
                write_alist(H, out_path);
                std::printf("wrote %s (%zux%zu, %zu entries)\n", out_path.c_str(), H.n_rows(),
                            H.n_cols(), H.n_entries());
            }
        } else if (de_thresh->parsed() || de_sweep->parsed() || de_srcth->parsed()) {
            DeOptions opt;
            opt.pop_size = pop;
            opt.max_iters = max_iters;
            opt.seed = seed;
            if (de_srcth->parsed()) {
                auto th = de_source_threshold_rho(ensemble_by_name(src_name), tol, opt);
                std::ostringstream os;
                if (th) os << "rho_threshold " << *th << "  (h = " << binary_entropy(*th) << ")\n";
                else os << "rho_threshold none (bracket failure)\n";
                write_or_print(out_path, os.str());
            } else if (de_thresh->parsed()) {
                DecoderKind dk = decoder == "separate" ? DecoderKind::separate : DecoderKind::joint;
                auto th = de_threshold_sigma(ensemble_by_name(chan_name),
                                             ensemble_by_name(src_name), dk, rho, tol, opt);
                std::ostringstream os;
                if (th)
                    os << "sigma2_threshold " << *th << "  (C = " << biawgn_capacity(*th)
                       << ", h(rho) = " << binary_entropy(rho) << ")\n";
                else
                    os << "sigma2_threshold none (bracket failure)\n";
                write_or_print(out_path, os.str());
            } else {
                DecoderKind dk = decoder == "separate" ? DecoderKind::separate : DecoderKind::joint;
                auto pts = de_region_sweep(ensemble_by_name(chan_name), ensemble_by_name(src_name),
                                           dk, rho_grid, tol, opt);
                write_or_print(out_path, sweep_to_csv(pts));
            }
        } else if (sim_run->parsed() || sim_sweep->parsed()) {
            require_file(config_path);
            ExperimentConfig cfg = ExperimentConfig::load(config_path);
            if (seed_given) cfg.seed = seed;
            if (sim_run->parsed()) {
                PipelineResult r = run_pipeline(cfg);
                double db = cfg.sigma2_d > 0 ? sigma2_to_es_n0_db(cfg.sigma2_d) : 0.0;
                std::string csv = pipeline_csv_header() +
                                  pipeline_csv_row(db, cfg.sigma2_d, cfg.rho, cfg.decoder, r);
                write_or_print(out_path, csv);
            } else {
                auto rows = sweep_snr(cfg, snr_grid);
                write_or_print(out_path, sweep_rows_to_csv(rows, cfg.rho));
            }
        }
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitModelError;
    }
    return kExitOk;
}
