#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relaynet/channels.hpp"
#include "relaynet/ensemble.hpp"

namespace relaynet {

// Priors attached to a variable class during density evolution, sampled
// under the all-zero-codeword convention.
enum class DePrior { none, biawgn, bec, bsc_correlation, known };

struct DeVarProfile {
    double weight;             // relative node count
    std::vector<int> degrees;  // per edge type
    DePrior prior;
    bool error_class = false;  // residual error is measured on these nodes
};

struct DeCheckProfile {
    double weight;             // relative node count
    std::vector<int> degrees;  // per edge type
};

// A message-passing system for multi-edge population-dynamics DE. Edge
// types whose variable side is `known` are handled symbolically (their
// tanh factor is exactly +1 and they are never sampled).
struct DeSystem {
    std::vector<std::string> edge_types;
    std::vector<DeVarProfile> var_profiles;
    std::vector<DeCheckProfile> check_profiles;
    double rho = 0.0;     // bsc_correlation parameter
    double sigma2 = 0.0;  // biawgn parameter
    double eps = 0.0;     // bec parameter
};

struct DeOptions {
    std::size_t pop_size = 100000;
    int max_iters = 500;
    double target_error = 1e-5;
    double clamp = 50.0;
    uint64_t seed = 1;
};

struct DePoint {
    double rho = 0.0;
    double sigma2_d = 0.0;
    bool converged = false;
    double residual_error = 0.0;
    int iterations = 0;
};

// One population-dynamics run to the convergence target, with fixed-point
// stall detection for the diverging side.
DePoint de_run_system(const DeSystem& system, const DeOptions& opt);

// Source-code DE: syndrome known, virtual BSC(rho) priors on the w class.
DeSystem source_de_system(const MultiEdgeEnsemble& ens_src, double rho);

// Channel-stage DE of the separate decoder at one node: own bin class
// known, other bin class unknown, parity class observed through the channel.
DeSystem channel_stage_de_system(const MultiEdgeEnsemble& ens_chan, const ChannelModel& ch);

// Joint decoder DE over the full graph: source code of the other node,
// downlink code, and correlation priors. The residual error is measured on
// the source bits unless measure_bin_error is set.
DeSystem joint_de_system(const MultiEdgeEnsemble& ens_src, const MultiEdgeEnsemble& ens_chan,
                         double rho, const ChannelModel& ch, bool measure_bin_error = false);

// Plain channel-code DE of a single-class ensemble (BIAWGN or BEC).
DeSystem plain_code_de_system(const MultiEdgeEnsemble& ens, const ChannelModel& ch);

// Spec-level entry point: DE for the joint system at (rho, sigma2_d).
DePoint de_run(const MultiEdgeEnsemble& ens_joint_chan, const MultiEdgeEnsemble& ens_src,
               double rho, double sigma2_d, std::size_t pop_size, int max_iters,
               uint64_t seed = 1);

// Exact BEC recursion x <- eps * lambda(1 - rho(1 - x)) for single-class
// ensembles; returns the fixed point.
double de_bec_exact(const MultiEdgeEnsemble& ensemble, double eps);
// Exact-recursion threshold by bisection.
double de_bec_exact_threshold(const MultiEdgeEnsemble& ensemble, double tol = 1e-6);

enum class DecoderKind { separate, joint };

// Largest converging sigma2_d (within tol) for the chosen decoder; empty on
// bracket failure.
std::optional<double> de_threshold_sigma(const MultiEdgeEnsemble& ens_chan,
                                         const MultiEdgeEnsemble& ens_src, DecoderKind decoder,
                                         double rho, double tol, const DeOptions& opt);

// Largest converging BEC erasure probability for a plain single-class code.
std::optional<double> de_threshold_bec(const MultiEdgeEnsemble& ens, double tol,
                                       const DeOptions& opt);

// Largest converging source crossover rho (noiseless index delivery).
std::optional<double> de_source_threshold_rho(const MultiEdgeEnsemble& ens_src, double tol,
                                              const DeOptions& opt);

struct DeSweepPoint {
    double rho = 0.0;
    double h_rho = 0.0;
    std::optional<double> sigma2_threshold;
    double capacity_at_threshold = 0.0;
    int converged_iters = 0;
};

// Region boundary sweep: for each rho, the decoder threshold in sigma2_d,
// reported as (h(rho), C_BIAWGN(threshold)) pairs.
std::vector<DeSweepPoint> de_region_sweep(const MultiEdgeEnsemble& ens_chan,
                                          const MultiEdgeEnsemble& ens_src, DecoderKind decoder,
                                          const std::vector<double>& rho_grid, double tol,
                                          const DeOptions& opt);

std::string sweep_to_csv(const std::vector<DeSweepPoint>& points);

} // namespace relaynet
