#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "relaynet/bp.hpp"
#include "relaynet/codebook.hpp"
#include "relaynet/ensemble.hpp"

namespace relaynet {

struct ExperimentConfig {
    std::size_t n = 10000;
    double rho = 0.05;
    double sigma2_u = 0.0;  // uplink noise variance (biawgn uplink mode)
    double sigma2_d = 1.0;  // downlink noise variance; 0 = noiseless
    double r1 = 0.5, r2 = 0.5;
    std::string source_ensemble = "source_r12";
    std::string channel_ensemble = "chan_sep_r12";
    std::string decoder = "separate";  // separate | joint
    std::size_t trials = 100;
    uint64_t seed = 1;
    int max_iters = 200;
    std::string uplink = "noiseless";  // noiseless | biawgn

    void validate() const;
    // Flat "key = value" text, '#' comments, unknown keys rejected.
    static ExperimentConfig parse(const std::string& text);
    static ExperimentConfig load(const std::string& path);
    std::string format() const;
};

struct TrialRecord {
    std::size_t trial = 0;
    bool word_error_node0 = false;  // node 0 failed to recover W2
    bool word_error_node1 = false;
    std::size_t bit_errors = 0;     // over both reconstructions
    int iterations = 0;             // max over the two nodes
    bool stage1_converged = true;   // both nodes' channel parts
    bool stage2_converged = true;   // both nodes' source parts
};

struct PipelineResult {
    std::size_t trials = 0;
    std::size_t word_errors = 0;  // either node in error
    double wer = 0.0;
    double wer_ci_lo = 0.0, wer_ci_hi = 0.0;  // 95% Wilson interval
    double wer_node0 = 0.0, wer_node1 = 0.0;
    double ber = 0.0;
    double avg_iters = 0.0;
    std::vector<TrialRecord> records;
};

// Wilson 95% score interval for k successes out of n.
std::pair<double, double> wilson_interval(std::size_t k, std::size_t n);

// A systematic point-to-point code [Hm | Hp] with k message columns and a
// square invertible parity part; used for the optional noisy uplink.
struct PointToPointCode {
    SparseBinaryMatrix H;  // (n-k) x n
    std::size_t k = 0;
    std::shared_ptr<const Gf2Solver> parity_solver;

    BitVector encode(const BitVector& message) const;  // full codeword [m p]
};

PointToPointCode build_point_to_point_code(std::size_t k, std::size_t n, uint64_t seed);

// Pre-built experiment context, reusable across SNR points.
struct Experiment {
    ExperimentConfig cfg;
    RelayCodebook codebook;
    std::optional<PointToPointCode> uplink_code1, uplink_code2;

    static Experiment prepare(const ExperimentConfig& cfg);
};

PipelineResult run_pipeline(const ExperimentConfig& cfg);
PipelineResult run_pipeline(const Experiment& exp, const ExperimentConfig& cfg);

struct SnrSweepRow {
    double es_n0_db = 0.0;
    double sigma2_d = 0.0;
    std::string decoder;
    PipelineResult result;
};

// Paired A/B runs (common random numbers) of the separate and joint
// decoders across the SNR grid.
std::vector<SnrSweepRow> sweep_snr(const ExperimentConfig& cfg,
                                   const std::vector<double>& es_n0_db_grid);

std::string pipeline_csv_header();
std::string pipeline_csv_row(double es_n0_db, double sigma2_d, double rho,
                             const std::string& decoder, const PipelineResult& r);
std::string sweep_rows_to_csv(const std::vector<SnrSweepRow>& rows, double rho);

} // namespace relaynet
