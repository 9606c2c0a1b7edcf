#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace relaynet {

// Dense joint probability mass function of L discrete variables.
// Row-major table, last variable fastest. Immutable after construction.
class JointPmf {
public:
    JointPmf(std::vector<std::size_t> alphabet_sizes, std::vector<double> probs);

    std::size_t num_vars() const { return sizes_.size(); }
    const std::vector<std::size_t>& alphabet_sizes() const { return sizes_; }
    const std::vector<double>& probs() const { return probs_; }

    // Joint entropy of the variables selected by the bit mask, in bits.
    double subset_entropy(uint32_t mask) const;
    double entropy() const { return subset_entropy((1u << num_vars()) - 1u); }

    // Textual format: first line "L k1 k2 ... kL", then one probability per
    // line in row-major order; '#' starts a comment.
    static JointPmf parse(const std::string& text);
    std::string format() const;

private:
    std::vector<std::size_t> sizes_;
    std::vector<double> probs_;
};

// Doubly symmetric binary source with crossover probability rho.
struct DsbsSource {
    double rho;
    explicit DsbsSource(double rho_);
    JointPmf to_joint_pmf() const;
};

// A feasibility query: source statistics plus per-node uplink capacities and
// downlink mutual informations (bits per channel use, one fixed downlink
// input distribution chosen by the caller).
struct RegionQuery {
    JointPmf source;
    std::vector<double> uplink_capacities;
    std::vector<double> downlink_mutuals;

    RegionQuery(JointPmf src, std::vector<double> up, std::vector<double> down);
    std::size_t num_nodes() const { return uplink_capacities.size(); }
};

struct RateTuple {
    std::vector<double> rates;
};

double binary_entropy(double p);
double bsc_capacity(double crossover);
// Capacity of the binary-input AWGN channel (unit-energy BPSK, noise
// variance sigma2), by quadrature; absolute accuracy better than 1e-6.
double biawgn_capacity(double sigma2);
// Inverse of biawgn_capacity (sigma2 for a target capacity in (0,1)).
double biawgn_sigma2_for_capacity(double capacity);

double conditional_entropy(const JointPmf& pmf, const std::vector<std::size_t>& target_set,
                           const std::vector<std::size_t>& given_set);

enum class RegionVerdict { achievable, boundary, not_achievable };

struct InequalityReport {
    enum class Kind { uplink_subset, downlink_node } kind;
    uint32_t subset_mask = 0;   // uplink: variable subset; downlink: 1 << node
    double lhs = 0.0;           // entropy side
    double rhs = 0.0;           // capacity / mutual information side
    double slack() const { return rhs - lhs; }
};

struct JsccReport {
    RegionVerdict verdict = RegionVerdict::not_achievable;
    std::vector<InequalityReport> inequalities; // every tested inequality
    double min_slack = 0.0;
};

JsccReport check_jscc_achievable(const RegionQuery& q);

// One side of an infeasibility certificate: a nonnegative combination of
// constraints whose aggregated bound contradicts the other side.
struct CertificateTerm {
    InequalityReport::Kind kind;
    uint32_t subset_mask;
    double weight;
};

struct SeparationResult {
    bool feasible = false;
    RateTuple witness;                       // valid when feasible
    double max_min_slack = 0.0;
    // Certificate (valid when infeasible): the lower and upper combinations
    // share the same rate functional, with lower_value > upper_value.
    std::vector<CertificateTerm> lower_terms;
    std::vector<CertificateTerm> upper_terms;
    double lower_value = 0.0;
    double upper_value = 0.0;
};

SeparationResult check_separation_feasible(const RegionQuery& q);

// The three-node counterexample source: exhaustive convolution of six
// independent Bernoulli bits.
JointPmf build_appendix_b_source();

// The counterexample query: the source above, uplink capacities of 2 bits
// per use each, and binary symmetric downlinks with crossovers 0.0508,
// 0.184, 0.184 under the uniform input.
RegionQuery build_appendix_b_query();

} // namespace relaynet
