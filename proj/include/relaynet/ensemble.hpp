#pragma once

#include <map>
#include <string>
#include <vector>

namespace relaynet {

enum class VarKind { source_bit, bin_bit, parity_bit, punctured };

struct VarProfile {
    double fraction;           // fraction of variable nodes
    std::vector<int> degrees;  // per edge type
    VarKind kind;
};

struct CheckProfile {
    double fraction;
    std::vector<int> degrees;  // per edge type
};

// Multi-edge degree-distribution description of an LDPC ensemble. The raw
// data is the published form: an edge-perspective distribution lambda over
// the primary variable class plus the per-check class degrees. Profile
// views are derived.
//
// Source codes: one edge class "w"; variables follow lambda_w, every check
// carries d_w w-edges (the syndrome bit itself attaches separately).
//
// Downlink channel codes: classes "b1", "b2" (bin bits of the two nodes)
// and "x" (transmitted parity bits). x-variables follow lambda_x; every
// check carries d_x x-edges and d_b bin edges, alternating (2,1)/(1,2)
// between the two bin classes; bin-variable degrees follow from edge
// balance: d_b / (r1 + r2).
class MultiEdgeEnsemble {
public:
    enum class Kind { source, channel };

    static MultiEdgeEnsemble source_code(std::string name, std::map<int, double> lambda_w, int d_w);
    static MultiEdgeEnsemble channel_code(std::string name, std::map<int, double> lambda_x, int d_b,
                                          int d_x, double r1, double r2);

    const std::string& name() const { return name_; }
    Kind kind() const { return kind_; }
    const std::map<int, double>& lambda() const { return lambda_; }
    int d_w() const { return kind_ == Kind::source ? d_primary_ : 0; }
    int d_x() const { return kind_ == Kind::channel ? d_primary_ : 0; }
    int d_b() const { return d_b_; }
    double rate1() const { return r1_; }
    double rate2() const { return r2_; }

    // Bin-variable degree implied by edge balance (channel codes).
    int bin_var_degree() const;

    std::vector<std::string> edge_types() const;
    std::vector<VarProfile> variable_profiles() const;
    std::vector<CheckProfile> check_profiles() const;

    // Node-perspective fractions of the lambda class: f_i = (l_i/i) / sum.
    std::map<int, double> lambda_node_fractions() const;
    // Mean lambda-class variable degree (node perspective).
    double lambda_mean_degree() const;
    // Source codes: checks per variable (the syndrome/compression rate).
    double design_compression_rate() const;

    std::string format() const;
    static MultiEdgeEnsemble parse(const std::string& text);

private:
    MultiEdgeEnsemble() = default;
    void validate() const;

    std::string name_;
    Kind kind_ = Kind::source;
    std::map<int, double> lambda_;
    int d_primary_ = 0;
    int d_b_ = 0;
    double r1_ = 0.0, r2_ = 0.0;
};

// The published degree distributions: source_r12, source_r14, chan_sep_r12,
// chan_sep_r14, chan_joint_r12. Throws on unknown names.
MultiEdgeEnsemble table1_ensemble(const std::string& which);
std::vector<std::string> table1_ensemble_names();

// A (var_deg, check_deg)-regular single-class ensemble.
MultiEdgeEnsemble regular_ensemble(int var_deg, int check_deg);

MultiEdgeEnsemble load_ensemble_file(const std::string& path);
void save_ensemble_file(const MultiEdgeEnsemble& ens, const std::string& path);

} // namespace relaynet
