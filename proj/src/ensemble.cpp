#include "relaynet/ensemble.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace relaynet {

namespace {

std::map<int, double> normalized(std::map<int, double> lambda) {
    double sum = 0.0;
    for (auto& [d, f] : lambda) {
        if (d < 1) throw std::invalid_argument("ensemble: degree < 1");
        if (f < 0.0) throw std::invalid_argument("ensemble: negative fraction");
        sum += f;
    }
    if (std::abs(sum - 1.0) > 1e-3)
        throw std::invalid_argument("ensemble: fractions sum to " + std::to_string(sum));
    for (auto& [d, f] : lambda) f /= sum;
    return lambda;
}

} // namespace

MultiEdgeEnsemble MultiEdgeEnsemble::source_code(std::string name, std::map<int, double> lambda_w,
                                                 int d_w) {
    MultiEdgeEnsemble e;
    e.name_ = std::move(name);
    e.kind_ = Kind::source;
    e.lambda_ = normalized(std::move(lambda_w));
    e.d_primary_ = d_w;
    e.validate();
    return e;
}

MultiEdgeEnsemble MultiEdgeEnsemble::channel_code(std::string name, std::map<int, double> lambda_x,
                                                  int d_b, int d_x, double r1, double r2) {
    MultiEdgeEnsemble e;
    e.name_ = std::move(name);
    e.kind_ = Kind::channel;
    e.lambda_ = normalized(std::move(lambda_x));
    e.d_primary_ = d_x;
    e.d_b_ = d_b;
    e.r1_ = r1;
    e.r2_ = r2;
    e.validate();
    return e;
}

void MultiEdgeEnsemble::validate() const {
    if (lambda_.empty()) throw std::invalid_argument("ensemble: empty distribution");
    if (d_primary_ < 1) throw std::invalid_argument("ensemble: check degree < 1");
    if (kind_ == Kind::channel) {
        if (!(r1_ > 0.0 && r1_ < 1.0 && r2_ > 0.0 && r2_ < 1.0))
            throw std::invalid_argument("ensemble: rates outside (0,1)");
        if (d_b_ < 1) throw std::invalid_argument("ensemble: d_b < 1");
        double deg = d_b_ / (r1_ + r2_);
        if (std::abs(deg - std::round(deg)) > 1e-9)
            throw std::invalid_argument("ensemble: bin degree d_b/(r1+r2) is not an integer");
    }
}

int MultiEdgeEnsemble::bin_var_degree() const {
    if (kind_ != Kind::channel) return 0;
    return static_cast<int>(std::lround(d_b_ / (r1_ + r2_)));
}

std::map<int, double> MultiEdgeEnsemble::lambda_node_fractions() const {
    std::map<int, double> nf;
    double sum = 0.0;
    for (const auto& [d, f] : lambda_) sum += f / d;
    for (const auto& [d, f] : lambda_) nf[d] = (f / d) / sum;
    return nf;
}

double MultiEdgeEnsemble::lambda_mean_degree() const {
    double inv = 0.0;
    for (const auto& [d, f] : lambda_) inv += f / d;
    return 1.0 / inv;
}

double MultiEdgeEnsemble::design_compression_rate() const {
    if (kind_ != Kind::source)
        throw std::logic_error("design_compression_rate: source ensembles only");
    return lambda_mean_degree() / d_primary_;
}

std::vector<std::string> MultiEdgeEnsemble::edge_types() const {
    if (kind_ == Kind::source) return {"w"};
    return {"b1", "b2", "x"};
}

std::vector<VarProfile> MultiEdgeEnsemble::variable_profiles() const {
    std::vector<VarProfile> out;
    auto nf = lambda_node_fractions();
    if (kind_ == Kind::source) {
        for (const auto& [d, f] : nf) out.push_back({f, {d}, VarKind::source_bit});
        return out;
    }
    const double total = 1.0 + r1_ + r2_;  // per check: r1+r2 bin vars + 1 parity var
    int bdeg = bin_var_degree();
    out.push_back({r1_ / total, {bdeg, 0, 0}, VarKind::bin_bit});
    out.push_back({r2_ / total, {0, bdeg, 0}, VarKind::bin_bit});
    for (const auto& [d, f] : nf) out.push_back({f / total, {0, 0, d}, VarKind::parity_bit});
    return out;
}

std::vector<CheckProfile> MultiEdgeEnsemble::check_profiles() const {
    if (kind_ == Kind::source) return {{1.0, {d_primary_}}};
    // d_b bin edges per check, split as evenly as the two classes allow;
    // the leftover edge alternates between the classes.
    int lo = d_b_ / 2, hi = d_b_ - lo;
    if (lo == hi) return {{1.0, {lo, hi, d_primary_}}};
    return {{0.5, {hi, lo, d_primary_}}, {0.5, {lo, hi, d_primary_}}};
}

std::string MultiEdgeEnsemble::format() const {
    std::ostringstream os;
    os << "# multi-edge ensemble\n";
    os << "name " << name_ << '\n';
    os << "kind " << (kind_ == Kind::source ? "source" : "channel") << '\n';
    if (kind_ == Kind::channel) os << "rates " << r1_ << ' ' << r2_ << '\n';
    os << (kind_ == Kind::source ? "[lambda_w]\n" : "[lambda_x]\n");
    os.precision(10);
    for (const auto& [d, f] : lambda_) os << d << ' ' << f << '\n';
    os << "[degrees]\n";
    if (kind_ == Kind::source) {
        os << "d_w " << d_primary_ << '\n';
    } else {
        os << "d_b " << d_b_ << '\n';
        os << "d_x " << d_primary_ << '\n';
    }
    return os.str();
}

MultiEdgeEnsemble MultiEdgeEnsemble::parse(const std::string& text) {
    std::istringstream is(text);
    std::string line, section;
    std::string name = "unnamed", kind;
    double r1 = 0.5, r2 = 0.5;
    std::map<int, double> lambda;
    std::map<std::string, int> degrees;
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok.front() == '[') {
            section = tok;
            continue;
        }
        if (tok == "name") { ls >> name; continue; }
        if (tok == "kind") { ls >> kind; continue; }
        if (tok == "rates") { ls >> r1 >> r2; continue; }
        if (section == "[lambda_w]" || section == "[lambda_x]") {
            int d = std::stoi(tok);
            double f;
            if (!(ls >> f)) throw std::runtime_error("ensemble parse: missing fraction");
            lambda[d] = f;
        } else if (section == "[degrees]") {
            int v;
            if (!(ls >> v)) throw std::runtime_error("ensemble parse: missing degree value");
            degrees[tok] = v;
        } else {
            throw std::runtime_error("ensemble parse: unexpected token '" + tok + "'");
        }
    }
    if (kind == "source") {
        if (!degrees.count("d_w")) throw std::runtime_error("ensemble parse: missing d_w");
        return source_code(name, lambda, degrees["d_w"]);
    }
    if (kind == "channel") {
        if (!degrees.count("d_b") || !degrees.count("d_x"))
            throw std::runtime_error("ensemble parse: missing d_b/d_x");
        return channel_code(name, lambda, degrees["d_b"], degrees["d_x"], r1, r2);
    }
    throw std::runtime_error("ensemble parse: kind must be source or channel");
}

MultiEdgeEnsemble table1_ensemble(const std::string& which) {
    if (which == "source_r12") {
        return MultiEdgeEnsemble::source_code(
            which,
            {{2, 0.1710}, {3, 0.2075}, {8, 0.0800}, {9, 0.2657}, {47, 0.1864}, {48, 0.0894}}, 10);
    }
    if (which == "source_r14") {
        return MultiEdgeEnsemble::source_code(
            which,
            {{2, 0.1046}, {3, 0.1984}, {5, 0.1189}, {6, 0.0006}, {9, 0.1597},
             {10, 0.0616}, {19, 0.0458}, {20, 0.0453}, {24, 0.1881}, {25, 0.0770}}, 22);
    }
    if (which == "chan_sep_r12") {
        return MultiEdgeEnsemble::channel_code(
            which,
            {{2, 0.3657}, {3, 0.1203}, {12, 0.0963}, {13, 0.1797}, {45, 0.0162}, {46, 0.2218}},
            3, 4, 0.5, 0.5);
    }
    if (which == "chan_sep_r14") {
        return MultiEdgeEnsemble::channel_code(
            which,
            {{2, 0.3503}, {3, 0.0731}, {5, 0.0161}, {6, 0.2043}, {19, 0.0761},
             {20, 0.0370}, {33, 0.1991}, {34, 0.0440}},
            3, 4, 0.25, 0.25);
    }
    if (which == "chan_joint_r12") {
        return MultiEdgeEnsemble::channel_code(
            which, {{2, 0.5254}, {3, 0.1612}, {18, 0.1349}, {19, 0.1785}}, 3, 3, 0.5, 0.5);
    }
    throw std::invalid_argument("table1_ensemble: unknown ensemble '" + which + "'");
}

std::vector<std::string> table1_ensemble_names() {
    return {"source_r12", "source_r14", "chan_sep_r12", "chan_sep_r14", "chan_joint_r12"};
}

MultiEdgeEnsemble regular_ensemble(int var_deg, int check_deg) {
    std::ostringstream nm;
    nm << "regular_" << var_deg << '_' << check_deg;
    return MultiEdgeEnsemble::source_code(nm.str(), {{var_deg, 1.0}}, check_deg);
}

MultiEdgeEnsemble load_ensemble_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("load_ensemble_file: cannot open " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return MultiEdgeEnsemble::parse(buf.str());
}

void save_ensemble_file(const MultiEdgeEnsemble& ens, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("save_ensemble_file: cannot open " + path);
    f << ens.format();
}

} // namespace relaynet
