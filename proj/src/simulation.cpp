#include "relaynet/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "relaynet/peg.hpp"

namespace relaynet {

void ExperimentConfig::validate() const {
    if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    if (n < 100) throw std::invalid_argument("config: n must be >= 100");
    if (!(rho > 0.0 && rho < 0.5)) throw std::invalid_argument("config: rho outside (0, 1/2)");
    if (sigma2_d < 0.0) throw std::invalid_argument("config: sigma2_d must be >= 0");
    if (!(r1 > 0.0 && r1 < 1.0 && r2 > 0.0 && r2 < 1.0))
        throw std::invalid_argument("config: rates outside (0,1)");
    if (decoder != "separate" && decoder != "joint")
        throw std::invalid_argument("config: decoder must be separate or joint");
    if (uplink != "noiseless" && uplink != "biawgn")
        throw std::invalid_argument("config: uplink must be noiseless or biawgn");
    if (uplink == "biawgn" && !(sigma2_u > 0.0))
        throw std::invalid_argument("config: biawgn uplink needs sigma2_u > 0");
    if (max_iters < 1) throw std::invalid_argument("config: max_iters must be >= 1");
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        std::istringstream probe(line);
        std::string probe_tok;
        if (!(probe >> probe_tok)) continue; // blank
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) + ": expected key = value");
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw std::runtime_error("config line " + std::to_string(lineno) + ": empty key or value");
        try {
            if (key == "n") cfg.n = std::stoul(val);
            else if (key == "rho") cfg.rho = std::stod(val);
            else if (key == "sigma2_u") cfg.sigma2_u = std::stod(val);
            else if (key == "sigma2_d") cfg.sigma2_d = std::stod(val);
            else if (key == "r1") cfg.r1 = std::stod(val);
            else if (key == "r2") cfg.r2 = std::stod(val);
            else if (key == "source_ensemble") cfg.source_ensemble = val;
            else if (key == "channel_ensemble") cfg.channel_ensemble = val;
            else if (key == "decoder") cfg.decoder = val;
            else if (key == "trials") cfg.trials = std::stoul(val);
            else if (key == "seed") cfg.seed = std::stoull(val);
            else if (key == "max_iters") cfg.max_iters = std::stoi(val);
            else if (key == "uplink") cfg.uplink = val;
            else throw std::runtime_error("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw std::runtime_error("config line " + std::to_string(lineno) + ": bad value for '" + key + "'");
        }
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("config: cannot open " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse(buf.str());
}

std::string ExperimentConfig::format() const {
    std::ostringstream os;
    os.precision(17);
    os << "n = " << n << '\n'
       << "rho = " << rho << '\n'
       << "sigma2_u = " << sigma2_u << '\n'
       << "sigma2_d = " << sigma2_d << '\n'
       << "r1 = " << r1 << '\n'
       << "r2 = " << r2 << '\n'
       << "source_ensemble = " << source_ensemble << '\n'
       << "channel_ensemble = " << channel_ensemble << '\n'
       << "decoder = " << decoder << '\n'
       << "trials = " << trials << '\n'
       << "seed = " << seed << '\n'
       << "max_iters = " << max_iters << '\n'
       << "uplink = " << uplink << '\n';
    return os.str();
}

std::pair<double, double> wilson_interval(std::size_t k, std::size_t n) {
    if (n == 0) return {0.0, 1.0};
    const double z = 1.959963984540054;
    double p = static_cast<double>(k) / static_cast<double>(n);
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (p + z2 / (2.0 * n)) / denom;
    double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

BitVector PointToPointCode::encode(const BitVector& message) const {
    if (message.size() != k) throw std::invalid_argument("PointToPointCode: message length");
    SparseBinaryMatrix Hm = H.col_slice(0, k);
    BitVector rhs = mat_vec_syndrome(Hm, message);
    BitVector parity = parity_solver->solve(rhs);
    BitVector out(H.n_cols());
    for (std::size_t i = 0; i < k; ++i) out.set(i, message.get(i));
    for (std::size_t i = 0; i < parity.size(); ++i) out.set(k + i, parity.get(i));
    return out;
}

PointToPointCode build_point_to_point_code(std::size_t k, std::size_t n, uint64_t seed) {
    if (!(k > 0 && k < n)) throw std::invalid_argument("point_to_point: need 0 < k < n");
    const std::size_t p = n - k;
    // Message and parity columns of degree 3; sockets spread evenly.
    std::vector<std::vector<int>> sockets(p, std::vector<int>(2, 0));
    std::size_t m_edges = 3 * k, p_edges = 3 * p;
    for (std::size_t c = 0; c < p; ++c) {
        sockets[c][0] = static_cast<int>(m_edges / p);
        sockets[c][1] = static_cast<int>(p_edges / p);
    }
    for (std::size_t c = 0; c < m_edges - (m_edges / p) * p; ++c) sockets[c][0]++;
    for (std::size_t c = 0; c < p_edges - (p_edges / p) * p; ++c) sockets[c][1]++;
    std::vector<PegVariable> vars;
    for (std::size_t i = 0; i < k; ++i) vars.push_back({0, 3});
    for (std::size_t i = 0; i < p; ++i) vars.push_back({1, 3});
    auto H = peg_grow(p, sockets, vars);

    // Rank-complete the parity part by resampling deficient columns.
    std::mt19937_64 rng(derive_seed(seed, 404));
    std::vector<std::vector<uint32_t>> col_checks(n);
    for (std::size_t r = 0; r < p; ++r)
        for (uint32_t c : H.row(r)) col_checks[c].push_back(static_cast<uint32_t>(r));
    for (int attempt = 0;; ++attempt) {
        std::vector<std::vector<uint32_t>> rows(p);
        for (std::size_t col = 0; col < n; ++col)
            for (uint32_t r : col_checks[col]) rows[r].push_back(static_cast<uint32_t>(col));
        SparseBinaryMatrix Hfull(p, n, std::move(rows));
        Gf2Solver solver(Hfull.col_slice(k, n));
        if (solver.full_rank()) {
            PointToPointCode code;
            code.H = std::move(Hfull);
            code.k = k;
            code.parity_solver = std::make_shared<Gf2Solver>(std::move(solver));
            return code;
        }
        if (attempt >= 100) throw std::runtime_error("point_to_point: parity part rank completion failed");
        for (uint32_t c : solver.deficient_cols()) {
            std::size_t col = k + c;
            std::vector<uint32_t> draw;
            std::uniform_int_distribution<uint32_t> pick(0, static_cast<uint32_t>(p - 1));
            while (draw.size() < col_checks[col].size()) {
                uint32_t r = pick(rng);
                if (std::find(draw.begin(), draw.end(), r) == draw.end()) draw.push_back(r);
            }
            std::sort(draw.begin(), draw.end());
            col_checks[col] = draw;
        }
    }
}

Experiment Experiment::prepare(const ExperimentConfig& cfg) {
    cfg.validate();
    auto pick_ensemble = [](const std::string& name) {
        for (const auto& known : table1_ensemble_names())
            if (known == name) return table1_ensemble(name);
        return load_ensemble_file(name);
    };
    MultiEdgeEnsemble ens_chan = pick_ensemble(cfg.channel_ensemble);
    MultiEdgeEnsemble ens_src = pick_ensemble(cfg.source_ensemble);
    Experiment exp{cfg, build_relay_codebook(ens_chan, ens_src, cfg.n, cfg.r1, cfg.r2, cfg.seed),
                   std::nullopt, std::nullopt};
    if (cfg.uplink == "biawgn") {
        exp.uplink_code1 = build_point_to_point_code(exp.codebook.k1(), cfg.n, derive_seed(cfg.seed, 501));
        exp.uplink_code2 = build_point_to_point_code(exp.codebook.k2(), cfg.n, derive_seed(cfg.seed, 502));
    }
    return exp;
}

namespace {

// RNG stream roles within one trial.
enum StreamRole : uint64_t { kSource = 0, kUplink1 = 1, kUplink2 = 2, kDown1 = 3, kDown2 = 4 };

TrialRecord run_trial(const Experiment& exp, const ExperimentConfig& cfg, std::size_t trial) {
    const RelayCodebook& cb = exp.codebook;
    TrialRecord rec;
    rec.trial = trial;

    auto rng_src = make_rng(cfg.seed, trial * 8 + kSource);
    auto [w1, w2] = sample_dsbs(cfg.rho, cfg.n, rng_src);
    BitVector b1 = syndrome_compress(cb.Hs(0), w1);
    BitVector b2 = syndrome_compress(cb.Hs(1), w2);

    // Uplink: noiseless index delivery by default; the biawgn mode sends
    // each index through a point-to-point code and lets errors propagate.
    BitVector b1_relay = b1, b2_relay = b2;
    if (cfg.uplink == "biawgn") {
        ChannelModel up = ChannelModel::biawgn(cfg.sigma2_u);
        auto decode_uplink = [&](const PointToPointCode& code, const BitVector& b, uint64_t role) {
            auto rng = make_rng(cfg.seed, trial * 8 + role);
            BitVector cw = code.encode(b);
            Observation obs = transmit(up, cw, rng);
            auto llr = channel_llr(up, obs);
            DecodeResult dr = bp_channel_decode(code.H, llr, cfg.max_iters);
            BitVector out(code.k);
            for (std::size_t i = 0; i < code.k; ++i) out.set(i, dr.decisions.get(i));
            return out;
        };
        b1_relay = decode_uplink(*exp.uplink_code1, b1, kUplink1);
        b2_relay = decode_uplink(*exp.uplink_code2, b2, kUplink2);
    }

    BitVector x0 = relay_encode(cb, b1_relay, b2_relay);

    ChannelModel down = cfg.sigma2_d > 0.0 ? ChannelModel::biawgn(cfg.sigma2_d)
                                           : ChannelModel::noiseless();
    BpOptions opt;
    opt.max_iters = cfg.max_iters;

    auto decode_node = [&](int node, const BitVector& own_w, const BitVector& own_b,
                           uint64_t role) {
        auto rng = make_rng(cfg.seed, trial * 8 + role);
        Observation obs = transmit(down, x0, rng);
        LlrVector x_llr = channel_llr(down, obs);
        return cfg.decoder == "joint"
                   ? joint_decode(cb, node, own_w, own_b, x_llr, cfg.rho, opt)
                   : separate_decode(cb, node, own_w, own_b, x_llr, cfg.rho, opt);
    };
    RelayDecodeResult d0 = decode_node(0, w1, b1, kDown1);
    RelayDecodeResult d1 = decode_node(1, w2, b2, kDown2);

    auto count_bit_errors = [](const BitVector& est, const BitVector& truth) {
        BitVector diff = est;
        diff ^= truth;
        return diff.popcount();
    };
    std::size_t e0 = count_bit_errors(d0.w_estimate, w2);
    std::size_t e1 = count_bit_errors(d1.w_estimate, w1);
    rec.word_error_node0 = e0 > 0;
    rec.word_error_node1 = e1 > 0;
    rec.bit_errors = e0 + e1;
    rec.iterations = std::max(d0.iterations_used, d1.iterations_used);
    rec.stage1_converged = d0.stage1_converged && d1.stage1_converged;
    rec.stage2_converged = d0.stage2_converged && d1.stage2_converged;
    return rec;
}

} // namespace

PipelineResult run_pipeline(const Experiment& exp, const ExperimentConfig& cfg) {
    cfg.validate();
    PipelineResult res;
    res.trials = cfg.trials;
    res.records.resize(cfg.trials);
    for (std::size_t t = 0; t < cfg.trials; ++t) res.records[t] = run_trial(exp, cfg, t);

    std::size_t any = 0, n0 = 0, n1 = 0, bits = 0;
    double iters = 0.0;
    for (const auto& r : res.records) {
        any += (r.word_error_node0 || r.word_error_node1) ? 1 : 0;
        n0 += r.word_error_node0 ? 1 : 0;
        n1 += r.word_error_node1 ? 1 : 0;
        bits += r.bit_errors;
        iters += r.iterations;
    }
    res.word_errors = any;
    res.wer = static_cast<double>(any) / cfg.trials;
    auto ci = wilson_interval(any, cfg.trials);
    res.wer_ci_lo = ci.first;
    res.wer_ci_hi = ci.second;
    res.wer_node0 = static_cast<double>(n0) / cfg.trials;
    res.wer_node1 = static_cast<double>(n1) / cfg.trials;
    res.ber = static_cast<double>(bits) / (2.0 * cfg.n * cfg.trials);
    res.avg_iters = iters / cfg.trials;
    return res;
}

PipelineResult run_pipeline(const ExperimentConfig& cfg) {
    Experiment exp = Experiment::prepare(cfg);
    return run_pipeline(exp, cfg);
}

std::vector<SnrSweepRow> sweep_snr(const ExperimentConfig& cfg,
                                   const std::vector<double>& es_n0_db_grid) {
    if (es_n0_db_grid.size() < 2) throw std::invalid_argument("sweep_snr: need at least 2 points");
    Experiment exp = Experiment::prepare(cfg);
    std::vector<SnrSweepRow> rows;
    for (std::size_t gi = 0; gi < es_n0_db_grid.size(); ++gi) {
        double db = es_n0_db_grid[gi];
        ExperimentConfig point = cfg;
        point.sigma2_d = es_n0_db_to_sigma2(db);
        // Common random numbers: both decoders replay the identical seed
        // stream at each grid point.
        point.seed = derive_seed(cfg.seed, 9000 + gi);
        for (const char* dec : {"separate", "joint"}) {
            point.decoder = dec;
            SnrSweepRow row;
            row.es_n0_db = db;
            row.sigma2_d = point.sigma2_d;
            row.decoder = dec;
            row.result = run_pipeline(exp, point);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::string pipeline_csv_header() {
    return "es_n0_db,sigma2_d,rho,decoder,trials,word_errors,wer,wer_ci_lo,wer_ci_hi,ber,avg_iters\n";
}

std::string pipeline_csv_row(double es_n0_db, double sigma2_d, double rho,
                             const std::string& decoder, const PipelineResult& r) {
    std::ostringstream os;
    os.precision(10);
    os << es_n0_db << ',' << sigma2_d << ',' << rho << ',' << decoder << ',' << r.trials << ','
       << r.word_errors << ',' << r.wer << ',' << r.wer_ci_lo << ',' << r.wer_ci_hi << ',' << r.ber
       << ',' << r.avg_iters << '\n';
    return os.str();
}

std::string sweep_rows_to_csv(const std::vector<SnrSweepRow>& rows, double rho) {
    std::string out = pipeline_csv_header();
    for (const auto& row : rows)
        out += pipeline_csv_row(row.es_n0_db, row.sigma2_d, rho, row.decoder, row.result);
    return out;
}

} // namespace relaynet
