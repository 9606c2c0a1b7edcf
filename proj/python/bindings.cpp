// Python bindings for the main library operations.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "relaynet/bp.hpp"
#include "relaynet/channels.hpp"
#include "relaynet/codebook.hpp"
#include "relaynet/density_evolution.hpp"
#include "relaynet/ensemble.hpp"
#include "relaynet/info_region.hpp"
#include "relaynet/peg.hpp"
#include "relaynet/simulation.hpp"
#include "relaynet/sparse_matrix.hpp"

namespace py = pybind11;
using namespace relaynet;

namespace {

BitVector bits_from_list(const std::vector<int>& bits) { return BitVector::from_bits(bits); }

py::dict pipeline_to_dict(const PipelineResult& r) {
    py::dict d;
    d["trials"] = r.trials;
    d["word_errors"] = r.word_errors;
    d["wer"] = r.wer;
    d["wer_ci_lo"] = r.wer_ci_lo;
    d["wer_ci_hi"] = r.wer_ci_hi;
    d["wer_node0"] = r.wer_node0;
    d["wer_node1"] = r.wer_node1;
    d["ber"] = r.ber;
    d["avg_iters"] = r.avg_iters;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Two-way relay network coding: regions, LDPC construction, BP decoding, "
              "density evolution, and the Monte Carlo pipeline.";

    // --- information regions ------------------------------------------
    m.def("binary_entropy", &binary_entropy, py::arg("p"));
    m.def("bsc_capacity", &bsc_capacity, py::arg("crossover"));
    m.def("biawgn_capacity", &biawgn_capacity, py::arg("sigma2"));
    m.def("biawgn_sigma2_for_capacity", &biawgn_sigma2_for_capacity, py::arg("capacity"));

    py::class_<JointPmf>(m, "JointPmf")
        .def(py::init<std::vector<std::size_t>, std::vector<double>>(), py::arg("alphabet_sizes"),
             py::arg("probs"))
        .def_property_readonly("num_vars", &JointPmf::num_vars)
        .def_property_readonly("alphabet_sizes", &JointPmf::alphabet_sizes)
        .def_property_readonly("probs", &JointPmf::probs)
        .def("subset_entropy", &JointPmf::subset_entropy, py::arg("mask"))
        .def("entropy", &JointPmf::entropy)
        .def("format", &JointPmf::format)
        .def_static("parse", &JointPmf::parse, py::arg("text"));

    m.def("dsbs_pmf", [](double rho) { return DsbsSource(rho).to_joint_pmf(); }, py::arg("rho"));
    m.def("conditional_entropy", &conditional_entropy, py::arg("pmf"), py::arg("target_set"),
          py::arg("given_set"));

    py::class_<RegionQuery>(m, "RegionQuery")
        .def(py::init<JointPmf, std::vector<double>, std::vector<double>>(), py::arg("source"),
             py::arg("uplink_capacities"), py::arg("downlink_mutuals"));

    py::enum_<RegionVerdict>(m, "RegionVerdict")
        .value("achievable", RegionVerdict::achievable)
        .value("boundary", RegionVerdict::boundary)
        .value("not_achievable", RegionVerdict::not_achievable);

    m.def("check_jscc_achievable", [](const RegionQuery& q) {
        auto rep = check_jscc_achievable(q);
        py::list rows;
        for (const auto& r : rep.inequalities) {
            py::dict d;
            d["kind"] = r.kind == InequalityReport::Kind::uplink_subset ? "uplink" : "downlink";
            d["subset_mask"] = r.subset_mask;
            d["lhs"] = r.lhs;
            d["rhs"] = r.rhs;
            d["slack"] = r.slack();
            rows.append(d);
        }
        py::dict out;
        out["verdict"] = rep.verdict;
        out["min_slack"] = rep.min_slack;
        out["inequalities"] = rows;
        return out;
    });
    m.def("check_separation_feasible", [](const RegionQuery& q) {
        auto sep = check_separation_feasible(q);
        py::dict out;
        out["feasible"] = sep.feasible;
        out["max_min_slack"] = sep.max_min_slack;
        if (sep.feasible) {
            out["witness"] = sep.witness.rates;
        } else {
            auto terms = [](const std::vector<CertificateTerm>& ts) {
                py::list l;
                for (const auto& t : ts) {
                    py::dict d;
                    d["kind"] = t.kind == InequalityReport::Kind::uplink_subset ? "uplink" : "downlink";
                    d["subset_mask"] = t.subset_mask;
                    d["weight"] = t.weight;
                    l.append(d);
                }
                return l;
            };
            out["lower_terms"] = terms(sep.lower_terms);
            out["upper_terms"] = terms(sep.upper_terms);
            out["lower_value"] = sep.lower_value;
            out["upper_value"] = sep.upper_value;
        }
        return out;
    });
    m.def("build_appendix_b_source", &build_appendix_b_source);
    m.def("build_appendix_b_query", &build_appendix_b_query);

    // --- sparse GF(2) machinery ----------------------------------------
    py::class_<SparseBinaryMatrix>(m, "SparseBinaryMatrix")
        .def(py::init<std::size_t, std::size_t, std::vector<std::vector<uint32_t>>>(),
             py::arg("n_rows"), py::arg("n_cols"), py::arg("rows"))
        .def_property_readonly("n_rows", &SparseBinaryMatrix::n_rows)
        .def_property_readonly("n_cols", &SparseBinaryMatrix::n_cols)
        .def_property_readonly("n_entries", &SparseBinaryMatrix::n_entries)
        .def("row", [](const SparseBinaryMatrix& h, std::size_t i) { return h.row(i); })
        .def("col", [](const SparseBinaryMatrix& h, std::size_t j) { return h.col(j); });

    m.def("mat_vec_syndrome", [](const SparseBinaryMatrix& H, const std::vector<int>& w) {
        return mat_vec_syndrome(H, bits_from_list(w)).to_bits();
    });
    m.def("gf2_rank", &gf2_rank);
    m.def("peel_erasures",
          [](const SparseBinaryMatrix& H, const std::vector<int>& known_mask,
             const std::vector<int>& known_values) {
              auto res = peel_erasures(H, bits_from_list(known_mask), bits_from_list(known_values));
              py::dict d;
              d["status"] = res.status == PeelStatus::resolved      ? "resolved"
                            : res.status == PeelStatus::stuck       ? "stuck"
                                                                    : "contradiction";
              d["values"] = res.values.to_bits();
              d["residual"] = res.residual;
              return d;
          });
    m.def("solve_relay_parity", [](const SparseBinaryMatrix& H0, const std::vector<int>& rhs) {
        return solve_relay_parity(H0, bits_from_list(rhs)).to_bits();
    });
    m.def("alist_to_string", &alist_to_string);
    m.def("alist_from_string", &alist_from_string);

    // --- ensembles and construction -------------------------------------
    py::class_<MultiEdgeEnsemble>(m, "MultiEdgeEnsemble")
        .def_property_readonly("name", &MultiEdgeEnsemble::name)
        .def_property_readonly("lambda_", &MultiEdgeEnsemble::lambda)
        .def_property_readonly("d_w", &MultiEdgeEnsemble::d_w)
        .def_property_readonly("d_b", &MultiEdgeEnsemble::d_b)
        .def_property_readonly("d_x", &MultiEdgeEnsemble::d_x)
        .def("design_compression_rate", &MultiEdgeEnsemble::design_compression_rate)
        .def("format", &MultiEdgeEnsemble::format)
        .def_static("parse", &MultiEdgeEnsemble::parse);
    m.def("table1_ensemble", &table1_ensemble, py::arg("which"));
    m.def("table1_ensemble_names", &table1_ensemble_names);
    m.def("regular_ensemble", &regular_ensemble, py::arg("var_deg"), py::arg("check_deg"));
    m.def("peg_construct", &peg_construct, py::arg("ensemble"), py::arg("n"), py::arg("seed"),
          py::arg("n_checks_override") = 0);

    py::class_<RelayCodebook>(m, "RelayCodebook")
        .def_property_readonly("block_length", &RelayCodebook::block_length)
        .def_property_readonly("k1", &RelayCodebook::k1)
        .def_property_readonly("k2", &RelayCodebook::k2)
        .def_property_readonly("H", &RelayCodebook::H)
        .def_property_readonly("H0", &RelayCodebook::H0)
        .def_property_readonly("H1", &RelayCodebook::H1)
        .def_property_readonly("H2", &RelayCodebook::H2)
        .def("Hs", &RelayCodebook::Hs, py::arg("node"));
    m.def("build_relay_codebook", &build_relay_codebook, py::arg("ens_down"), py::arg("ens_src"),
          py::arg("n"), py::arg("r1"), py::arg("r2"), py::arg("seed"));
    m.def("syndrome_compress", [](const SparseBinaryMatrix& Hs, const std::vector<int>& w) {
        return syndrome_compress(Hs, bits_from_list(w)).to_bits();
    });
    m.def("relay_encode",
          [](const RelayCodebook& cb, const std::vector<int>& b1, const std::vector<int>& b2) {
              return relay_encode(cb, bits_from_list(b1), bits_from_list(b2)).to_bits();
          });

    // --- channels ---------------------------------------------------------
    m.def("sample_dsbs",
          [](double rho, std::size_t n, uint64_t seed) {
              auto rng = make_rng(seed, 0);
              auto [w1, w2] = sample_dsbs(rho, n, rng);
              return py::make_tuple(w1.to_bits(), w2.to_bits());
          },
          py::arg("rho"), py::arg("n"), py::arg("seed") = 1);
    m.def("correlation_llr", &correlation_llr, py::arg("rho"), py::arg("own_bit"));
    m.def("sigma2_to_es_n0_db", &sigma2_to_es_n0_db);
    m.def("es_n0_db_to_sigma2", &es_n0_db_to_sigma2);

    // --- decoding -----------------------------------------------------------
    m.def("bp_channel_decode",
          [](const SparseBinaryMatrix& H, const std::vector<double>& priors, int max_iters,
             double damping) {
              auto res = bp_channel_decode(H, priors, max_iters, damping);
              py::dict d;
              d["decisions"] = res.decisions.to_bits();
              d["converged"] = res.converged;
              d["iterations"] = res.iterations_used;
              d["unsatisfied_checks"] = res.unsatisfied_checks;
              return d;
          },
          py::arg("H"), py::arg("priors"), py::arg("max_iters") = 200, py::arg("damping") = 1.0);
    m.def("sw_source_decode",
          [](const SparseBinaryMatrix& Hs, const std::vector<int>& syndrome,
             const std::vector<int>& side_info, double rho, int max_iters) {
              auto res = sw_source_decode(Hs, bits_from_list(syndrome), bits_from_list(side_info),
                                          rho, max_iters);
              py::dict d;
              d["decisions"] = res.decisions.to_bits();
              d["converged"] = res.converged;
              d["iterations"] = res.iterations_used;
              return d;
          },
          py::arg("Hs"), py::arg("syndrome"), py::arg("side_info"), py::arg("rho"),
          py::arg("max_iters") = 200);
    auto relay_result_dict = [](const RelayDecodeResult& res) {
        py::dict d;
        d["w_estimate"] = res.w_estimate.to_bits();
        d["b_estimate"] = res.b_estimate.to_bits();
        d["converged"] = res.converged;
        d["stage1_converged"] = res.stage1_converged;
        d["stage2_converged"] = res.stage2_converged;
        d["iterations"] = res.iterations_used;
        return d;
    };
    m.def("separate_decode",
          [relay_result_dict](const RelayCodebook& cb, int node, const std::vector<int>& own_bits,
                              const std::vector<int>& own_index, const std::vector<double>& x_llr,
                              double rho, int max_iters) {
              BpOptions opt;
              opt.max_iters = max_iters;
              return relay_result_dict(separate_decode(cb, node, bits_from_list(own_bits),
                                                       bits_from_list(own_index), x_llr, rho, opt));
          },
          py::arg("cb"), py::arg("node"), py::arg("own_bits"), py::arg("own_index"),
          py::arg("x_llr"), py::arg("rho"), py::arg("max_iters") = 200);
    m.def("joint_decode",
          [relay_result_dict](const RelayCodebook& cb, int node, const std::vector<int>& own_bits,
                              const std::vector<int>& own_index, const std::vector<double>& x_llr,
                              double rho, int max_iters) {
              BpOptions opt;
              opt.max_iters = max_iters;
              return relay_result_dict(joint_decode(cb, node, bits_from_list(own_bits),
                                                    bits_from_list(own_index), x_llr, rho, opt));
          },
          py::arg("cb"), py::arg("node"), py::arg("own_bits"), py::arg("own_index"),
          py::arg("x_llr"), py::arg("rho"), py::arg("max_iters") = 200);

    // --- density evolution ----------------------------------------------------
    m.def("de_bec_exact", &de_bec_exact, py::arg("ensemble"), py::arg("eps"));
    m.def("de_bec_exact_threshold", &de_bec_exact_threshold, py::arg("ensemble"),
          py::arg("tol") = 1e-6);
    m.def("de_run",
          [](const MultiEdgeEnsemble& ens_chan, const MultiEdgeEnsemble& ens_src, double rho,
             double sigma2_d, std::size_t pop_size, int max_iters, uint64_t seed) {
              auto pt = de_run(ens_chan, ens_src, rho, sigma2_d, pop_size, max_iters, seed);
              py::dict d;
              d["rho"] = pt.rho;
              d["sigma2_d"] = pt.sigma2_d;
              d["converged"] = pt.converged;
              d["residual_error"] = pt.residual_error;
              d["iterations"] = pt.iterations;
              return d;
          },
          py::arg("ens_chan"), py::arg("ens_src"), py::arg("rho"), py::arg("sigma2_d"),
          py::arg("pop_size") = 100000, py::arg("max_iters") = 500, py::arg("seed") = 1);
    m.def("de_source_threshold_rho",
          [](const MultiEdgeEnsemble& ens_src, double tol, std::size_t pop, int max_iters,
             uint64_t seed) {
              DeOptions opt;
              opt.pop_size = pop;
              opt.max_iters = max_iters;
              opt.seed = seed;
              auto th = de_source_threshold_rho(ens_src, tol, opt);
              return th ? py::object(py::float_(*th)) : py::none();
          },
          py::arg("ens_src"), py::arg("tol") = 2e-3, py::arg("pop_size") = 100000,
          py::arg("max_iters") = 500, py::arg("seed") = 1);
    m.def("de_threshold_sigma",
          [](const MultiEdgeEnsemble& ens_chan, const MultiEdgeEnsemble& ens_src,
             const std::string& decoder, double rho, double tol, std::size_t pop, int max_iters,
             uint64_t seed) {
              DeOptions opt;
              opt.pop_size = pop;
              opt.max_iters = max_iters;
              opt.seed = seed;
              auto th = de_threshold_sigma(ens_chan, ens_src,
                                           decoder == "separate" ? DecoderKind::separate
                                                                 : DecoderKind::joint,
                                           rho, tol, opt);
              return th ? py::object(py::float_(*th)) : py::none();
          },
          py::arg("ens_chan"), py::arg("ens_src"), py::arg("decoder"), py::arg("rho"),
          py::arg("tol") = 5e-3, py::arg("pop_size") = 100000, py::arg("max_iters") = 500,
          py::arg("seed") = 1);

    // --- simulation pipeline -------------------------------------------------
    m.def("run_pipeline", [](const std::string& config_text) {
        ExperimentConfig cfg = ExperimentConfig::parse(config_text);
        return pipeline_to_dict(run_pipeline(cfg));
    }, py::arg("config_text"));
    m.def("sweep_snr",
          [](const std::string& config_text, const std::vector<double>& grid) {
              ExperimentConfig cfg = ExperimentConfig::parse(config_text);
              auto rows = sweep_snr(cfg, grid);
              py::list out;
              for (const auto& row : rows) {
                  py::dict d = pipeline_to_dict(row.result);
                  d["es_n0_db"] = row.es_n0_db;
                  d["sigma2_d"] = row.sigma2_d;
                  d["decoder"] = row.decoder;
                  out.append(d);
              }
              return out;
          },
          py::arg("config_text"), py::arg("es_n0_db_grid"));
}
