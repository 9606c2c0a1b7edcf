#include <doctest.h>

#include <cmath>

#include "relaynet/density_evolution.hpp"
#include "relaynet/info_region.hpp"

using namespace relaynet;
using doctest::Approx;

namespace {

DeOptions fast_opts(uint64_t seed = 1) {
    DeOptions opt;
    opt.pop_size = 20000;
    opt.max_iters = 500;
    opt.seed = seed;
    return opt;
}

} // namespace

TEST_CASE("exact BEC recursion for the regular (3,6) ensemble") {
    auto reg = regular_ensemble(3, 6);
    CHECK(de_bec_exact(reg, 0.40) < 1e-10);
    CHECK(de_bec_exact(reg, 0.45) > 0.01);
    CHECK(de_bec_exact(reg, 0.0) == 0.0);
    double th = de_bec_exact_threshold(reg);
    CHECK(th == Approx(0.4294).epsilon(2e-3));
}

TEST_CASE("sampled DE matches the exact recursion on both sides of threshold") {
    auto reg = regular_ensemble(3, 6);
    auto below = de_run_system(plain_code_de_system(reg, ChannelModel::bec(0.40)), fast_opts(3));
    CHECK(below.converged);
    auto above = de_run_system(plain_code_de_system(reg, ChannelModel::bec(0.45)), fast_opts(4));
    CHECK_FALSE(above.converged);
}

TEST_CASE("sampled biawgn DE brackets the known (3,6) threshold") {
    auto reg = regular_ensemble(3, 6);
    // sigma_th ~ 0.88, sigma2_th ~ 0.776
    auto below = de_run_system(plain_code_de_system(reg, ChannelModel::biawgn(0.72)), fast_opts(5));
    CHECK(below.converged);
    auto above = de_run_system(plain_code_de_system(reg, ChannelModel::biawgn(0.84)), fast_opts(6));
    CHECK_FALSE(above.converged);
}

TEST_CASE("source-code DE converges below the published threshold and not above") {
    auto src = table1_ensemble("source_r12");
    auto below = de_run_system(source_de_system(src, 0.09), fast_opts(7));
    CHECK(below.converged);
    auto above = de_run_system(source_de_system(src, 0.125), fast_opts(8));
    CHECK_FALSE(above.converged);
}

TEST_CASE("noiseless-ish downlink converges for any correlation") {
    auto sys = joint_de_system(table1_ensemble("source_r12"), table1_ensemble("chan_sep_r12"),
                               0.2, ChannelModel::biawgn(0.05));
    auto opt = fast_opts(9);
    auto pt = de_run_system(sys, opt);
    // rho = 0.2 exceeds the source-code threshold: even a clean channel
    // cannot push the source part below target.
    CHECK_FALSE(pt.converged);
    auto sys2 = joint_de_system(table1_ensemble("source_r12"), table1_ensemble("chan_sep_r12"),
                                0.05, ChannelModel::biawgn(0.05));
    CHECK(de_run_system(sys2, opt).converged);
}

TEST_CASE("a channel far above the capacity match cannot converge") {
    // h(0.2) = 0.72 but C(sigma2 = 2.5) = 0.26: Eq-style converse violated.
    auto sys = joint_de_system(table1_ensemble("source_r12"), table1_ensemble("chan_sep_r12"),
                               0.2, ChannelModel::biawgn(2.5));
    CHECK_FALSE(de_run_system(sys, fast_opts(10)).converged);
}

TEST_CASE("channel-stage DE threshold sits between capacity and a small gap") {
    auto chan = table1_ensemble("chan_sep_r12");
    auto src = table1_ensemble("source_r12");
    auto opt = fast_opts(11);
    opt.pop_size = 30000;
    auto th = de_threshold_sigma(chan, src, DecoderKind::separate, 0.05, 0.01, opt);
    REQUIRE(th.has_value());
    double cap = biawgn_capacity(*th);
    // rate-1/2 bin recovery: threshold capacity above 0.5, within a modest gap
    CHECK(cap > 0.499);
    CHECK(cap < 0.56);
}

TEST_CASE("joint threshold beats the separate threshold at strong correlation") {
    auto chan = table1_ensemble("chan_sep_r12");
    auto src = table1_ensemble("source_r12");
    auto opt = fast_opts(12);
    auto sep = de_threshold_sigma(chan, src, DecoderKind::separate, 0.05, 0.01, opt);
    auto joint = de_threshold_sigma(chan, src, DecoderKind::joint, 0.05, 0.01, opt);
    REQUIRE(sep.has_value());
    REQUIRE(joint.has_value());
    CHECK(*joint > *sep + 0.05);  // tolerates noticeably more noise
    // And no boundary point may beat the converse bound C >= h(rho).
    CHECK(biawgn_capacity(*joint) >= binary_entropy(0.05));
}

TEST_CASE("uninformative correlation reduces the joint system to the channel stage") {
    auto chan = table1_ensemble("chan_sep_r12");
    auto src = table1_ensemble("source_r12");
    auto opt = fast_opts(13);
    // Probe on both sides of the channel-stage threshold, measuring the bin
    // error inside the joint system at rho ~ 1/2.
    auto sep_th = de_threshold_sigma(chan, src, DecoderKind::separate, 0.4999, 0.01, opt);
    REQUIRE(sep_th.has_value());
    auto sys_lo = joint_de_system(src, chan, 0.4999, ChannelModel::biawgn(*sep_th - 0.04), true);
    CHECK(de_run_system(sys_lo, opt).converged);
    auto sys_hi = joint_de_system(src, chan, 0.4999, ChannelModel::biawgn(*sep_th + 0.05), true);
    CHECK_FALSE(de_run_system(sys_hi, opt).converged);
}

TEST_CASE("threshold search is deterministic under a fixed seed") {
    auto reg = regular_ensemble(3, 6);
    auto opt = fast_opts(14);
    opt.pop_size = 10000;
    auto a = de_threshold_bec(reg, 0.005, opt);
    auto b = de_threshold_bec(reg, 0.005, opt);
    REQUIRE(a.has_value());
    CHECK(*a == *b);
    CHECK(*a == Approx(0.4294).epsilon(0.02));
}

TEST_CASE("region sweep emits capacity-bounded boundary points") {
    auto chan = table1_ensemble("chan_sep_r12");
    auto src = table1_ensemble("source_r12");
    auto opt = fast_opts(15);
    opt.pop_size = 10000;
    auto pts = de_region_sweep(chan, src, DecoderKind::joint, {0.03, 0.08}, 0.02, opt);
    REQUIRE(pts.size() == 2);
    for (const auto& p : pts) {
        REQUIRE(p.sigma2_threshold.has_value());
        CHECK(p.capacity_at_threshold >= p.h_rho);  // converse bound
    }
    auto csv = sweep_to_csv(pts);
    CHECK(csv.find("rho,h_rho,sigma2_threshold,capacity_at_threshold,converged_iters") == 0);
}

TEST_CASE("separate-decoder sweep is empty above the source threshold") {
    auto chan = table1_ensemble("chan_sep_r12");
    auto src = table1_ensemble("source_r12");
    auto opt = fast_opts(16);
    opt.pop_size = 10000;
    auto pts = de_region_sweep(chan, src, DecoderKind::separate, {0.05, 0.2}, 0.02, opt);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].sigma2_threshold.has_value());
    CHECK_FALSE(pts[1].sigma2_threshold.has_value());  // h(0.2) far above rate 1/2
}
