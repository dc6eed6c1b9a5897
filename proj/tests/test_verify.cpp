#include <doctest.h>

#include <cmath>
#include <vector>

#include "zrl/cylinder.hpp"
#include "zrl/errors.hpp"
#include "zrl/jump_rate.hpp"
#include "zrl/lattice.hpp"
#include "zrl/thermo.hpp"
#include "zrl/verify.hpp"

using zrl::experiment;
using zrl::initial_condition;
using zrl::replica_plan;

namespace {
constexpr double kPi = 3.14159265358979323846;

const zrl::thermo_profile& p0() {
    static const zrl::thermo_profile p(zrl::jump_rate_spec::evans(0.0));
    return p;
}
const zrl::thermo_profile& p4() {
    static const zrl::thermo_profile p(zrl::jump_rate_spec::evans(4.0));
    return p;
}

experiment stationary(const zrl::lattice& lat, const zrl::thermo_profile& p,
                      double rho, double T) {
    experiment ex;
    ex.lat = &lat;
    ex.profile = &p;
    ex.init.family = initial_condition::kind::product_profile;
    ex.init.rho0.assign(std::size_t(lat.n_sites()), rho);
    ex.T = T;
    return ex;
}

experiment frozen_empty(const zrl::lattice& lat, const zrl::thermo_profile& p,
                        double T) {
    experiment ex;
    ex.lat = &lat;
    ex.profile = &p;
    ex.init.family = initial_condition::kind::deterministic;
    ex.init.eta.assign(std::size_t(lat.n_sites()), 0);
    ex.T = T;
    return ex;
}

const zrl::space_function one = [](std::array<double, 2>) { return 1.0; };
const zrl::space_function cosu = [](std::array<double, 2> u) {
    return std::cos(2.0 * kPi * u[0]);
};

zrl::separable_field cos_field() {
    zrl::separable_field G;
    G.space = cosu;
    G.space_grad = [](std::array<double, 2> u, int) {
        return -2.0 * kPi * std::sin(2.0 * kPi * u[0]);
    };
    G.space_laplacian = [](std::array<double, 2> u) {
        return -4.0 * kPi * kPi * std::cos(2.0 * kPi * u[0]);
    };
    return G;
}
}  // namespace

TEST_CASE("one-block defect: exact zeros") {
    const zrl::lattice lat(1, 16);
    replica_plan plan;
    plan.R = 4;

    // the occupancy observable is its own block homologue: zero bitwise
    auto ex = stationary(lat, p4(), 0.3, 0.25);
    const auto id = zrl::one_block_stat(ex, zrl::cylinder_observable::occupancy(),
                                        cosu, 2, plan);
    for (double v : id.values) CHECK(v == 0.0);
    CHECK(id.mean == 0.0);

    // frozen empty lattice: every block density is zero and Phibar(0) = 0
    auto fz = frozen_empty(lat, p4(), 0.5);
    const auto z = zrl::one_block_stat(
        fz, zrl::cylinder_observable::local_jump_rate(p4()), one, 2, plan);
    for (double v : z.values) CHECK(v == 0.0);

    CHECK_THROWS_AS(zrl::one_block_stat(
                        ex, zrl::cylinder_observable::occupancy(), one, 9, plan),
                    zrl::config_error);
}

TEST_CASE("one-block defect shrinks with the lattice and the block") {
    replica_plan plan;
    plan.R = 16;
    plan.master_seed = 11;
    const auto psi_small = zrl::cylinder_observable::local_jump_rate(p0());

    const zrl::lattice small(1, 16), large(1, 64);
    auto ex_small = stationary(small, p0(), 0.5, 1.0);
    auto ex_large = stationary(large, p0(), 0.5, 1.0);
    const auto a = zrl::one_block_stat(ex_small, psi_small, one, 1, plan);
    const auto b = zrl::one_block_stat(ex_large, psi_small, one, 4, plan);
    CHECK(a.mean > 0.0);
    CHECK(b.mean > 0.0);
    CHECK(b.mean + 2.0 * b.se < a.mean + 2.0 * a.se);

    // replica fan-out is deterministic regardless of worker count
    replica_plan serial = plan;
    serial.workers = 1;
    const auto c = zrl::one_block_stat(ex_small, psi_small, one, 1, serial);
    CHECK(c.values == a.values);
}

TEST_CASE("continuity residuals: conservation is exact, scaling holds") {
    replica_plan plan;
    plan.R = 24;
    plan.master_seed = 5;
    const std::vector<double> times = {0.02, 0.04, 0.06, 0.08, 0.1};

    // spatially and temporally constant weight: both residuals collapse to
    // the conservation identity
    zrl::separable_field Gc;
    Gc.space = one;
    Gc.space_grad = [](std::array<double, 2>, int) { return 0.0; };
    Gc.space_laplacian = [](std::array<double, 2>) { return 0.0; };
    const zrl::lattice lat32(1, 32);
    auto ex32 = stationary(lat32, p0(), 0.5, 0.1);
    const auto cons = zrl::continuity_residuals(ex32, Gc, times, plan);
    for (double v : cons.v1.values) CHECK(v == 0.0);
    for (double v : cons.v2.values) CHECK(v == 0.0);

    // frozen empty lattice: nothing moves, nothing flows
    auto fz = frozen_empty(lat32, p0(), 0.1);
    const auto zero = zrl::continuity_residuals(fz, cos_field(), times, plan);
    CHECK(zero.v1.mean == 0.0);
    CHECK(zero.v2.mean == 0.0);

    // residual supremum shrinks roughly like the martingale scale N^{-1/2}
    const zrl::lattice lat64(1, 64), lat128(1, 128);
    auto ex64 = stationary(lat64, p0(), 0.5, 0.1);
    auto ex128 = stationary(lat128, p0(), 0.5, 0.1);
    const auto r64 = zrl::continuity_residuals(ex64, cos_field(), times, plan);
    const auto r128 = zrl::continuity_residuals(ex128, cos_field(), times, plan);
    CHECK(r64.v2.mean > 0.0);
    CHECK(r128.v2.mean <=
          0.75 * r64.v2.mean + 2.0 * (r128.v2.se + 0.75 * r64.v2.se));
    CHECK(r128.v1.mean <=
          0.80 * r64.v1.mean + 2.0 * (r128.v1.se + 0.80 * r64.v1.se));
}

TEST_CASE("martingale quadratic variation stays under the a-priori bound") {
    replica_plan plan;
    plan.R = 40;
    plan.master_seed = 21;
    const zrl::lattice lat(1, 32);
    auto ex = stationary(lat, p0(), 0.5, 0.05);

    const auto res = zrl::martingale_qv_check(ex, cos_field(), plan);
    CHECK(std::abs(res.a_T.mean) <= 5.0 * res.a_T.se);  // centred martingale
    // 2d |grad G|^2 |g'| T times the sampled mean initial mass (near 0.5)
    CHECK(res.bound ==
          doctest::Approx(2.0 * 4.0 * kPi * kPi * 1.0 * 0.05 * 0.5)
              .epsilon(0.12));
    CHECK(res.variance > 0.0);
    CHECK(res.variance_upper_cl > res.variance);
    CHECK(res.variance_upper_cl <= res.bound);
    CHECK(res.realized_qv.mean > 0.0);
    CHECK(res.realized_qv.mean <= res.bound);

    // a constant field has no martingale part at all
    zrl::separable_field Gc;
    Gc.space = one;
    Gc.space_grad = [](std::array<double, 2>, int) { return 0.0; };
    Gc.space_laplacian = [](std::array<double, 2>) { return 0.0; };
    const auto flat = zrl::martingale_qv_check(ex, Gc, plan);
    for (double v : flat.a_T.values) CHECK(v == 0.0);
    for (double v : flat.realized_qv.values) CHECK(v == 0.0);

    zrl::separable_field Gt = cos_field();
    Gt.time = [](double t) { return t; };
    CHECK_THROWS_AS(zrl::martingale_qv_check(ex, Gt, plan), zrl::config_error);
}

TEST_CASE("equivalence-of-ensembles table") {
    // full enumeration cross-check at n = 3, K = 6, b = 4
    const auto& spec4 = p4().spec();
    double num = 0.0, den = 0.0;
    for (std::int64_t k1 = 0; k1 <= 6; ++k1)
        for (std::int64_t k2 = 0; k2 + k1 <= 6; ++k2) {
            const std::int64_t k3 = 6 - k1 - k2;
            const double w = std::exp(-spec4.log_gfact(k1) -
                                      spec4.log_gfact(k2) -
                                      spec4.log_gfact(k3));
            den += w;
            num += spec4.rate_unbounded(std::size_t(k1)) * w;
        }
    const auto row3 = zrl::eoe_table(p4(), 2.0, {3});
    CHECK(row3[0].K == 6);
    CHECK(row3[0].expectation_g == doctest::Approx(num / den).epsilon(1e-12));

    // degenerate baseline: a single site holds everything
    const auto row1 = zrl::eoe_table(p4(), 1.0, {1});
    CHECK(row1[0].expectation_g == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(row1[0].deviation == doctest::Approx(4.0).epsilon(1e-11));

    // subcritical: deviation from Phi(0.5) = 1/3 shrinks below 0.01 by n=200
    const auto sub = zrl::eoe_table(p0(), 0.5, {200});
    CHECK(sub[0].deviation < 0.01);

    // supercritical: deviations from phi_c = 1 strictly decreasing, with the
    // frozen leading values
    const auto sup = zrl::eoe_table(p4(), 1.0, {50, 100, 200});
    CHECK(sup[0].deviation == doctest::Approx(0.136213743702).epsilon(1e-7));
    CHECK(sup[1].deviation == doctest::Approx(0.090376983874).epsilon(1e-7));
    CHECK(sup[2].deviation < sup[1].deviation);
    CHECK(sup[1].deviation < sup[0].deviation);

    // deterministic: a second call reproduces the table exactly
    const auto again = zrl::eoe_table(p4(), 1.0, {50, 100, 200});
    for (std::size_t i = 0; i < sup.size(); ++i)
        CHECK(again[i].expectation_g == sup[i].expectation_g);
}

TEST_CASE("block-averaged jump rate against the critical fugacity") {
    replica_plan plan;
    plan.R = 16;
    plan.master_seed = 33;
    const zrl::lattice lat(1, 32);
    const std::vector<double> times = {0.05, 0.1, 0.15, 0.2, 0.25, 0.3};

    auto fz = frozen_empty(lat, p4(), 0.3);
    const auto z = zrl::jump_rate_bound(fz, 0.125, times, plan);
    CHECK(z.sup_stat.mean == 0.0);
    CHECK(z.sites_above_band == 0);

    // subcritical stationary start: time-averaged site values sit near
    // Phi(0.25) and inside the phi_c band
    auto sub = stationary(lat, p4(), 0.25, 0.3);
    const auto rs = zrl::jump_rate_bound(sub, 0.125, times, plan);
    CHECK(rs.phi_c == 1.0);
    CHECK(rs.sup_stat.mean > p4().Phi(0.25));
    CHECK(rs.sites_above_band == 0);

    // supercritical quench: one particle per site (rho = 2 rho_c).  At this
    // small N the stationary block rate sits visibly above phi_c (the same
    // finite-size bias eoe_table measures), so the 3-s.e. band is only
    // asserted at the asymptotic scale in the acceptance harness; here we
    // check relaxation and determinism.
    experiment sup;
    sup.lat = &lat;
    sup.profile = &p4();
    sup.init.family = initial_condition::kind::deterministic;
    sup.init.eta.assign(32, 1);
    sup.T = 0.3;
    const auto rsup = zrl::jump_rate_bound(sup, 0.125, times, plan);
    CHECK(rsup.sup_stat.mean > 1.0);          // a max, sits above phi_c
    CHECK(rsup.sup_stat.mean < 5.0);          // far below the t=0 rate g(1)
    CHECK(rsup.site_mean.size() == 32);
    const auto rerun = zrl::jump_rate_bound(sup, 0.125, times, plan);
    CHECK(rerun.sup_stat.values == rsup.sup_stat.values);
    CHECK(rerun.site_mean == rsup.site_mean);

    CHECK_THROWS_AS(zrl::jump_rate_bound(sub, 0.01, times, plan),
                    zrl::config_error);  // [N eps] = 0
}

TEST_CASE("double-block excess and cut-off mass") {
    replica_plan plan;
    plan.R = 6;
    plan.master_seed = 8;
    const zrl::lattice lat(1, 16);

    // M and A above every reachable block value: both integrals vanish
    auto ex = stationary(lat, p4(), 0.25, 0.1);
    const auto z = zrl::double_block_stat(ex, 1, 0.25, 1e6, 1e6, plan);
    for (double v : z.truncated_excess.values) CHECK(v == 0.0);
    for (double v : z.cutoff_mass.values) CHECK(v == 0.0);

    // condensed start: both diagnostics are positive and finite
    experiment sup;
    sup.lat = &lat;
    sup.profile = &p4();
    sup.init.family = initial_condition::kind::canonical;
    sup.init.K = 32;  // rho = 2 > rho_c
    sup.T = 0.1;
    const auto d = zrl::double_block_stat(sup, 1, 0.25, 1.0, 0.5, plan);
    CHECK(d.truncated_excess.mean > 0.0);
    CHECK(d.cutoff_mass.mean > 0.0);
    CHECK(std::isfinite(d.truncated_excess.se));

    CHECK_THROWS_AS(zrl::double_block_stat(ex, 1, 0.25, -1.0, 0.0, plan),
                    zrl::config_error);
}

TEST_CASE("energy diagnostics from smoothed jump-rate snapshots") {
    replica_plan plan;
    plan.R = 4;
    plan.master_seed = 14;
    const zrl::lattice lat(1, 32);

    // single snapshot of a flat profile at t = 0: every dictionary field
    // pays the -2H^2 price, so the lower bound is strictly negative, and the
    // gradient sum is exactly zero
    experiment flat;
    flat.lat = &lat;
    flat.profile = &p0();
    flat.init.family = initial_condition::kind::deterministic;
    flat.init.eta.assign(32, 1);
    flat.T = 0.0;
    const auto r0 = zrl::energy_stat(flat, 0.125, {0.0}, plan);
    CHECK(r0.k0_lower.mean < 0.0);
    CHECK(r0.grad_energy.mean == 0.0);

    const zrl::lattice lat2(2, 8);
    auto ex2 = stationary(lat2, p0(), 0.5, 0.1);
    CHECK_THROWS_AS(zrl::energy_stat(ex2, 0.25, {0.1}, plan),
                    zrl::config_error);
}

TEST_CASE("energy gradient statistic is stable in N") {
    replica_plan plan;
    plan.R = 12;
    plan.master_seed = 29;
    const std::vector<double> times = {0.01, 0.02, 0.03, 0.04, 0.05};
    const auto sine_exp = [&](const zrl::lattice& lat) {
        experiment ex;
        ex.lat = &lat;
        ex.profile = &p0();
        ex.init.family = initial_condition::kind::product_profile;
        ex.init.rho0.resize(std::size_t(lat.n_sites()));
        for (std::int64_t x = 0; x < lat.n_sites(); ++x)
            ex.init.rho0[std::size_t(x)] =
                0.5 + 0.3 * std::sin(2.0 * kPi * lat.position(x)[0]);
        ex.T = 0.05;
        return ex;
    };
    const zrl::lattice l128(1, 128), l256(1, 256);
    auto e128 = sine_exp(l128);
    auto e256 = sine_exp(l256);
    const auto a = zrl::energy_stat(e128, 1.0 / 16.0, times, plan);
    const auto b = zrl::energy_stat(e256, 1.0 / 16.0, times, plan);
    CHECK(a.grad_energy.mean > 0.0);
    CHECK(b.grad_energy.mean > 0.0);
    CHECK(std::abs(a.grad_energy.mean - b.grad_energy.mean) <=
          0.25 * std::max(a.grad_energy.mean, b.grad_energy.mean) +
              3.0 * (a.grad_energy.se + b.grad_energy.se));
    CHECK(std::isfinite(a.k0_lower.mean));
}

TEST_CASE("replica-mean density and budget propagation") {
    replica_plan plan;
    plan.R = 8;
    plan.master_seed = 2;
    const zrl::lattice lat(1, 32);
    auto ex = stationary(lat, p0(), 0.5, 0.05);
    const auto h = zrl::mean_density_at_time(ex, {one, cosu}, plan);
    CHECK(h.mean_fields.density.size() == 32);
    CHECK(h.pairings.size() == 2);
    CHECK(h.pairings[0] == doctest::Approx(0.5).epsilon(0.25));
    double mass = 0.0;
    for (double v : h.mean_fields.density) mass += v;
    CHECK(mass == doctest::Approx(h.pairings[0]).epsilon(1e-12));

    replica_plan starved = plan;
    starved.event_budget = 10;
    CHECK_THROWS_AS(zrl::mean_density_at_time(ex, {one}, starved),
                    zrl::event_budget_exceeded);
}
