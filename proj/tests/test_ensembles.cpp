#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "zrl/ensembles.hpp"
#include "zrl/errors.hpp"
#include "zrl/jump_rate.hpp"
#include "zrl/lattice.hpp"
#include "zrl/rng.hpp"
#include "zrl/thermo.hpp"

using zrl::build_canonical_table;
using zrl::jump_rate_spec;
using zrl::thermo_profile;

TEST_CASE("fixed-mass normalizations against exact enumeration") {
    const auto g0 = jump_rate_spec::evans(0.0);
    const auto t0 = build_canonical_table(g0, 3, 6);
    // constant rates: Z_{n,K} counts weak compositions of K into n parts
    const double z2[] = {1, 2, 3, 4, 5, 6, 7};
    const double z3[] = {1, 3, 6, 10, 15, 21, 28};
    for (std::int64_t k = 0; k <= 6; ++k) {
        CHECK(std::exp(t0.at(2, k)) == doctest::Approx(z2[k]).epsilon(1e-12));
        CHECK(std::exp(t0.at(3, k)) == doctest::Approx(z3[k]).epsilon(1e-12));
    }

    const auto g4 = jump_rate_spec::evans(4.0);
    const auto t4 = build_canonical_table(g4, 4, 8);
    const double z24[] = {1.0,
                          2.0 / 5.0,
                          13.0 / 75.0,
                          44.0 / 525.0,
                          0.044444444444444444,
                          0.025396825396825397,
                          0.015419501133786848};
    for (std::int64_t k = 0; k <= 6; ++k)
        CHECK(std::exp(t4.at(2, k)) == doctest::Approx(z24[k]).epsilon(1e-12));
    CHECK(std::exp(t4.at(3, 6)) ==
          doctest::Approx(0.036269085411942556).epsilon(1e-12));

    CHECK_THROWS_AS(build_canonical_table(g4, 4, 5001), zrl::capacity_error);
}

TEST_CASE("fixed-mass expectation of the jump rate") {
    const auto g0 = jump_rate_spec::evans(0.0);
    const auto t0 = build_canonical_table(g0, 2, 3);
    // Z_{2,2}/Z_{2,3} = 3/4
    CHECK(zrl::canonical_expectation_g(t0, 2, 3) ==
          doctest::Approx(0.75).epsilon(1e-12));
    CHECK(zrl::canonical_expectation_g(t0, 2, 0) == 0.0);
    CHECK_THROWS_AS(zrl::canonical_expectation_g(t0, 3, 3), zrl::config_error);
}

TEST_CASE("one-site marginal under the fixed-mass law") {
    const auto g0 = jump_rate_spec::evans(0.0);
    const auto t0 = build_canonical_table(g0, 2, 3);
    const auto m0 = zrl::canonical_marginal(t0, g0, 2, 3);
    REQUIRE(m0.size() == 4);
    for (double p : m0) CHECK(p == doctest::Approx(0.25).epsilon(1e-12));

    const auto g4 = jump_rate_spec::evans(4.0);
    const auto t4 = build_canonical_table(g4, 4, 8);
    const auto m4 = zrl::canonical_marginal(t4, g4, 4, 8);
    const double expected[] = {
        0.48016403735749502,   0.1437920053609188,   0.074307289892246664,
        0.05134487545155323,   0.043233388613115667, 0.042369278331357715,
        0.046829202366237471,  0.055875752823351534, 0.062084169803723922};
    REQUIRE(m4.size() == 9);
    double sum = 0.0;
    for (std::size_t j = 0; j < 9; ++j) {
        CHECK(m4[j] == doctest::Approx(expected[j]).epsilon(1e-11));
        sum += m4[j];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("equivalence of ensembles: supercritical gap shrinks with volume") {
    const auto g4 = jump_rate_spec::evans(4.0);
    const auto t50 = build_canonical_table(g4, 50, 50);
    const auto t100 = build_canonical_table(g4, 100, 100);
    CHECK(std::abs(zrl::canonical_expectation_g(t50, 50, 50) - 1.0) ==
          doctest::Approx(0.136213743702).epsilon(1e-8));
    CHECK(std::abs(zrl::canonical_expectation_g(t100, 100, 100) - 1.0) ==
          doctest::Approx(0.090376983874).epsilon(1e-8));

    // subcritical: E[g] approaches Phi(rho) = 1/3 at rho = 1/2, b = 0
    const auto g0 = jump_rate_spec::evans(0.0);
    const auto t200 = build_canonical_table(g0, 200, 100);
    CHECK(zrl::canonical_expectation_g(t200, 200, 100) ==
          doctest::Approx(0.334448160535).epsilon(1e-9));
}

TEST_CASE("sequential sampler draws the exact fixed-mass law") {
    const auto g4 = jump_rate_spec::evans(4.0);
    const auto t4 = build_canonical_table(g4, 4, 8);
    const auto exact = zrl::canonical_marginal(t4, g4, 4, 8);
    zrl::rng gen(20240811, 0);
    const std::size_t n_samples = 100000;
    std::vector<double> first(9, 0.0), last(9, 0.0);
    double mean_site2 = 0.0;
    for (std::size_t s = 0; s < n_samples; ++s) {
        const auto occ = zrl::sample_canonical(t4, g4, gen);
        REQUIRE(occ.size() == 4);
        CHECK(std::accumulate(occ.begin(), occ.end(), std::int64_t{0}) == 8);
        first[static_cast<std::size_t>(occ[0])] += 1.0;
        last[static_cast<std::size_t>(occ[3])] += 1.0;
        mean_site2 += static_cast<double>(occ[2]);
    }
    for (std::size_t j = 0; j < 9; ++j) {
        const double se =
            std::sqrt(exact[j] * (1.0 - exact[j]) / double(n_samples));
        // all sites share the marginal by exchangeability; 5 sigma bands
        CHECK(std::abs(first[j] / double(n_samples) - exact[j]) < 5.0 * se);
        CHECK(std::abs(last[j] / double(n_samples) - exact[j]) < 5.0 * se);
    }
    double exact_mean = 0.0;
    for (std::size_t j = 0; j < 9; ++j) exact_mean += double(j) * exact[j];
    CHECK(exact_mean == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(std::abs(mean_site2 / double(n_samples) - 2.0) < 0.05);
}

TEST_CASE("product-profile marginals and the supercritical guard") {
    const thermo_profile p4(jump_rate_spec::evans(4.0));
    const auto m = zrl::prepare_product_marginals({0.25, 0.25, 0.1}, p4);
    CHECK(std::abs(m.phi[0] - 0.7517996585526705249) < 1e-9);
    CHECK(m.phi[1] == m.phi[0]);
    CHECK(m.z[0] == doctest::Approx(1.2083677922385183583).epsilon(1e-9));
    CHECK_THROWS_AS(zrl::prepare_product_marginals({0.25, 0.6}, p4),
                    zrl::supercritical_profile);
    CHECK_THROWS_AS(zrl::prepare_product_marginals({-0.1}, p4),
                    zrl::config_error);
}

TEST_CASE("one-site grand-canonical sampler matches its geometric law") {
    // b = 0, phi = 1/2: P(k) = 2^{-(k+1)}, mean 1, variance 2
    const auto g0 = jump_rate_spec::evans(0.0);
    zrl::rng gen(7, 1);
    const std::size_t n = 200000;
    double mean = 0.0, m2 = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        const auto k = zrl::sample_grand_canonical_site(g0, 0.5, 2.0, gen);
        mean += double(k);
        m2 += double(k) * double(k);
    }
    mean /= double(n);
    m2 /= double(n);
    CHECK(std::abs(mean - 1.0) < 5.0 * std::sqrt(2.0 / double(n)));
    CHECK(std::abs((m2 - mean * mean) - 2.0) < 0.1);
    CHECK(zrl::sample_grand_canonical_site(g0, 0.0, 1.0, gen) == 0);
}

TEST_CASE("initial conditions realized on the lattice") {
    const thermo_profile p4(jump_rate_spec::evans(4.0));
    const zrl::lattice lat(1, 16);
    zrl::rng gen(3, 0);

    zrl::initial_condition det;
    det.family = zrl::initial_condition::kind::deterministic;
    det.eta.assign(16, 1);
    det.eta[3] = 5;
    CHECK(zrl::sample_initial(det, lat, p4, gen) == det.eta);
    det.eta.resize(8);
    CHECK_THROWS_AS(zrl::sample_initial(det, lat, p4, gen), zrl::config_error);

    zrl::initial_condition can;
    can.family = zrl::initial_condition::kind::canonical;
    can.K = 24;
    for (int rep = 0; rep < 10; ++rep) {
        const auto occ = zrl::sample_initial(can, lat, p4, gen);
        CHECK(std::accumulate(occ.begin(), occ.end(), std::int64_t{0}) == 24);
    }

    zrl::initial_condition prod;
    prod.family = zrl::initial_condition::kind::product_profile;
    prod.rho0.assign(16, 0.25);
    prod.condensate_alpha = 2.0;  // mass floor(2*16) = 32 at site floor(16*0.5)
    prod.condensate_u = {0.5, 0.0};
    const auto occ = zrl::sample_initial(prod, lat, p4, gen);
    CHECK(occ[8] == 32);
}
