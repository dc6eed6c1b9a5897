#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "zrl/errors.hpp"
#include "zrl/jump_rate.hpp"
#include "zrl/thermo.hpp"

using zrl::jump_rate_spec;
using zrl::thermo_profile;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("jump rate tables and gradient bound") {
    const auto g4 = jump_rate_spec::evans(4.0);
    CHECK(g4.rate(0) == 0.0);
    CHECK(g4.rate(1) == 5.0);
    CHECK(g4.rate(2) == 3.0);
    CHECK(g4.rate(4) == 2.0);
    // the k=0 step g(1)-g(0) dominates the gradient bound
    CHECK(g4.grad_sup() == 5.0);
    CHECK(jump_rate_spec::evans(0.0).grad_sup() == 1.0);
    CHECK(g4.log_gfact(0) == 0.0);
    CHECK(g4.log_gfact(3) ==
          doctest::Approx(std::log(5.0 * 3.0 * (7.0 / 3.0))).epsilon(1e-14));
    CHECK(g4.is_evans());
    CHECK(g4.evans_b() == 4.0);
    CHECK(g4.describe() == "evans(b=4)");

    const auto small = jump_rate_spec::custom(
        [](std::size_t k) { return k == 0 ? 0.0 : 2.0; }, 10);
    CHECK_THROWS_AS(small.rate(11), zrl::capacity_error);
    CHECK(small.rate_unbounded(11) == 2.0);
    CHECK_FALSE(small.is_evans());
    CHECK_THROWS_AS(small.evans_b(), zrl::config_error);
    CHECK_THROWS_AS(jump_rate_spec::custom(
                        [](std::size_t) { return 1.0; }, 10),
                    zrl::config_error);  // g(0) must vanish
    CHECK_THROWS_AS(jump_rate_spec::custom(
                        [](std::size_t k) { return k == 2 ? -1.0 : double(k); },
                        10),
                    zrl::config_error);  // negative rate
    CHECK_THROWS_AS(jump_rate_spec::evans(-1.0), zrl::config_error);
}

TEST_CASE("constant-rate gas closed forms") {
    const thermo_profile p(jump_rate_spec::evans(0.0));
    CHECK(p.phi_c() == 1.0);
    CHECK(std::isinf(p.rho_c()));
    for (double phi : {0.0, 0.1, 0.5, 0.9, 0.99}) {
        CHECK(p.Z(phi) == doctest::Approx(1.0 / (1.0 - phi)).epsilon(1e-12));
        CHECK(p.R(phi) == doctest::Approx(phi / (1.0 - phi)).epsilon(1e-12));
    }
    CHECK(p.Zprime(0.5) == doctest::Approx(4.0).epsilon(1e-12));
    for (double rho : {0.25, 1.0, 3.0, 10.0}) {
        CHECK(std::abs(p.Phi(rho) - rho / (1.0 + rho)) < 1e-10);
        CHECK(p.Phibar(rho) == p.Phi(rho));  // no saturation: rho_c infinite
    }
    CHECK(p.Phi(0.0) == 0.0);
}

TEST_CASE("condensing family: critical values") {
    const thermo_profile p4(jump_rate_spec::evans(4.0));
    CHECK(p4.phi_c() == 1.0);
    CHECK(p4.Z(1.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-9));
    CHECK(p4.Z(0.5) == doctest::Approx(1.1214892221871041913).epsilon(1e-12));
    CHECK(p4.rho_c() == doctest::Approx(0.5).epsilon(1e-5));
    CHECK(thermo_profile(jump_rate_spec::evans(6.0)).rho_c() ==
          doctest::Approx(0.25).epsilon(1e-5));
    CHECK(thermo_profile(jump_rate_spec::evans(3.0)).rho_c() ==
          doctest::Approx(1.0).epsilon(1e-3));
    CHECK(thermo_profile(jump_rate_spec::evans(2.5)).rho_c() ==
          doctest::Approx(2.0).epsilon(1e-3));
    // b <= 2: first moment diverges at phi_c, no condensation
    CHECK(std::isinf(thermo_profile(jump_rate_spec::evans(2.0)).rho_c()));
    CHECK(std::isinf(thermo_profile(jump_rate_spec::evans(1.0)).rho_c()));
}

TEST_CASE("series divergence is detected, not truncated") {
    const auto g4 = jump_rate_spec::evans(4.0);
    CHECK_THROWS_AS(zrl::partition_function(g4, 2.0), zrl::series_divergence);
    CHECK_THROWS_AS(zrl::partition_first_moment(g4, 1.5),
                    zrl::series_divergence);
    CHECK_THROWS_AS(zrl::partition_function(g4, -0.5), zrl::config_error);
    // at phi_c = 1 the density series of b=2 has a 1/k tail
    CHECK_THROWS_AS(zrl::partition_first_moment(jump_rate_spec::evans(2.0), 1.0),
                    zrl::series_divergence);
}

TEST_CASE("density inversion against high-precision references") {
    const thermo_profile p4(jump_rate_spec::evans(4.0));
    CHECK(std::abs(p4.Phi(0.25) - 0.7517996585526705249) < 1e-9);
    CHECK(std::abs(p4.Phi(0.4) - 0.93465108543407341526) < 1e-9);
    CHECK(std::abs(p4.Phi(0.125) - 0.47657228424314722241) < 1e-9);
    CHECK(std::abs(p4.Phi(0.3) - 0.8266086431998355351) < 1e-9);
    CHECK(p4.Z(p4.Phi(0.25)) ==
          doctest::Approx(1.2083677922385183583).epsilon(1e-9));
    // round trip
    for (double rho : {0.05, 0.2, 0.45}) {
        CHECK(p4.R(p4.Phi(rho)) == doctest::Approx(rho).epsilon(1e-8));
    }
    CHECK_THROWS_AS(p4.Phi(0.5), zrl::config_error);   // at rho_c
    CHECK_THROWS_AS(p4.Phi(0.75), zrl::config_error);  // above rho_c
    CHECK(p4.Phibar(0.5) == 1.0);
    CHECK(p4.Phibar(123.0) == 1.0);
    CHECK_THROWS_AS(p4.Phi(-0.1), zrl::config_error);
}

TEST_CASE("saturated-inverse table") {
    const thermo_profile p0(jump_rate_spec::evans(0.0));
    const auto t0 = p0.phibar_table(1.0, 101);
    REQUIRE(t0.size() == 101);
    for (std::size_t j = 0; j < t0.size(); ++j) {
        const double rho = 0.01 * static_cast<double>(j);
        CHECK(std::abs(t0[j] - rho / (1.0 + rho)) < 1e-9);
        if (j > 0) CHECK(t0[j] >= t0[j - 1]);
    }
    const thermo_profile p4(jump_rate_spec::evans(4.0));
    const auto t4 = p4.phibar_table(1.0, 201);
    for (std::size_t j = 0; j < t4.size(); ++j) {
        const double rho = 0.005 * static_cast<double>(j);
        if (rho >= 0.5) CHECK(t4[j] == 1.0);  // saturated at phi_c
        if (j > 0) CHECK(t4[j] >= t4[j - 1]);
    }
    CHECK(std::abs(t4[50] - 0.7517996585526705249) < 1e-9);  // rho = 0.25
    CHECK_THROWS_AS(p4.phibar_table(0.0, 100), zrl::config_error);
    CHECK_THROWS_AS(p4.phibar_table(1.0, 1), zrl::config_error);
}

TEST_CASE("large-deviation rate function") {
    const thermo_profile p0(jump_rate_spec::evans(0.0));
    // closed form at b=0: 2 log(4/3) - log(3/2)
    CHECK(p0.rate_function(1.0, 2.0) ==
          doctest::Approx(0.1698990367953974729).epsilon(1e-9));
    CHECK(p0.rate_function(1.0, 1.0) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(std::isinf(p0.rate_function(1.0, -0.5)));

    const thermo_profile p4(jump_rate_spec::evans(4.0));
    CHECK(std::abs(p4.rate_function(0.25, 0.0) - 0.18927051694654199684) < 1e-9);
    CHECK(std::abs(p4.rate_function(0.25, 0.1) - 0.037273214657389963622) <
          1e-9);
    CHECK(std::abs(p4.rate_function(0.25, 0.5) - 0.044231145507387629448) <
          1e-8);
    // above rho_c the fugacity saturates and the cost grows linearly
    CHECK(std::abs(p4.rate_function(0.25, 0.7) - 0.10128822591243825346) < 1e-8);
    CHECK(p4.rate_function(0.25, 0.25) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK_THROWS_AS(p4.rate_function(0.5, 0.1), zrl::config_error);
    CHECK_THROWS_AS(p4.rate_function(0.0, 0.1), zrl::config_error);
}

TEST_CASE("entropy density of a macroscopic profile") {
    const thermo_profile p0(jump_rate_spec::evans(0.0));
    const std::vector<double> zeros(64, 0.0);
    CHECK(zrl::entropy_density(p0, zeros, 1.0) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-9));

    const thermo_profile p4(jump_rate_spec::evans(4.0));
    CHECK(zrl::entropy_density(p4, zeros, 0.25, 0.3) ==
          doctest::Approx(0.27485613755411793287).epsilon(1e-9));
    // cells above rho_c are clamped before the rate function is applied
    const std::vector<double> high(8, 3.0);
    CHECK(zrl::entropy_density(p4, high, 0.25) ==
          doctest::Approx(p4.rate_function(0.25, p4.rho_c())).epsilon(1e-12));
    CHECK_THROWS_AS(zrl::entropy_density(p4, {}, 0.25), zrl::config_error);
    CHECK_THROWS_AS(zrl::entropy_density(p4, zeros, 0.25, -1.0),
                    zrl::config_error);
}

TEST_CASE("critical fugacity of custom rates") {
    // same algebraic family fed through the custom path: extrapolation
    // must land on the known radius of convergence
    const auto like4 = jump_rate_spec::custom(
        [](std::size_t k) { return k == 0 ? 0.0 : 1.0 + 4.0 / double(k); },
        100000);
    CHECK(zrl::critical_fugacity(like4) == doctest::Approx(1.0).epsilon(1e-4));
    const auto doubled = jump_rate_spec::custom(
        [](std::size_t k) {
            return k == 0 ? 0.0 : 2.0 * (1.0 + 4.0 / double(k));
        },
        100000);
    CHECK(zrl::critical_fugacity(doubled) == doctest::Approx(2.0).epsilon(1e-4));
    // factorial growth: entire partition function, infinite radius
    const auto free_walk = jump_rate_spec::custom(
        [](std::size_t k) { return double(k); }, 100000);
    CHECK(std::isinf(zrl::critical_fugacity(free_walk)));
    const thermo_profile pf(free_walk);
    CHECK(std::isinf(pf.phi_c()));
    CHECK(std::isinf(pf.rho_c()));
    CHECK(pf.Z(2.0) == doctest::Approx(std::exp(2.0)).epsilon(1e-12));
    CHECK(pf.R(2.0) == doctest::Approx(2.0).epsilon(1e-12));
    // a condensate on top of an infinite critical fugacity has infinite cost
    CHECK_THROWS_AS(zrl::entropy_density(pf, std::vector<double>(4, 0.0), 1.0,
                                         0.5),
                    zrl::series_divergence);
}
