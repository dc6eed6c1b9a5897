#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "zrl/configuration.hpp"
#include "zrl/empirical.hpp"
#include "zrl/errors.hpp"
#include "zrl/jump_rate.hpp"
#include "zrl/lattice.hpp"
#include "zrl/rng.hpp"
#include "zrl/simulate.hpp"
#include "zrl/thermo.hpp"
#include "zrl/young.hpp"

using zrl::configuration;
using zrl::jump_rate_spec;
using zrl::lattice;

namespace {
constexpr double kPi = 3.14159265358979323846;

std::vector<std::int64_t> random_occ(const lattice& lat, zrl::rng& g,
                                     std::int64_t max_k) {
    std::vector<std::int64_t> occ(lat.n_sites());
    for (auto& k : occ)
        k = static_cast<std::int64_t>(g.next_double() * double(max_k + 1));
    return occ;
}
}  // namespace

TEST_CASE("empirical fields: small exact example and invariants") {
    const auto g0 = jump_rate_spec::evans(0.0);
    const lattice lat(1, 2);
    const configuration c(lat, g0, {3, 1});
    const auto f = zrl::extract_fields(c, 0.25);
    CHECK(f.t == 0.25);
    CHECK(f.density[0] == 1.5);
    CHECK(f.density[1] == 0.5);
    CHECK(f.jump_rate[0] == 0.5);
    CHECK(f.jump_rate[1] == 0.5);
    // bond currents (g(3)-g(1))/N^0 and (g(1)-g(3))/N^0, both zero at b=0
    CHECK(f.current[0] == 0.0);
    CHECK(f.current[1] == 0.0);

    const lattice l8(1, 8);
    const configuration z(l8, g0, std::vector<std::int64_t>(8, 0));
    const auto fz = zrl::extract_fields(z);
    for (double v : fz.density) CHECK(v == 0.0);
    for (double v : fz.jump_rate) CHECK(v == 0.0);
    for (double v : fz.current) CHECK(v == 0.0);
}

TEST_CASE("empirical fields: conservation and zero total current") {
    zrl::rng g(41, 0);
    // b = 0 keeps every g value in {0,1}: all sums are exact in floating point
    const auto g0 = jump_rate_spec::evans(0.0);
    const lattice lat(2, 8);
    const auto occ = random_occ(lat, g, 5);
    const auto total = std::accumulate(occ.begin(), occ.end(), std::int64_t{0});
    const configuration c(lat, g0, occ);
    const auto f = zrl::extract_fields(c);
    double mass = 0.0;
    for (double v : f.density) mass += v;
    CHECK(mass == double(total) / 64.0);
    for (int j = 0; j < 2; ++j) {
        double s = 0.0;
        for (std::int64_t x = 0; x < 64; ++x) s += f.current[j * 64 + x];
        CHECK(s == 0.0);
    }

    // general rates: total current vanishes to machine precision and the
    // jump-rate field is dominated by grad_sup times the density field
    const auto g4 = jump_rate_spec::evans(4.0);
    const configuration c4(lat, g4, occ);
    const auto f4 = zrl::extract_fields(c4);
    for (int j = 0; j < 2; ++j) {
        double s = 0.0, abs_s = 0.0;
        for (std::int64_t x = 0; x < 64; ++x) {
            s += f4.current[j * 64 + x];
            abs_s += std::abs(f4.current[j * 64 + x]);
        }
        CHECK(std::abs(s) <= 64.0 * 1e-16 * abs_s + 1e-300);
    }
    for (std::int64_t x = 0; x < 64; ++x) {
        CHECK(f4.jump_rate[x] <= g4.grad_sup() * f4.density[x] + 1e-15);
    }
}

TEST_CASE("pairing fields against space functions") {
    const auto g0 = jump_rate_spec::evans(0.0);
    const lattice lat(1, 8);
    std::vector<std::int64_t> occ(8, 0);
    occ[2] = 4;
    const configuration c(lat, g0, occ);
    const auto f = zrl::extract_fields(c);
    const auto cosf = [](std::array<double, 2> u) {
        return std::cos(2.0 * kPi * u[0]);
    };
    CHECK(zrl::pair_density(f, cosf) ==
          doctest::Approx(0.5 * std::cos(2.0 * kPi * 0.25)).epsilon(1e-14));
    CHECK(zrl::pair_jump_rate(f, cosf) ==
          doctest::Approx(0.125 * std::cos(2.0 * kPi * 0.25)).epsilon(1e-14));
}

TEST_CASE("young measure: truncation example and identities") {
    const auto g0 = jump_rate_spec::evans(0.0);
    const lattice lat(1, 4);
    const std::vector<std::int64_t> occ = {8, 0, 0, 0};
    const auto ym = zrl::build_young(lat, occ, 0, 2.0);
    CHECK(ym.n_bins == 40);
    CHECK(ym.n_cells == 4);
    CHECK(ym.dlambda == 0.05);
    // three empty sites in the lowest bin, the truncated site in the top bin
    CHECK(ym.regular[0 * 40 + 39] == 0.25);
    for (std::size_t i = 1; i < 4; ++i) CHECK(ym.regular[i * 40 + 0] == 0.25);
    CHECK(ym.singular[0] == 1.5);
    for (std::size_t i = 1; i < 4; ++i) CHECK(ym.singular[i] == 0.0);
    CHECK(ym.regular_mass() == 1.0);
    CHECK(ym.singular_mass() == 1.5);

    // pairing with F = cos(2 pi u) * lambda, RF = cos(2 pi u)
    zrl::test_function F;
    F.F = [](std::array<double, 2> u, double lam) {
        return std::cos(2.0 * kPi * u[0]) * lam;
    };
    F.recession = [](std::array<double, 2> u) {
        return std::cos(2.0 * kPi * u[0]);
    };
    F.g = zrl::growth::asymptotically_linear;
    const double paired = zrl::pair(F, ym);
    // midpoint quantization: top bin reads 1.975, empty bin reads 0.025
    CHECK(paired == doctest::Approx(1.9875).epsilon(1e-12));
    CHECK(std::abs(paired - 2.0) <= 0.5 * ym.dlambda + 1e-12);

    // normalization and barycenter-mass quantization bound
    zrl::test_function one;
    one.F = [](std::array<double, 2>, double) { return 1.0; };
    one.recession = [](std::array<double, 2>) { return 0.0; };
    CHECK(zrl::pair(one, ym) == 1.0);
    CHECK(std::abs(ym.barycenter_mass() - 8.0 / 4.0) <=
          0.5 * ym.dlambda + 1e-12);

    // a singular measure cannot be paired without a recession evaluator
    zrl::test_function bare;
    bare.F = [](std::array<double, 2>, double lam) { return lam; };
    CHECK_THROWS_AS(zrl::pair(bare, ym), zrl::missing_recession);
}

TEST_CASE("young measure: trivial cases and the M sweep") {
    const auto g4 = jump_rate_spec::evans(4.0);
    const lattice lat(1, 16);
    const std::vector<std::int64_t> zeros(16, 0);
    const auto ym0 = zrl::build_young(lat, zeros, 1, 2.0);
    for (std::size_t i = 0; i < 16; ++i) {
        CHECK(ym0.regular[i * ym0.n_bins + 0] == 1.0 / 16.0);
        CHECK(ym0.singular[i] == 0.0);
    }

    zrl::rng g(43, 0);
    const auto occ = random_occ(lat, g, 6);
    const auto total = std::accumulate(occ.begin(), occ.end(), std::int64_t{0});
    const auto big = zrl::build_young(lat, occ, 0, 50.0);
    CHECK(big.singular_mass() == 0.0);
    CHECK(std::abs(big.barycenter_mass() - double(total) / 16.0) <=
          0.5 * big.dlambda + 1e-12);

    // the (regular, singular) split at each M matches the data-level formulas
    for (double M : {2.0, 5.0}) {
        const auto ym = zrl::build_young(lat, occ, 0, M);
        for (std::size_t x = 0; x < 16; ++x) {
            const double k = double(occ[x]);
            const double expect_sing = k > M ? (k - M) / 16.0 : 0.0;
            CHECK(ym.singular[x] == doctest::Approx(expect_sing).epsilon(1e-14));
            const auto jb = ym.bin_of(k < M ? k : M);
            CHECK(ym.regular[x * ym.n_bins + jb] == 1.0 / 16.0);
        }
    }

    CHECK_THROWS_AS(zrl::build_young(lat, occ, 8, 2.0), zrl::config_error);
    CHECK_THROWS_AS(zrl::build_young(lat, occ, 0, 0.0), zrl::config_error);
    (void)g4;
}

TEST_CASE("young measure: merge, projection, and sublinear invariance") {
    const lattice lat(1, 8);
    zrl::rng g(47, 0);
    const auto occ_a = random_occ(lat, g, 9);
    const auto occ_b = random_occ(lat, g, 9);
    auto ym_a = zrl::build_young(lat, occ_a, 0, 3.0);
    const auto ym_b = zrl::build_young(lat, occ_b, 0, 3.0);
    auto merged = ym_a;
    zrl::accumulate(merged, ym_b, 1.0);
    CHECK(merged.regular_mass() == doctest::Approx(2.0).epsilon(1e-14));
    // pairing is linear under measure addition
    zrl::test_function F;
    F.F = [](std::array<double, 2> u, double lam) {
        return std::sin(2.0 * kPi * u[0]) + 0.3 * lam;
    };
    F.recession = [](std::array<double, 2>) { return 0.3; };
    F.g = zrl::growth::asymptotically_linear;
    CHECK(zrl::pair(F, merged) ==
          doctest::Approx(zrl::pair(F, ym_a) + zrl::pair(F, ym_b))
              .epsilon(1e-13));

    const auto ym = zrl::build_young(lat, occ_a, 1, 2.0);
    // identity projection against five spatial test functions == pairing
    const auto id = zrl::project({[](double lam) { return lam; }, 1.0}, ym);
    for (int mode = 0; mode < 5; ++mode) {
        auto sf = [mode](std::array<double, 2> u) {
            switch (mode) {
                case 0: return 1.0;
                case 1: return std::cos(2.0 * kPi * u[0]);
                case 2: return std::sin(2.0 * kPi * u[0]);
                case 3: return std::cos(4.0 * kPi * u[0]);
                default: return u[0] * (1.0 - u[0]);
            }
        };
        zrl::test_function Fm;
        Fm.F = [sf](std::array<double, 2> u, double lam) { return sf(u) * lam; };
        Fm.recession = [sf](std::array<double, 2> u) { return sf(u); };
        Fm.g = zrl::growth::asymptotically_linear;
        double via_proj = 0.0;
        for (std::size_t i = 0; i < ym.n_cells; ++i)
            via_proj += sf(ym.cell_position(i)) * id[i];
        CHECK(via_proj == doctest::Approx(zrl::pair(Fm, ym)).epsilon(1e-12));
    }

    // sublinear maps ignore the singular field entirely
    zrl::value_map bounded{[](double lam) { return lam / (1.0 + lam); }, 0.0};
    auto tampered = ym;
    for (auto& s : tampered.singular) s += 7.5;
    CHECK(zrl::project(bounded, ym) == zrl::project(bounded, tampered));
}

TEST_CASE("young measure: saturated projection lands on the critical value") {
    const zrl::thermo_profile p4(jump_rate_spec::evans(4.0));
    const lattice lat(1, 16);
    const std::vector<std::int64_t> occ(16, 3);  // block densities all 3
    const auto ym = zrl::build_young(lat, occ, 0, 10.0);
    const auto out = zrl::project(
        {[&](double lam) { return p4.Phibar(lam); }, 0.0}, ym);
    for (double v : out) CHECK(v == 1.0 / 16.0);  // phi_c times the cell mass
}

TEST_CASE("time integration along a trajectory") {
    const auto g4 = jump_rate_spec::evans(4.0);
    const lattice lat(1, 8);
    // frozen configuration: integral = T * static value; t-dependence uses
    // the midpoint rule, so a linear integrand is integrated exactly
    zrl::simulation frozen(lat, g4, std::vector<std::int64_t>(8, 0),
                           zrl::rng(3, 0));
    CHECK(zrl::time_integrate(frozen, 2.0, [](const configuration&, double) {
              return 5.0;
          }) == 10.0);
    zrl::simulation frozen2(lat, g4, std::vector<std::int64_t>(8, 0),
                            zrl::rng(3, 0));
    CHECK(zrl::time_integrate(frozen2, 2.0, [](const configuration&, double t) {
              return t;
          }) == 2.0);

    std::vector<std::int64_t> occ(8, 1);
    zrl::simulation s(lat, g4, occ, zrl::rng(3, 1));
    CHECK(zrl::time_integrate(s, 0.5, [](const configuration&, double) {
              return 0.0;
          }) == 0.0);
    // mass is conserved, so the density pairing with 1 integrates exactly
    zrl::simulation s2(lat, g4, occ, zrl::rng(3, 2));
    const double mass_integral =
        zrl::time_integrate(s2, 0.5, [](const configuration& c, double) {
            return double(c.total()) / double(c.lat().n_sites());
        });
    CHECK(mass_integral == doctest::Approx(0.5 * 1.0).epsilon(1e-12));
}
