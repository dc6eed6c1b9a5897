#include "zrl/young.hpp"

#include <cmath>
#include <sstream>

#include "zrl/block.hpp"
#include "zrl/errors.hpp"

namespace zrl {

namespace {
constexpr double kDLambda = 0.05;
}

std::array<double, 2> generalized_young_measure::cell_position(
    std::size_t i) const {
    const double inv = 1.0 / static_cast<double>(N);
    if (d == 1) return {static_cast<double>(i) * inv, 0.0};
    const auto nx = static_cast<std::size_t>(N);
    return {static_cast<double>(i / nx) * inv, static_cast<double>(i % nx) * inv};
}

std::size_t generalized_young_measure::bin_of(double lambda) const {
    if (lambda <= 0.0) return 0;
    const auto j = static_cast<std::size_t>(lambda / dlambda);
    return j >= n_bins ? n_bins - 1 : j;
}

double generalized_young_measure::regular_mass() const {
    double s = 0.0;
    for (double m : regular) s += m;
    return s;
}

double generalized_young_measure::singular_mass() const {
    double s = 0.0;
    for (double m : singular) s += m;
    return s;
}

double generalized_young_measure::barycenter_mass() const {
    double s = 0.0;
    for (std::size_t i = 0; i < n_cells; ++i)
        for (std::size_t j = 0; j < n_bins; ++j)
            s += lambda_mid(j) * regular[i * n_bins + j];
    return s + singular_mass();
}

generalized_young_measure build_young(const lattice& lat,
                                      const std::vector<std::int64_t>& occ,
                                      std::int64_t ell, double M) {
    if (!(M > 0.0)) throw config_error("truncation level M must be > 0");
    if (ell < 0 || 2 * ell >= lat.N())
        throw config_error("block radius must satisfy 0 <= ell < N/2");
    generalized_young_measure ym;
    ym.d = lat.d();
    ym.N = lat.N();
    ym.ell = ell;
    ym.M = M;
    ym.dlambda = kDLambda;
    ym.n_bins = static_cast<std::size_t>(std::ceil(M / kDLambda - 1e-9));
    ym.n_cells = static_cast<std::size_t>(lat.n_sites());
    ym.regular.assign(ym.n_cells * ym.n_bins, 0.0);
    ym.singular.assign(ym.n_cells, 0.0);
    const auto sums = window_sums(lat, occ, ell);
    const double w = static_cast<double>(window_size(lat, ell));
    const double site_mass = 1.0 / static_cast<double>(lat.n_sites());
    for (std::size_t x = 0; x < ym.n_cells; ++x) {
        const double bval = static_cast<double>(sums[x]) / w;
        const double lambda = bval < M ? bval : M;
        ym.regular[x * ym.n_bins + ym.bin_of(lambda)] += site_mass;
        if (bval > M) ym.singular[x] += (bval - M) * site_mass;
    }
    return ym;
}

void accumulate(generalized_young_measure& into,
                const generalized_young_measure& part, double weight) {
    if (into.n_cells != part.n_cells || into.n_bins != part.n_bins ||
        into.d != part.d || into.N != part.N || into.M != part.M)
        throw config_error("young-measure shapes do not match");
    for (std::size_t i = 0; i < into.regular.size(); ++i)
        into.regular[i] += weight * part.regular[i];
    for (std::size_t i = 0; i < into.singular.size(); ++i)
        into.singular[i] += weight * part.singular[i];
}

double pair(const test_function& f, const generalized_young_measure& ym) {
    if (!f.F) throw config_error("pairing needs an F(u, lambda) evaluator");
    bool has_singular = false;
    for (double s : ym.singular)
        if (s != 0.0) {
            has_singular = true;
            break;
        }
    if (has_singular && !f.recession)
        throw missing_recession(
            "the measure carries singular mass but the test function has no "
            "recession evaluator");
    if (f.g == growth::asymptotically_linear && f.recession) {
        // cheap consistency probe: |F/(1+lambda) - RF| must not grow
        const auto u0 = ym.cell_position(0);
        const double rf = f.recession(u0);
        double prev = std::abs(f.F(u0, 1e2) / (1.0 + 1e2) - rf);
        for (double lam : {1e3, 1e4}) {
            const double dev = std::abs(f.F(u0, lam) / (1.0 + lam) - rf);
            if (dev > prev + 1e-9)
                throw config_error(
                    "recession evaluator inconsistent with the growth of F");
            prev = dev;
        }
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < ym.n_cells; ++i) {
        const auto u = ym.cell_position(i);
        for (std::size_t j = 0; j < ym.n_bins; ++j) {
            const double m = ym.regular[i * ym.n_bins + j];
            if (m != 0.0) acc += f.F(u, ym.lambda_mid(j)) * m;
        }
        if (f.recession && ym.singular[i] != 0.0)
            acc += f.recession(u) * ym.singular[i];
    }
    return acc;
}

std::vector<double> project(const value_map& psi,
                            const generalized_young_measure& ym) {
    if (!psi.psi) throw config_error("projection needs a value map");
    std::vector<double> mids(ym.n_bins);
    for (std::size_t j = 0; j < ym.n_bins; ++j)
        mids[j] = psi.psi(ym.lambda_mid(j));
    std::vector<double> out(ym.n_cells, 0.0);
    for (std::size_t i = 0; i < ym.n_cells; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < ym.n_bins; ++j) {
            const double m = ym.regular[i * ym.n_bins + j];
            if (m != 0.0) acc += mids[j] * m;
        }
        out[i] = acc + psi.slope_at_infinity * ym.singular[i];
    }
    return out;
}

}  // namespace zrl
