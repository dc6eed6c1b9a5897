// Generalized Young measure extracted from a configuration: a regular
// histogram over (space cell, value bin) holding the block densities
// truncated at M, plus a singular per-cell mass field holding the excess
// (eta^l(x) - M)^+ / N^d.  Pairings evaluate test functions at bin midpoints
// and recession functions against the singular part.
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "zrl/lattice.hpp"

namespace zrl {

struct generalized_young_measure {
    int d = 1;
    std::int64_t N = 0;
    std::int64_t ell = 0;
    double M = 0.0;
    double dlambda = 0.0;
    std::size_t n_bins = 0;
    std::size_t n_cells = 0;

    // mass at (cell i, bin j), row-major i*n_bins + j; cell i is lattice
    // site i, positioned at i/N
    std::vector<double> regular;
    std::vector<double> singular;  // per cell

    double lambda_mid(std::size_t j) const { return (j + 0.5) * dlambda; }
    std::array<double, 2> cell_position(std::size_t i) const;
    std::size_t bin_of(double lambda) const;

    double regular_mass() const;   // sum of the regular histogram
    double singular_mass() const;  // sum of the singular field
    // <Lambda, regular> + singular: the barycenter total mass
    double barycenter_mass() const;
};

// one deposit of mass 1/N^d at (x/N, bin of eta^l(x) ^ M) per site, plus
// (eta^l(x) - M)^+/N^d into the singular field; bins have width 0.05
generalized_young_measure build_young(const lattice& lat,
                                      const std::vector<std::int64_t>& occ,
                                      std::int64_t ell, double M);

// pointwise merge (histograms add; shapes must agree)
void accumulate(generalized_young_measure& into,
                const generalized_young_measure& part, double weight = 1.0);

enum class growth { sublinear, asymptotically_linear };

// test function F(u, lambda) with its recession RF(u) = lim F/(1+lambda),
// supplied analytically (never estimated numerically)
struct test_function {
    std::function<double(std::array<double, 2>, double)> F;
    std::function<double(std::array<double, 2>)> recession;  // may be empty
    growth g = growth::sublinear;
};

// sum_cells F(u_i, lambda_mid) mass + sum_cells RF(u_i) singular; throws
// missing_recession when singular mass is present and RF is absent
double pair(const test_function& f, const generalized_young_measure& ym);

// scalar map of the value coordinate with its slope at infinity
struct value_map {
    std::function<double(double)> psi;
    double slope_at_infinity = 0.0;
};

// cell i gets sum_j psi(lambda_mid_j) mass(i,j) + slope * singular(i)
std::vector<double> project(const value_map& psi,
                            const generalized_young_measure& ym);

}  // namespace zrl
