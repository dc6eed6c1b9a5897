// Block averages over sup-norm windows: eta^l(x) is the mean occupancy over
// the (2l+1)^d box around x, eta^{l,L} the L-window mean of eta^l.  Integer
// window sums are exposed separately so statistics that need exact zeros can
// stay in integer arithmetic.
#pragma once

#include <cstdint>
#include <vector>

#include "zrl/lattice.hpp"

namespace zrl {

// S_l(x) = sum_{|y|_inf <= l} v(x+y), periodic, for every x in O(N^d)
std::vector<std::int64_t> window_sums(const lattice& lat,
                                      const std::vector<std::int64_t>& v,
                                      std::int64_t ell);
std::vector<double> window_sums(const lattice& lat,
                                const std::vector<double>& v,
                                std::int64_t ell);

// number of sites in the window, (2l+1)^d
std::int64_t window_size(const lattice& lat, std::int64_t ell);

// eta^l(x) for one site (requires 2l+1 <= N)
double block_average(const lattice& lat, const std::vector<std::int64_t>& occ,
                     std::int64_t x, std::int64_t ell);

// eta^{l,L}(x) = (2L+1)^{-d} sum_{|z|<=L} eta^l(x+z)
double double_block_average(const lattice& lat,
                            const std::vector<std::int64_t>& occ,
                            std::int64_t x, std::int64_t ell, std::int64_t L);

// majorant of |eta^{l,L}(x) - eta^L(x)|: the L-normalized occupancy mass in
// the annulus L-l < |z|_inf <= L+l around x
double consecutive_average_majorant(const lattice& lat,
                                    const std::vector<std::int64_t>& occ,
                                    std::int64_t x, std::int64_t ell,
                                    std::int64_t L);

}  // namespace zrl
