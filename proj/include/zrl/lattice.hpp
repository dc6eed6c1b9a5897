// Discrete torus T_N^d (d = 1 or 2) with a precomputed neighbor table.
// Direction convention: dir in [0, 2d), axis = dir/2, sign = dir%2 ? +1 : -1.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace zrl {

class lattice {
  public:
    lattice(int d, std::int64_t N);

    int d() const { return d_; }
    std::int64_t N() const { return N_; }
    std::int64_t n_sites() const { return n_sites_; }
    int n_dirs() const { return 2 * d_; }

    std::int64_t neighbor(std::int64_t site, int dir) const {
        return nbr_[static_cast<std::size_t>(site) * n_dirs() + dir];
    }

    // row-major site index from coordinates (wrapped) and back
    std::int64_t site_at(std::array<std::int64_t, 2> c) const;
    std::array<std::int64_t, 2> coords(std::int64_t site) const;

    // macroscopic position x/N in [0,1)^d (second entry 0 when d = 1)
    std::array<double, 2> position(std::int64_t site) const;

  private:
    int d_;
    std::int64_t N_;
    std::int64_t n_sites_;
    std::vector<std::int64_t> nbr_;  // n_sites * 2d
};

}  // namespace zrl
