// Occupancy configuration on the torus with cached totals and a complete
// binary tree over the per-site weights g(eta(x)), giving O(log) weight
// updates and O(log) weighted site selection.  Weights drift by roundoff as
// they are updated incrementally; rebuild_rates() recomputes them exactly
// and the simulation loop calls it on a fixed event cadence.
#pragma once

#include <cstdint>
#include <vector>

#include "zrl/jump_rate.hpp"
#include "zrl/lattice.hpp"

namespace zrl {

class configuration {
  public:
    // lat and spec are borrowed; the caller keeps them alive
    configuration(const lattice& lat, const jump_rate_spec& spec,
                  std::vector<std::int64_t> occ);

    const lattice& lat() const { return *lat_; }
    const jump_rate_spec& spec() const { return *spec_; }

    const std::vector<std::int64_t>& occ() const { return occ_; }
    std::int64_t occ_at(std::int64_t x) const { return occ_[x]; }
    std::int64_t total() const { return total_; }

    double rate_sum() const { return tree_[1]; }  // sum_x g(eta(x))
    double site_rate(std::int64_t x) const { return tree_[cap_ + x]; }

    // one particle from 'from' to 'to' (occupancy + tree updates)
    void move_particle(std::int64_t from, std::int64_t to);

    // weighted site choice: u uniform in [0,1); P(x) = g(eta(x))/rate_sum
    std::int64_t sample_site(double u) const;

    // exact recomputation of every tree node from the occupancies
    void rebuild_rates();

  private:
    void set_leaf(std::int64_t x, double w);

    const lattice* lat_;
    const jump_rate_spec* spec_;
    std::vector<std::int64_t> occ_;
    std::int64_t total_;
    std::size_t cap_;            // leaf count padded to a power of two
    std::vector<double> tree_;   // 1-indexed; tree_[1] is the root
};

}  // namespace zrl
