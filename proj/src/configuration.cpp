#include "zrl/configuration.hpp"

#include <sstream>
#include <utility>

#include "zrl/errors.hpp"

namespace zrl {

configuration::configuration(const lattice& lat, const jump_rate_spec& spec,
                             std::vector<std::int64_t> occ)
    : lat_(&lat), spec_(&spec), occ_(std::move(occ)) {
    if (static_cast<std::int64_t>(occ_.size()) != lat.n_sites()) {
        std::ostringstream os;
        os << "occupancy vector has " << occ_.size() << " entries for "
           << lat.n_sites() << " sites";
        throw config_error(os.str());
    }
    total_ = 0;
    for (auto k : occ_) {
        if (k < 0) throw config_error("negative occupancy");
        total_ += k;
    }
    cap_ = 1;
    while (cap_ < occ_.size()) cap_ <<= 1;
    tree_.assign(2 * cap_, 0.0);
    rebuild_rates();
}

void configuration::set_leaf(std::int64_t x, double w) {
    std::size_t i = cap_ + static_cast<std::size_t>(x);
    tree_[i] = w;
    for (i >>= 1; i >= 1; i >>= 1) tree_[i] = tree_[2 * i] + tree_[2 * i + 1];
}

void configuration::move_particle(std::int64_t from, std::int64_t to) {
    if (occ_[from] <= 0) throw config_error("move from an empty site");
    occ_[from] -= 1;
    occ_[to] += 1;
    set_leaf(from, spec_->rate(occ_[from]));
    if (to != from) set_leaf(to, spec_->rate(occ_[to]));
}

std::int64_t configuration::sample_site(double u) const {
    double target = u * tree_[1];
    std::size_t i = 1;
    while (i < cap_) {
        const double left = tree_[2 * i];
        if (target < left) {
            i = 2 * i;
        } else {
            target -= left;
            i = 2 * i + 1;
        }
    }
    std::int64_t x = static_cast<std::int64_t>(i - cap_);
    // roundoff at the leaves can land the descent on a padded or empty leaf;
    // walk back to the nearest site with positive weight
    while (x >= lat_->n_sites() || tree_[cap_ + x] <= 0.0) {
        if (x == 0) throw config_error("weighted selection on an empty tree");
        --x;
    }
    return x;
}

void configuration::rebuild_rates() {
    for (std::size_t x = 0; x < tree_.size() - cap_; ++x)
        tree_[cap_ + x] =
            x < occ_.size() ? spec_->rate(occ_[x]) : 0.0;
    for (std::size_t i = cap_ - 1; i >= 1; --i)
        tree_[i] = tree_[2 * i] + tree_[2 * i + 1];
}

}  // namespace zrl
