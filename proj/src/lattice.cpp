#include "zrl/lattice.hpp"

#include "zrl/errors.hpp"

namespace zrl {

lattice::lattice(int d, std::int64_t N) : d_(d), N_(N) {
    if (d != 1 && d != 2) throw config_error("lattice dimension must be 1 or 2");
    if (N < 2) throw config_error("lattice side must be at least 2");
    n_sites_ = d == 1 ? N : N * N;
    nbr_.resize(static_cast<std::size_t>(n_sites_) * n_dirs());
    for (std::int64_t s = 0; s < n_sites_; ++s) {
        const auto c = coords(s);
        for (int dir = 0; dir < n_dirs(); ++dir) {
            const int axis = dir / 2;
            const std::int64_t step = dir % 2 ? 1 : -1;
            auto cc = c;
            cc[axis] += step;
            nbr_[static_cast<std::size_t>(s) * n_dirs() + dir] = site_at(cc);
        }
    }
}

std::int64_t lattice::site_at(std::array<std::int64_t, 2> c) const {
    auto wrap = [this](std::int64_t v) {
        v %= N_;
        return v < 0 ? v + N_ : v;
    };
    if (d_ == 1) return wrap(c[0]);
    return wrap(c[0]) * N_ + wrap(c[1]);
}

std::array<std::int64_t, 2> lattice::coords(std::int64_t site) const {
    if (d_ == 1) return {site, 0};
    return {site / N_, site % N_};
}

std::array<double, 2> lattice::position(std::int64_t site) const {
    const auto c = coords(site);
    const double inv = 1.0 / static_cast<double>(N_);
    if (d_ == 1) return {static_cast<double>(c[0]) * inv, 0.0};
    return {static_cast<double>(c[0]) * inv, static_cast<double>(c[1]) * inv};
}

}  // namespace zrl
