// Empirical measures of a configuration: density pi^N (atoms eta(x)/N^d at
// x/N), jump rate sigma^N (atoms g(eta(x))/N^d), and the per-bond current
// field W^N with components [g(eta_x) - g(eta_{x+e_j})]/N^{d-1}, whose total
// is deterministically zero on the torus.
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "zrl/configuration.hpp"
#include "zrl/simulate.hpp"

namespace zrl {

struct empirical_fields {
    double t = 0.0;
    int d = 1;
    std::int64_t N = 0;
    std::vector<double> density;    // per site: eta(x)/N^d
    std::vector<double> jump_rate;  // per site: g(eta(x))/N^d
    // component j of the current on the bond (x, x+e_j), laid out as
    // current[j * n_sites + x]
    std::vector<double> current;
};

empirical_fields extract_fields(const configuration& c, double t = 0.0);

using space_function = std::function<double(std::array<double, 2>)>;

// <f, pi^N> = sum_x f(x/N) eta(x)/N^d, and the sigma^N analogue
double pair_density(const empirical_fields& f, const space_function& fn);
double pair_jump_rate(const empirical_fields& f, const space_function& fn);

// integral over [sim.t(), t_end] of value(config, t) dt, advanced along the
// trajectory: within each constant holding interval the configuration part is
// exact and the explicit t-dependence is integrated by the midpoint rule
double time_integrate(
    simulation& sim, double t_end,
    const std::function<double(const configuration&, double)>& value,
    std::uint64_t event_budget = simulation::default_event_budget);

}  // namespace zrl
