#include "zrl/empirical.hpp"

#include <cmath>

#include "zrl/errors.hpp"

namespace zrl {

empirical_fields extract_fields(const configuration& c, double t) {
    const lattice& lat = c.lat();
    const auto n = static_cast<std::size_t>(lat.n_sites());
    empirical_fields f;
    f.t = t;
    f.d = lat.d();
    f.N = lat.N();
    f.density.resize(n);
    f.jump_rate.resize(n);
    f.current.resize(n * static_cast<std::size_t>(lat.d()));
    const double inv_vol = 1.0 / static_cast<double>(lat.n_sites());
    // current components scale with N^{d-1}: bonds per unit macroscopic area
    const double inv_bond = f.d == 1 ? 1.0 : 1.0 / static_cast<double>(lat.N());
    for (std::size_t x = 0; x < n; ++x) {
        const auto k = c.occ_at(static_cast<std::int64_t>(x));
        const double g = c.spec().rate(k);
        f.density[x] = static_cast<double>(k) * inv_vol;
        f.jump_rate[x] = g * inv_vol;
        for (int j = 0; j < f.d; ++j) {
            // bond (x, x + e_j): dir 2j+1 is the +e_j neighbor
            const auto y = lat.neighbor(static_cast<std::int64_t>(x), 2 * j + 1);
            f.current[static_cast<std::size_t>(j) * n + x] =
                (g - c.spec().rate(c.occ_at(y))) * inv_bond;
        }
    }
    return f;
}

namespace {

double pair_field(const empirical_fields& f, const std::vector<double>& w,
                  const space_function& fn) {
    if (!fn) throw config_error("pairing needs a space function");
    double acc = 0.0;
    const double inv = 1.0 / static_cast<double>(f.N);
    for (std::size_t x = 0; x < w.size(); ++x) {
        std::array<double, 2> u;
        if (f.d == 1) {
            u = {static_cast<double>(x) * inv, 0.0};
        } else {
            const auto nx = static_cast<std::size_t>(f.N);
            u = {static_cast<double>(x / nx) * inv,
                 static_cast<double>(x % nx) * inv};
        }
        acc += fn(u) * w[x];
    }
    return acc;
}

}  // namespace

double pair_density(const empirical_fields& f, const space_function& fn) {
    return pair_field(f, f.density, fn);
}

double pair_jump_rate(const empirical_fields& f, const space_function& fn) {
    return pair_field(f, f.jump_rate, fn);
}

double time_integrate(
    simulation& sim, double t_end,
    const std::function<double(const configuration&, double)>& value,
    std::uint64_t event_budget) {
    if (!value) throw config_error("time integral needs an integrand");
    struct integrator final : time_observer {
        const std::function<double(const configuration&, double)>* v;
        double acc = 0.0;
        void interval(const configuration& c, double t0, double t1) override {
            acc += (*v)(c, 0.5 * (t0 + t1)) * (t1 - t0);
        }
    } obs;
    obs.v = &value;
    time_observer* list[] = {&obs};
    sim.run_until(t_end, list, event_budget);
    return obs.acc;
}

}  // namespace zrl
