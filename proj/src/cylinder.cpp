#include "zrl/cylinder.hpp"

#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

#include "zrl/ensembles.hpp"
#include "zrl/errors.hpp"
#include "zrl/rng.hpp"

namespace zrl {

cylinder_observable cylinder_observable::occupancy() {
    cylinder_observable o;
    o.kind_ = kind::occupancy;
    o.radius_ = 0;
    o.slope_at_infinity_ = 1.0;  // the condensate is pure mass
    o.psi_ = [](const std::int64_t* w, std::size_t) {
        return static_cast<double>(w[0]);
    };
    o.homologue_ = [](double rho) { return rho; };
    o.name_ = "occupancy";
    return o;
}

cylinder_observable cylinder_observable::local_jump_rate(
    const thermo_profile& profile) {
    cylinder_observable o;
    o.kind_ = kind::local_jump_rate;
    o.radius_ = 0;
    o.slope_at_infinity_ = 0.0;  // bounded increments: sublinear growth
    const jump_rate_spec spec = profile.spec();
    o.psi_ = [spec](const std::int64_t* w, std::size_t) {
        return spec.rate(w[0]);
    };
    // Phibar rather than Phi: the clamped endpoint rho = rho_c must evaluate
    o.homologue_ = [&profile](double rho) { return profile.Phibar(rho); };
    o.name_ = "local-jump-rate";
    return o;
}

cylinder_observable cylinder_observable::occupancy_indicator(
    const thermo_profile& profile, std::int64_t k) {
    if (k < 0) throw config_error("indicator level must be >= 0");
    cylinder_observable o;
    o.kind_ = kind::indicator;
    o.radius_ = 0;
    o.slope_at_infinity_ = 0.0;
    o.psi_ = [k](const std::int64_t* w, std::size_t) {
        return w[0] == k ? 1.0 : 0.0;
    };
    o.homologue_ = [&profile, k](double rho) {
        if (rho == 0.0) return k == 0 ? 1.0 : 0.0;
        const double phi = profile.Phibar(rho);
        return std::exp(static_cast<double>(k) * std::log(phi) -
                        profile.spec().log_gfact(k)) /
               profile.Z(phi);
    };
    std::ostringstream os;
    os << "occupancy-indicator(" << k << ")";
    o.name_ = os.str();
    return o;
}

cylinder_observable cylinder_observable::monte_carlo(
    const thermo_profile& profile, int radius, evaluator psi,
    double slope_at_infinity, int dim, std::size_t samples,
    std::uint64_t seed) {
    if (radius < 0) throw config_error("cylinder radius must be >= 0");
    if (dim != 1 && dim != 2) throw config_error("window dimension must be 1 or 2");
    if (!psi) throw config_error("cylinder observable needs an evaluator");
    if (samples == 0) throw config_error("homologue needs at least one sample");
    cylinder_observable o;
    o.kind_ = kind::custom;
    o.radius_ = radius;
    o.slope_at_infinity_ = slope_at_infinity;
    o.psi_ = psi;
    const std::size_t side = 2 * static_cast<std::size_t>(radius) + 1;
    const std::size_t len = dim == 1 ? side : side * side;
    o.homologue_ = [&profile, psi, len, samples, seed](double rho) {
        if (rho == 0.0) {
            std::vector<std::int64_t> w(len, 0);
            return psi(w.data(), len);
        }
        const double phi = profile.Phibar(rho);
        const double z = profile.Z(phi);
        rng gen(seed, 0);
        std::vector<std::int64_t> w(len);
        double acc = 0.0;
        for (std::size_t s = 0; s < samples; ++s) {
            for (auto& wi : w)
                wi = sample_grand_canonical_site(profile.spec(), phi, z, gen);
            acc += psi(w.data(), len);
        }
        return acc / static_cast<double>(samples);
    };
    o.name_ = "custom";
    return o;
}

double extended_homologue(const cylinder_observable& obs,
                          const thermo_profile& profile, double rho) {
    if (!(rho >= 0.0)) throw config_error("density must be finite and >= 0");
    // the occupancy map is its own extension (identity below rho_c, slope 1
    // above); returning rho directly keeps eta^l(x) - Psibar(eta^l(x))
    // identically zero in floating point, not just mathematically
    if (obs.tag() == cylinder_observable::kind::occupancy) return rho;
    const double rho_c = profile.rho_c();
    if (rho < rho_c) return obs.homologue(rho);
    return obs.homologue(rho_c) + obs.slope_at_infinity() * (rho - rho_c);
}

}  // namespace zrl
