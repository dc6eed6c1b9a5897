// Cylinder observables: local functions Psi of the occupancies in a
// (2r+1)^d window, together with their homologue Psi~(rho) = E_{nu_rho}[Psi]
// under the product equilibrium and the slope at infinity that controls the
// condensed-phase contribution.  The extended homologue
//   Psi-bar(rho) = Psi~(rho ^ rho_c) + slope * (rho - rho_c)^+
// is the macroscopic image of Psi in the condensing regime.
#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "zrl/thermo.hpp"

namespace zrl {

class cylinder_observable {
  public:
    // evaluator over the flattened (2r+1)^d window centred at the site,
    // row-major in d=2
    using evaluator =
        std::function<double(const std::int64_t* window, std::size_t len)>;

    enum class kind { occupancy, local_jump_rate, indicator, custom };

    // Psi = eta(0): homologue rho, slope 1 (extended homologue is rho itself)
    static cylinder_observable occupancy();

    // Psi = g(eta(0)): homologue Phi(rho), sublinear (g is bounded-gradient)
    static cylinder_observable local_jump_rate(const thermo_profile& profile);

    // Psi = 1{eta(0) = k}: homologue phi^k / (g!(k) Z(phi)) at phi = Phi(rho)
    static cylinder_observable occupancy_indicator(const thermo_profile& profile,
                                                   std::int64_t k);

    // user-supplied Psi over a (2*radius+1)^dim window; the homologue is
    // Monte Carlo over the product law nu_rho with a fixed documented seed,
    // so it is deterministic per build
    static cylinder_observable monte_carlo(const thermo_profile& profile,
                                           int radius, evaluator psi,
                                           double slope_at_infinity, int dim = 1,
                                           std::size_t samples = 1000000,
                                           std::uint64_t seed = 0x5eed51a7edull);

    int radius() const { return radius_; }
    kind tag() const { return kind_; }
    bool sublinear() const { return slope_at_infinity_ == 0.0; }
    double slope_at_infinity() const { return slope_at_infinity_; }
    std::string name() const { return name_; }

    double eval(const std::int64_t* window, std::size_t len) const {
        return psi_(window, len);
    }
    double homologue(double rho) const { return homologue_(rho); }

  private:
    cylinder_observable() = default;

    kind kind_ = kind::custom;
    int radius_ = 0;
    double slope_at_infinity_ = 0.0;
    evaluator psi_;
    std::function<double(double)> homologue_;
    std::string name_;
};

// Psi~(rho ^ rho_c) + slope * (rho - rho_c)^+; total on rho >= 0
double extended_homologue(const cylinder_observable& obs,
                          const thermo_profile& profile, double rho);

}  // namespace zrl
