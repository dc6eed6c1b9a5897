// Grand-canonical statics: partition function Z(phi) = sum_k phi^k / g!(k),
// mean density R(phi) = phi Z'(phi)/Z(phi), its inverse Phi = R^{-1}, the
// critical pair (phi_c, rho_c), the saturated inverse Phibar(rho) =
// Phi(min(rho, rho_c)), and the large-deviation rate function built from
// them.  All series are summed in log space with tail bounds; divergence is
// reported, never silently truncated.
#pragma once

#include <cstdint>
#include <vector>

#include "zrl/jump_rate.hpp"

namespace zrl {

// Z(phi); throws series_divergence when the series is detected non-summable
// (phi beyond the radius of convergence, or no usable tail bound).
double partition_function(const jump_rate_spec& spec, double phi);

// phi Z'(phi) = sum_k k phi^k / g!(k); same error contract.
double partition_first_moment(const jump_rate_spec& spec, double phi);

// R(phi) = phi Z'(phi)/Z(phi); diverges exactly when the first moment does.
double mean_density(const jump_rate_spec& spec, double phi);

// Radius of convergence phi_c = lim g!(k)^{1/k}: analytic 1 for the Evans
// family, otherwise extrapolated from the log g!(k)/k tail; throws
// unstable_extrapolation when the extrapolants disagree.
double critical_fugacity(const jump_rate_spec& spec);

class thermo_profile {
  public:
    explicit thermo_profile(jump_rate_spec spec);

    const jump_rate_spec& spec() const { return spec_; }
    double grad_sup() const { return spec_.grad_sup(); }

    double phi_c() const { return phi_c_; }
    double rho_c() const { return rho_c_; }  // +inf when non-condensing

    double Z(double phi) const { return partition_function(spec_, phi); }
    double Zprime(double phi) const;
    double R(double phi) const { return mean_density(spec_, phi); }

    // inverse of R: bisection on [0, phi_c) to |R(phi) - rho| < 1e-10;
    // requires rho < rho_c (use Phibar for the saturated extension)
    double Phi(double rho) const;

    // Phi(min(rho, rho_c)): total on rho >= 0, equal to phi_c above rho_c
    double Phibar(double rho) const;

    // uniform table of Phibar on [0, rho_max], for interpolation-based
    // consumers (PDE flux, projections)
    std::vector<double> phibar_table(double rho_max, std::size_t points) const;

    // Legendre rate function of the density at level rho around mean rho*:
    //   rho log(Phibar(rho)/Phi(rho*)) - log(Z(Phibar(rho))/Z(Phi(rho*)))
    // for rho >= 0, +inf for rho < 0.  Requires 0 < rho* < rho_c.
    double rate_function(double rho_star, double rho) const;

  private:
    jump_rate_spec spec_;
    double phi_c_;
    double rho_c_;
};

// integral of rate_function(rho*, rho0(u) ^ rho_c) over the unit torus
// (cells carry equal weight 1/#cells), plus alpha * log(phi_c/Phi(rho*)) for
// a condensate of mass alpha; throws series_divergence when phi_c = +inf and
// alpha > 0 (the condensate cost is infinite).
double entropy_density(const thermo_profile& profile,
                       const std::vector<double>& rho0_cells, double rho_star,
                       double condensate_alpha = 0.0);

}  // namespace zrl
