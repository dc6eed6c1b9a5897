// Explicit flux-form finite differences on the torus for the saturated
// filtration equation d_t rho = Lap Phibar(rho), with Phibar tabulated once
// and interpolated linearly.  The scheme is monotone at the CFL-stable step
// dt = safety * dx^2 / (2d * grad_sup), which gives positivity, an exact
// discrete comparison principle, and per-step mass conservation up to
// roundoff.
#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "zrl/empirical.hpp"
#include "zrl/thermo.hpp"

namespace zrl {

struct pde_options {
    double safety = 0.8;             // CFL fraction; > 1 is rejected
    std::size_t table_points = 10000;
    double rho_table_max = 0.0;      // 0 = auto: max(1.125 * max rho0, 1)
};

struct pde_solution {
    int d = 1;
    std::size_t G = 0;
    double dx = 0.0;
    double dt_base = 0.0;  // unsegmented stable step

    std::vector<double> times;                   // requested snapshot times
    std::vector<std::vector<double>> snapshots;  // G^d values per time

    double mass_drift_max = 0.0;  // max per-step |d(mass)|

    // energy functional sum |grad Phibar|^2 / Phibar dx^d dt accumulated
    // between consecutive snapshot times (cells with Phibar < 1e-12 skipped)
    std::vector<double> segment_energy;

    double mass(std::size_t snap_index) const;
    double energy_total() const;
};

// snap_times must be sorted, nonnegative; a leading 0 stores the initial
// data.  Each segment between snapshot times is stepped with
// dt = segment/ceil(segment/dt_base) so snapshot times are hit exactly.
pde_solution solve_saturated_diffusion(const std::vector<double>& rho0, int d,
                                       std::size_t G,
                                       const thermo_profile& profile, double T,
                                       const std::vector<double>& snap_times,
                                       const pde_options& opt = {});

// total energy functional of a computed trajectory
double energy_functional(const pde_solution& sol);

// max_k |<f_k, pi> - sum_i f_k(u_i) rho_i dx^d| between an empirical density
// and a grid snapshot
double weak_error(const empirical_fields& pi, const std::vector<double>& rho,
                  int d, std::size_t G,
                  const std::vector<space_function>& tests);

// grid representation of a point mass: alpha/dx^d added to the containing
// cell (the grid-scale stand-in for a condensate at u)
void deposit_point_mass(std::vector<double>& grid, int d, std::size_t G,
                        std::array<double, 2> u, double alpha);

}  // namespace zrl
