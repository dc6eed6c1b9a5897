#include "zrl/pde.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "zrl/errors.hpp"
#include "zrl/kernels.hpp"

namespace zrl {

namespace {

std::size_t checked_cells(int d, std::size_t G) {
    if (d != 1 && d != 2)
        throw config_error("grid dimension must be 1 or 2, got " +
                           std::to_string(d));
    if (G < 2) throw config_error("grid needs at least two cells per side");
    return d == 1 ? G : G * G;
}

// forward-difference energy integrand at the pre-step state:
// sum over cells with phi >= 1e-12 of |grad phi|^2 / phi
double energy_sum(const std::vector<double>& phi, int d, std::size_t G,
                  double dx) {
    double s = 0.0;
    if (d == 1) {
        for (std::size_t i = 0; i < G; ++i) {
            if (phi[i] < 1e-12) continue;
            const double gf = (phi[i + 1 < G ? i + 1 : 0] - phi[i]) / dx;
            s += gf * gf / phi[i];
        }
        return s;
    }
    for (std::size_t i = 0; i < G; ++i) {
        const std::size_t row = i * G;
        const std::size_t dn = (i + 1 < G ? i + 1 : 0) * G;
        for (std::size_t j = 0; j < G; ++j) {
            const double c = phi[row + j];
            if (c < 1e-12) continue;
            const double gx = (phi[dn + j] - c) / dx;
            const double gy = (phi[row + (j + 1 < G ? j + 1 : 0)] - c) / dx;
            s += (gx * gx + gy * gy) / c;
        }
    }
    return s;
}

}  // namespace

double pde_solution::mass(std::size_t snap_index) const {
    if (snap_index >= snapshots.size())
        throw config_error("snapshot index out of range");
    const auto& k = kernels::active();
    const double cell_vol = d == 1 ? dx : dx * dx;
    return k.sum(snapshots[snap_index].data(), snapshots[snap_index].size()) *
           cell_vol;
}

double pde_solution::energy_total() const {
    double s = 0.0;
    for (double e : segment_energy) s += e;
    return s;
}

double energy_functional(const pde_solution& sol) { return sol.energy_total(); }

pde_solution solve_saturated_diffusion(const std::vector<double>& rho0, int d,
                                       std::size_t G,
                                       const thermo_profile& profile, double T,
                                       const std::vector<double>& snap_times,
                                       const pde_options& opt) {
    const std::size_t n_cells = checked_cells(d, G);
    if (rho0.size() != n_cells)
        throw config_error("initial data has " + std::to_string(rho0.size()) +
                           " cells, expected " + std::to_string(n_cells));
    for (double r : rho0)
        if (!(r >= 0.0) || !std::isfinite(r))
            throw config_error("initial density must be finite and >= 0");
    if (!(opt.safety > 0.0))
        throw config_error("CFL safety fraction must be positive");
    if (opt.safety > 1.0)
        throw config_error("CFL violation: safety fraction " +
                           std::to_string(opt.safety) + " exceeds 1");
    if (opt.table_points < 2)
        throw config_error("flux table needs at least two points");
    if (snap_times.empty())
        throw config_error("at least one snapshot time is required");
    if (!(T >= 0.0) || !std::isfinite(T))
        throw config_error("final time must be finite and >= 0");
    for (std::size_t i = 0; i < snap_times.size(); ++i) {
        if (!(snap_times[i] >= 0.0))
            throw config_error("snapshot times must be >= 0");
        if (i > 0 && snap_times[i] < snap_times[i - 1])
            throw config_error("snapshot times must be sorted");
    }
    if (std::abs(snap_times.back() - T) > 1e-12 * std::max(1.0, std::abs(T)))
        throw config_error("the last snapshot time must equal the final time");

    const auto& k = kernels::active();

    pde_solution sol;
    sol.d = d;
    sol.G = G;
    sol.dx = 1.0 / static_cast<double>(G);
    sol.dt_base =
        opt.safety * sol.dx * sol.dx / (2.0 * d * profile.grad_sup());

    double rho_max = opt.rho_table_max;
    if (rho_max <= 0.0) {
        const double peak = k.max(rho0.data(), n_cells);
        rho_max = std::max(1.125 * peak, 1.0);
    }
    const double drho = rho_max / static_cast<double>(opt.table_points - 1);
    const std::vector<double> tab = profile.phibar_table(rho_max,
                                                         opt.table_points);

    const double cell_vol = d == 1 ? sol.dx : sol.dx * sol.dx;

    std::vector<double> rho = rho0;
    std::vector<double> phi(n_cells);
    double t = 0.0;
    double prev_mass = k.sum(rho.data(), n_cells) * cell_vol;

    for (double target : snap_times) {
        const double segment = target - t;
        double seg_energy = 0.0;
        if (segment > 0.0) {
            const auto n_steps = std::max<std::uint64_t>(
                1, static_cast<std::uint64_t>(
                       std::ceil(segment / sol.dt_base - 1e-12)));
            const double dt = segment / static_cast<double>(n_steps);
            const double c = dt / (sol.dx * sol.dx);
            for (std::uint64_t s = 0; s < n_steps; ++s) {
                k.table_interp_map(rho.data(), phi.data(), n_cells, tab.data(),
                                   opt.table_points, drho);
                seg_energy += energy_sum(phi, d, G, sol.dx) * cell_vol * dt;
                if (d == 1)
                    k.laplacian_flux_update_1d(rho.data(), phi.data(), G, c);
                else
                    k.laplacian_flux_update_2d(rho.data(), phi.data(), G, c);
                const double m = k.sum(rho.data(), n_cells) * cell_vol;
                sol.mass_drift_max =
                    std::max(sol.mass_drift_max, std::abs(m - prev_mass));
                prev_mass = m;
            }
            t = target;
        }
        sol.times.push_back(target);
        sol.snapshots.push_back(rho);
        sol.segment_energy.push_back(seg_energy);
    }
    return sol;
}

double weak_error(const empirical_fields& pi, const std::vector<double>& rho,
                  int d, std::size_t G,
                  const std::vector<space_function>& tests) {
    const std::size_t n_cells = checked_cells(d, G);
    if (rho.size() != n_cells)
        throw config_error("grid snapshot has the wrong number of cells");
    const double cell_vol =
        d == 1 ? 1.0 / double(G) : 1.0 / (double(G) * double(G));
    double worst = 0.0;
    for (const auto& f : tests) {
        double grid_side = 0.0;
        for (std::size_t i = 0; i < n_cells; ++i) {
            std::array<double, 2> u = {0.0, 0.0};
            if (d == 1) {
                u[0] = double(i) / double(G);
            } else {
                u[0] = double(i / G) / double(G);
                u[1] = double(i % G) / double(G);
            }
            grid_side += f(u) * rho[i];
        }
        grid_side *= cell_vol;
        worst = std::max(worst, std::abs(pair_density(pi, f) - grid_side));
    }
    return worst;
}

void deposit_point_mass(std::vector<double>& grid, int d, std::size_t G,
                        std::array<double, 2> u, double alpha) {
    const std::size_t n_cells = checked_cells(d, G);
    if (grid.size() != n_cells)
        throw config_error("grid has the wrong number of cells");
    if (!(alpha >= 0.0)) throw config_error("point mass must be >= 0");
    const auto cell_of = [G](double x) {
        x -= std::floor(x);  // wrap onto the torus
        auto i = static_cast<std::size_t>(x * double(G));
        return std::min(i, G - 1);
    };
    const double inv_vol = d == 1 ? double(G) : double(G) * double(G);
    const std::size_t idx =
        d == 1 ? cell_of(u[0]) : cell_of(u[0]) * G + cell_of(u[1]);
    grid[idx] += alpha * inv_vol;
}

}  // namespace zrl
