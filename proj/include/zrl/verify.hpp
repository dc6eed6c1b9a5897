// Statistical harness: every limit-theorem diagnostic is computed over an
// ensemble of independent replicas (one RNG stream per replica) and reported
// as mean +/- standard error.  The theorems are asymptotic, so checks are
// trend tables and 3-s.e. assertions, never absolute limits.  All time
// integrals are event-wise exact (see simulate.hpp).
#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "zrl/cylinder.hpp"
#include "zrl/empirical.hpp"
#include "zrl/ensembles.hpp"
#include "zrl/lattice.hpp"
#include "zrl/stats.hpp"
#include "zrl/thermo.hpp"

namespace zrl {

struct replica_plan {
    std::size_t R = 50;
    std::uint64_t master_seed = 1;
    unsigned workers = 0;  // 0 = hardware concurrency
    std::uint64_t event_budget = 1000000000ull;
};

// experiment geometry + dynamics shared by all replicas of one statistic
struct experiment {
    const lattice* lat = nullptr;           // borrowed
    const thermo_profile* profile = nullptr;  // borrowed
    initial_condition init;
    double T = 0.1;
};

// deterministic replica fan-out: results indexed by replica regardless of
// scheduling; exceptions from workers are rethrown
template <class T>
std::vector<T> parallel_map(std::size_t R, unsigned workers,
                            const std::function<T(std::size_t)>& fn) {
    std::vector<T> out(R);
    if (workers == 0) workers = std::thread::hardware_concurrency();
    if (workers <= 1 || R <= 1) {
        for (std::size_t i = 0; i < R; ++i) out[i] = fn(i);
        return out;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    if (workers > R) workers = static_cast<unsigned>(R);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < R; i += workers) out[i] = fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

// G(t,u) = a(t) h(u) with analytic derivatives; empty time parts mean
// a = 1 (then a' = 0 and the antiderivative is t).  The restriction to
// separable weights keeps time integrals exact.
struct separable_field {
    space_function space;  // h(u)
    std::function<double(std::array<double, 2>, int)> space_grad;  // d_j h
    space_function space_laplacian;                                // Lap h
    std::function<double(double)> time;           // a(t)
    std::function<double(double)> time_prime;     // a'(t)
    std::function<double(double)> time_integral;  // A(t) with A' = a

    double a(double t) const { return time ? time(t) : 1.0; }
    double a_prime(double t) const { return time_prime ? time_prime(t) : 0.0; }
    double A(double t) const { return time_integral ? time_integral(t) : t; }
};

// |integral of (1/N^d) sum_x H(x/N) [Psi^l(x) - Psibar(eta^l(x))] dt| per
// replica; exactly zero for the occupancy observable by construction
replica_stats one_block_stat(const experiment& ex,
                             const cylinder_observable& psi,
                             const space_function& H, std::int64_t ell,
                             const replica_plan& plan);

// sup over sample times of the two continuity residuals: V1 pairs the
// continuum Laplacian of G with sigma^N, V2 pairs the continuum gradient
// with the current W^N
struct continuity_result {
    replica_stats v1;
    replica_stats v2;
};
continuity_result continuity_residuals(const experiment& ex,
                                       const separable_field& G,
                                       const std::vector<double>& sample_times,
                                       const replica_plan& plan);

// the exact martingale A_T (discrete Laplacian against sigma^N) per replica,
// its cross-replica variance with one-sided upper confidence limit, the
// realized quadratic variation, and the a-priori bound
//   2d |grad G|^2 |g'|_inf T <1,pi_0>/N^d
struct qv_result {
    replica_stats a_T;
    replica_stats realized_qv;
    double variance = 0.0;
    double variance_upper_cl = 0.0;  // 95% one-sided
    double bound = 0.0;
};
qv_result martingale_qv_check(const experiment& ex, const separable_field& G,
                              const replica_plan& plan);

// exact equivalence-of-ensembles deviations |E_{nu_{n,K}}[g] - Phibar(rho)|
// at K = floor(rho n); deterministic, no replicas
struct eoe_row {
    std::size_t n = 0;
    std::int64_t K = 0;
    double expectation_g = 0.0;
    double deviation = 0.0;
};
std::vector<eoe_row> eoe_table(const thermo_profile& profile, double rho,
                               const std::vector<std::size_t>& sizes);

// epsilon-block averaged jump rate: per-site time averages (against phi_c)
// and the sup over sites and sample times
struct jump_rate_bound_result {
    replica_stats sup_stat;            // max over sites and sample times
    std::vector<double> site_mean;     // time-averaged value per site
    std::vector<double> site_se;
    double phi_c = 0.0;
    std::size_t sites_above_band = 0;  // mean > phi_c + 3 se
};
jump_rate_bound_result jump_rate_bound(const experiment& ex, double eps,
                                       const std::vector<double>& sample_times,
                                       const replica_plan& plan);

// time integrals of the truncated double-block excess
//   (1/N^d) sum_x [(eta^l(x)-M)^+]^{[Ne]} 1{eta^{l,[Ne]}(x) <= M}
// and of the cut-off mass (1/N^d) sum_x (eta^l(x) ^ M) 1{eta^l(x) > A};
// diagnostic only (no pass/fail)
struct double_block_result {
    replica_stats truncated_excess;
    replica_stats cutoff_mass;
};
double_block_result double_block_stat(const experiment& ex, std::int64_t ell,
                                      double eps, double M, double A,
                                      const replica_plan& plan);

// energy diagnostics from epsilon-smoothed jump-rate snapshots: a dictionary
// lower bound for K0(sigma) = sup_H int int (H' - 2H^2) dsigma (20 fixed
// trigonometric fields), and the discrete sum |grad sigma|^2/sigma (d = 1)
struct energy_result {
    replica_stats k0_lower;
    replica_stats grad_energy;
};
energy_result energy_stat(const experiment& ex, double eps,
                          const std::vector<double>& sample_times,
                          const replica_plan& plan);

// replica-mean empirical density at time T, for pairing against a PDE grid
struct hydro_result {
    empirical_fields mean_fields;       // density averaged over replicas
    std::vector<double> pairings;       // <f_k, mean pi^N>
};
hydro_result mean_density_at_time(const experiment& ex,
                                  const std::vector<space_function>& tests,
                                  const replica_plan& plan);

}  // namespace zrl
