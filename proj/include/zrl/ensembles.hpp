// Canonical ensemble nu_{n,K} (product law conditioned on K total particles)
// via log-space dynamic programming, exact sequential sampling from it, and
// samplers for every initial distribution used by the experiments.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "zrl/jump_rate.hpp"
#include "zrl/lattice.hpp"
#include "zrl/rng.hpp"
#include "zrl/thermo.hpp"

namespace zrl {

// log Z_{n,k} for n = 1..n_sites, k = 0..K, with
// Z_{n,k} = sum_{|eta|=k over n sites} prod_x 1/g!(eta_x).
struct canonical_table {
    std::size_t n_sites;
    std::int64_t K;
    std::vector<double> logZ;  // (n-1)*(K+1) + k

    double at(std::size_t n, std::int64_t k) const {
        return logZ[(n - 1) * static_cast<std::size_t>(K + 1) + k];
    }
};

// O(n K^2) log-sum-exp recursion Z_{n,k} = sum_j Z_{n-1,k-j}/g!(j);
// capacity_error beyond K = 5000 (documented desk-scale cap)
canonical_table build_canonical_table(const jump_rate_spec& spec,
                                      std::size_t n_sites, std::int64_t K);

// E_{nu_{n,K}}[g(eta(0))] = Z_{n,K-1}/Z_{n,K}, exact from the table
double canonical_expectation_g(const canonical_table& table, std::size_t n,
                               std::int64_t K);

// marginal law of one site under nu_{n,K}: P(eta_1 = j), j = 0..K
std::vector<double> canonical_marginal(const canonical_table& table,
                                       const jump_rate_spec& spec,
                                       std::size_t n, std::int64_t K);

// exact sample with total mass K: sites drawn in fixed index order from the
// conditional laws P(eta_i = j) = Z_{rem-1,Krem-j}/(g!(j) Z_{rem,Krem})
std::vector<std::int64_t> sample_canonical(const canonical_table& table,
                                           const jump_rate_spec& spec,
                                           rng& gen);

struct initial_condition {
    enum class kind {
        product_profile,   // independent nu_phi(rho0(x/N)) per site
        canonical,         // nu_{N^d, K}
        deterministic      // fixed occupancies
    };

    kind family = kind::product_profile;

    // product_profile: rho0 per site (flattened, lattice order); optional
    // condensate of mass floor(alpha N^d) planted at site [N u] (that site's
    // occupancy is set, not sampled)
    std::vector<double> rho0;
    double condensate_alpha = 0.0;
    std::array<double, 2> condensate_u = {0.0, 0.0};

    std::int64_t K = 0;                 // canonical
    std::vector<std::int64_t> eta;      // deterministic
};

// per-site fugacities and partition values for a product profile, shared
// across replicas; throws supercritical_profile when rho0 > rho_c anywhere
struct product_marginals {
    std::vector<double> phi;
    std::vector<double> z;  // Z(phi) per site
};
product_marginals prepare_product_marginals(const std::vector<double>& rho0,
                                            const thermo_profile& profile);

// draw from the one-site law P(k) = phi^k/(g!(k) Z(phi))
std::int64_t sample_grand_canonical_site(const jump_rate_spec& spec, double phi,
                                         double z, rng& gen);

// realize an initial condition on the lattice (one RNG per caller/replica)
std::vector<std::int64_t> sample_initial(const initial_condition& ic,
                                         const lattice& lat,
                                         const thermo_profile& profile,
                                         rng& gen);

}  // namespace zrl
