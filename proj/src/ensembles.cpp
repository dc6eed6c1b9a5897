#include "zrl/ensembles.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <utility>
#include <vector>

#include "zrl/errors.hpp"

namespace zrl {

namespace {
constexpr std::int64_t kCanonicalCap = 5000;
}

canonical_table build_canonical_table(const jump_rate_spec& spec,
                                      std::size_t n_sites, std::int64_t K) {
    if (n_sites == 0) throw config_error("canonical table needs >= 1 site");
    if (K < 0) throw config_error("particle number must be >= 0");
    if (K > kCanonicalCap) {
        std::ostringstream os;
        os << "particle number " << K << " exceeds the canonical table cap "
           << kCanonicalCap;
        throw capacity_error(os.str());
    }
    const std::size_t cols = static_cast<std::size_t>(K + 1);
    canonical_table t{n_sites, K, std::vector<double>(n_sites * cols)};
    std::vector<double> lg(cols);
    for (std::size_t k = 0; k < cols; ++k)
        lg[k] = spec.log_gfact(static_cast<std::int64_t>(k));
    for (std::size_t k = 0; k < cols; ++k) t.logZ[k] = -lg[k];
    std::vector<double> terms(cols);
    for (std::size_t n = 2; n <= n_sites; ++n) {
        const double* prev = &t.logZ[(n - 2) * cols];
        double* row = &t.logZ[(n - 1) * cols];
        for (std::size_t k = 0; k < cols; ++k) {
            double m = -std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j <= k; ++j) {
                terms[j] = prev[k - j] - lg[j];
                if (terms[j] > m) m = terms[j];
            }
            double s = 0.0;
            for (std::size_t j = 0; j <= k; ++j) s += std::exp(terms[j] - m);
            row[k] = m + std::log(s);
        }
    }
    return t;
}

namespace {

void require_in_table(const canonical_table& t, std::size_t n, std::int64_t K,
                      const char* what) {
    if (n < 1 || n > t.n_sites || K < 0 || K > t.K) {
        std::ostringstream os;
        os << what << ": (n=" << n << ", K=" << K
           << ") outside the built table (n <= " << t.n_sites
           << ", K <= " << t.K << ")";
        throw config_error(os.str());
    }
}

}  // namespace

double canonical_expectation_g(const canonical_table& table, std::size_t n,
                               std::int64_t K) {
    require_in_table(table, n, K, "canonical expectation");
    if (K == 0) return 0.0;  // empty system: g(0) = 0 surely
    return std::exp(table.at(n, K - 1) - table.at(n, K));
}

std::vector<double> canonical_marginal(const canonical_table& table,
                                       const jump_rate_spec& spec,
                                       std::size_t n, std::int64_t K) {
    require_in_table(table, n, K, "canonical marginal");
    std::vector<double> p(static_cast<std::size_t>(K + 1), 0.0);
    if (n == 1) {
        p[static_cast<std::size_t>(K)] = 1.0;
        return p;
    }
    const double logZ = table.at(n, K);
    for (std::int64_t j = 0; j <= K; ++j)
        p[static_cast<std::size_t>(j)] =
            std::exp(table.at(n - 1, K - j) - spec.log_gfact(j) - logZ);
    return p;
}

std::vector<std::int64_t> sample_canonical(const canonical_table& table,
                                           const jump_rate_spec& spec,
                                           rng& gen) {
    std::vector<std::int64_t> occ(table.n_sites, 0);
    std::int64_t k_rem = table.K;
    for (std::size_t i = 0; i + 1 < table.n_sites; ++i) {
        const std::size_t rem = table.n_sites - i;  // sites still unassigned
        const double log_z = table.at(rem, k_rem);
        const double u = gen.next_double();
        double cum = 0.0;
        std::int64_t drawn = k_rem;  // fp fallback: all remaining mass
        for (std::int64_t j = 0; j <= k_rem; ++j) {
            cum += std::exp(table.at(rem - 1, k_rem - j) - spec.log_gfact(j) -
                            log_z);
            if (u < cum) {
                drawn = j;
                break;
            }
        }
        occ[i] = drawn;
        k_rem -= drawn;
        if (k_rem == 0) break;
    }
    occ[table.n_sites - 1] += k_rem;
    return occ;
}

product_marginals prepare_product_marginals(const std::vector<double>& rho0,
                                            const thermo_profile& profile) {
    product_marginals m;
    m.phi.resize(rho0.size());
    m.z.resize(rho0.size());
    std::unordered_map<double, std::pair<double, double>> cache;
    for (std::size_t i = 0; i < rho0.size(); ++i) {
        const double rho = rho0[i];
        if (!(rho >= 0.0))
            throw config_error("density profile must be finite and >= 0");
        if (rho > profile.rho_c()) {
            std::ostringstream os;
            os << "profile density " << rho << " exceeds the critical density "
               << profile.rho_c()
               << "; a product measure cannot carry supercritical mass";
            throw supercritical_profile(os.str());
        }
        auto it = cache.find(rho);
        if (it == cache.end()) {
            const double phi = profile.Phibar(rho);
            it = cache.emplace(rho, std::make_pair(phi, profile.Z(phi))).first;
        }
        m.phi[i] = it->second.first;
        m.z[i] = it->second.second;
    }
    return m;
}

std::int64_t sample_grand_canonical_site(const jump_rate_spec& spec, double phi,
                                         double z, rng& gen) {
    if (phi == 0.0) return 0;
    const double target = gen.next_double() * z;
    double term = 1.0;
    double cum = 1.0;
    std::int64_t k = 0;
    while (cum <= target) {
        k += 1;
        term *= phi / spec.rate_unbounded(static_cast<std::size_t>(k));
        cum += term;
        if (k > (std::int64_t{1} << 31))
            throw config_error("one-site sampler failed to terminate; the "
                               "fugacity is not below critical");
    }
    return k;
}

std::vector<std::int64_t> sample_initial(const initial_condition& ic,
                                         const lattice& lat,
                                         const thermo_profile& profile,
                                         rng& gen) {
    const auto n = static_cast<std::size_t>(lat.n_sites());
    switch (ic.family) {
        case initial_condition::kind::deterministic: {
            if (ic.eta.size() != n)
                throw config_error("deterministic occupancy length does not "
                                   "match the lattice");
            for (auto k : ic.eta)
                if (k < 0) throw config_error("negative occupancy");
            return ic.eta;
        }
        case initial_condition::kind::canonical: {
            const auto table =
                build_canonical_table(profile.spec(), n, ic.K);
            return sample_canonical(table, profile.spec(), gen);
        }
        case initial_condition::kind::product_profile: {
            if (ic.rho0.size() != n)
                throw config_error(
                    "density profile length does not match the lattice");
            const auto marg = prepare_product_marginals(ic.rho0, profile);
            std::vector<std::int64_t> occ(n);
            for (std::size_t i = 0; i < n; ++i)
                occ[i] = sample_grand_canonical_site(profile.spec(), marg.phi[i],
                                                     marg.z[i], gen);
            if (ic.condensate_alpha > 0.0) {
                const double mass =
                    ic.condensate_alpha * static_cast<double>(lat.n_sites());
                const std::int64_t site = lat.site_at(
                    {static_cast<std::int64_t>(ic.condensate_u[0] *
                                               static_cast<double>(lat.N())),
                     static_cast<std::int64_t>(ic.condensate_u[1] *
                                               static_cast<double>(lat.N()))});
                occ[static_cast<std::size_t>(site)] =
                    static_cast<std::int64_t>(mass);
            }
            return occ;
        }
    }
    throw config_error("unknown initial condition kind");
}

}  // namespace zrl
