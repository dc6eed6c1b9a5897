#include "zrl/thermo.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "zrl/errors.hpp"

namespace zrl {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// hard cap on summed terms; reaching it triggers the power-law tail fit
constexpr std::size_t kSeriesCap = 2'000'000;
constexpr std::size_t kFitStart = kSeriesCap / 10;

[[noreturn]] void diverges(const char* what, const char* why) {
    std::ostringstream os;
    os << what << ": " << why;
    throw series_divergence(os.str());
}

// Sums t_{k0} + sum_{k>k0} t_k with t_k = t_{k-1} * ratio(k).  Terms must be
// nonnegative.  Stops once the running term is negligible and the local ratio
// certifies a geometric tail (which is then added); if the term cap is hit
// first, fits C*k^{-p} to the last decade of terms and adds the analytic
// power tail, throwing series_divergence when p is too close to 1 to trust.
template <class Ratio>
double sum_with_tail(double t_first, std::size_t k_first, Ratio ratio,
                     const char* what) {
    double sum = t_first;
    double t = t_first;
    std::size_t streak = 0;  // consecutive non-decreasing terms
    double fn = 0, fsx = 0, fsy = 0, fsxx = 0, fsxy = 0;
    for (std::size_t k = k_first + 1; k <= kSeriesCap; ++k) {
        const double r = ratio(k);
        if (!(r >= 0.0) || !std::isfinite(r))
            throw config_error("jump rate produced an invalid series ratio");
        t *= r;
        if (t == 0.0) return sum;  // exact cut-off, all later terms vanish
        sum += t;
        streak = r >= 1.0 ? streak + 1 : 0;
        if (streak >= 512)
            diverges(what, "terms stopped decreasing (argument beyond the "
                           "radius of convergence)");
        if (t > 1e290 || sum > 1e290)
            diverges(what, "partial sums grow beyond double range");
        if (k >= 64 && t <= sum * 1e-14) {
            const double rn = ratio(k + 1);
            if (rn < 1.0) return sum + t * rn / (1.0 - rn);
        }
        if (k >= kFitStart) {
            const double x = std::log(static_cast<double>(k));
            const double y = std::log(t);
            fn += 1.0;
            fsx += x;
            fsy += y;
            fsxx += x * x;
            fsxy += x * y;
        }
    }
    // term cap reached: certify a polynomially decaying tail or give up
    const double denom = fn * fsxx - fsx * fsx;
    if (fn < 1000.0 || denom <= 0.0)
        diverges(what, "no usable tail bound at the term cap");
    const double p = -(fn * fsxy - fsx * fsy) / denom;
    if (p <= 1.01)
        diverges(what, "tail decays too slowly to certify a finite sum");
    const double log_c = fsy / fn + p * (fsx / fn);
    const double cap = static_cast<double>(kSeriesCap);
    const double tail = std::exp(log_c) * (std::pow(cap, 1.0 - p) / (p - 1.0) -
                                           0.5 * std::pow(cap, -p));
    return sum + tail;
}

void require_fugacity(double phi) {
    if (!(phi >= 0.0))
        throw config_error("fugacity must be finite and >= 0");
}

}  // namespace

double partition_function(const jump_rate_spec& spec, double phi) {
    require_fugacity(phi);
    if (phi == 0.0) return 1.0;
    return sum_with_tail(
        1.0, 0, [&](std::size_t k) { return phi / spec.rate_unbounded(k); },
        "partition function");
}

double partition_first_moment(const jump_rate_spec& spec, double phi) {
    require_fugacity(phi);
    if (phi == 0.0) return 0.0;
    const double t1 = phi / spec.rate_unbounded(1);
    return sum_with_tail(
        t1, 1,
        [&](std::size_t k) {
            return phi * static_cast<double>(k) /
                   (spec.rate_unbounded(k) * static_cast<double>(k - 1));
        },
        "partition first moment");
}

double mean_density(const jump_rate_spec& spec, double phi) {
    require_fugacity(phi);
    if (phi == 0.0) return 0.0;
    return partition_first_moment(spec, phi) / partition_function(spec, phi);
}

namespace {

// three-point fit of a(k) = A + B log(k)/k + C/k at k, k/2, k/4; returns e^A
double fugacity_extrapolant(const jump_rate_spec& spec, std::size_t k) {
    double m[3][4];
    for (int i = 0; i < 3; ++i) {
        const auto ki = k >> i;
        const double kd = static_cast<double>(ki);
        m[i][0] = 1.0;
        m[i][1] = std::log(kd) / kd;
        m[i][2] = 1.0 / kd;
        m[i][3] = spec.log_gfact(static_cast<std::int64_t>(ki)) / kd;
    }
    // gaussian elimination on the 3x4 system
    for (int c = 0; c < 3; ++c) {
        int piv = c;
        for (int r = c + 1; r < 3; ++r)
            if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
        for (int j = 0; j < 4; ++j) std::swap(m[c][j], m[piv][j]);
        for (int r = 0; r < 3; ++r) {
            if (r == c) continue;
            const double f = m[r][c] / m[c][c];
            for (int j = c; j < 4; ++j) m[r][j] -= f * m[c][j];
        }
    }
    return std::exp(m[0][3] / m[0][0]);
}

}  // namespace

double critical_fugacity(const jump_rate_spec& spec) {
    if (spec.is_evans()) return 1.0;  // g!(k) ~ C k^b, so g!(k)^{1/k} -> 1
    const std::size_t k = spec.k_max();
    if (k < 64)
        throw config_error("jump rate table too short to extrapolate the "
                           "critical fugacity (need k_max >= 64)");
    const auto a = [&](std::size_t j) {
        return spec.log_gfact(static_cast<std::int64_t>(j)) /
               static_cast<double>(j);
    };
    // factorial-type growth: a(k) keeps climbing by ~log 2 per doubling
    if (a(k) - a(k / 2) > 0.05) return kInf;
    const double f1 = fugacity_extrapolant(spec, k);
    const double f2 = fugacity_extrapolant(spec, k / 2);
    if (std::abs(f1 - f2) > 1e-4 * std::max(1.0, f1)) {
        std::ostringstream os;
        os << "critical fugacity extrapolants disagree: " << f1 << " vs " << f2;
        throw unstable_extrapolation(os.str());
    }
    return f1;
}

thermo_profile::thermo_profile(jump_rate_spec spec) : spec_(std::move(spec)) {
    phi_c_ = critical_fugacity(spec_);
    if (std::isinf(phi_c_)) {
        rho_c_ = kInf;
        return;
    }
    try {
        rho_c_ = mean_density(spec_, phi_c_);
    } catch (const series_divergence&) {
        rho_c_ = kInf;  // first moment diverges at phi_c: no condensation
    }
}

double thermo_profile::Zprime(double phi) const {
    require_fugacity(phi);
    if (phi == 0.0) return 1.0 / spec_.rate_unbounded(1);
    return partition_first_moment(spec_, phi) / phi;
}

double thermo_profile::Phi(double rho) const {
    if (!(rho >= 0.0)) throw config_error("density must be finite and >= 0");
    if (rho == 0.0) return 0.0;
    if (rho >= rho_c_)
        throw config_error("density at or above critical: the inverse of the "
                           "mean density is only defined below rho_c (use the "
                           "saturated extension)");
    // bracket: R is strictly increasing on [0, phi_c)
    double lo = 0.0;
    double hi = 0.5 * phi_c_;
    while (R(hi) < rho) {
        lo = hi;
        hi = 0.5 * (hi + phi_c_);
        if (phi_c_ - hi < 1e-13 * phi_c_)
            throw config_error("density too close to critical to invert");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * phi_c_; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double r = R(mid);
        if (std::abs(r - rho) < 1e-10) return mid;
        (r < rho ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double thermo_profile::Phibar(double rho) const {
    if (!(rho >= 0.0)) throw config_error("density must be finite and >= 0");
    if (rho >= rho_c_) return phi_c_;
    return Phi(rho);
}

std::vector<double> thermo_profile::phibar_table(double rho_max,
                                                 std::size_t points) const {
    if (!(rho_max > 0.0) || points < 2)
        throw config_error("saturated-inverse table needs rho_max > 0 and at "
                           "least two points");
    std::vector<double> tab(points);
    tab[0] = 0.0;
    double lo = 0.0;  // Phi is monotone, so brackets advance with the node
    const double step = rho_max / static_cast<double>(points - 1);
    for (std::size_t j = 1; j < points; ++j) {
        const double rho = step * static_cast<double>(j);
        if (rho >= rho_c_) {
            tab[j] = phi_c_;
            lo = phi_c_;
            continue;
        }
        // bisect in [lo, phi_c): R(lo) <= rho from the previous node
        double a = lo, b = phi_c_;
        while (b - a > 1e-13 * std::max(1.0, phi_c_)) {
            const double mid = 0.5 * (a + b);
            if (phi_c_ - mid <= 0.0) break;
            const double r = R(mid);
            if (std::abs(r - rho) < 1e-10) break;
            (r < rho ? a : b) = mid;
        }
        tab[j] = 0.5 * (a + b);
        lo = a;
    }
    return tab;
}

double thermo_profile::rate_function(double rho_star, double rho) const {
    if (!(rho_star > 0.0) || rho_star >= rho_c_)
        throw config_error("reference density must satisfy 0 < rho* < rho_c");
    if (rho < 0.0) return kInf;
    const double phi_star = Phi(rho_star);
    const double phibar = Phibar(rho);
    const double log_phi_ratio =
        rho > 0.0 ? rho * (std::log(phibar) - std::log(phi_star)) : 0.0;
    return log_phi_ratio - (std::log(Z(phibar)) - std::log(Z(phi_star)));
}

double entropy_density(const thermo_profile& profile,
                       const std::vector<double>& rho0_cells, double rho_star,
                       double condensate_alpha) {
    if (rho0_cells.empty())
        throw config_error("entropy density needs a nonempty density profile");
    if (!(condensate_alpha >= 0.0))
        throw config_error("condensate mass must be >= 0");
    if (condensate_alpha > 0.0 && std::isinf(profile.phi_c()))
        throw series_divergence(
            "condensate cost is infinite: the critical fugacity diverges, so "
            "log(phi_c/Phi(rho*)) has no finite value");
    double acc = 0.0;
    for (double rho : rho0_cells) {
        if (!(rho >= 0.0))
            throw config_error("density profile must be finite and >= 0");
        acc += profile.rate_function(rho_star, std::min(rho, profile.rho_c()));
    }
    double out = acc / static_cast<double>(rho0_cells.size());
    if (condensate_alpha > 0.0)
        out += condensate_alpha *
               (std::log(profile.phi_c()) - std::log(profile.Phi(rho_star)));
    return out;
}

}  // namespace zrl
