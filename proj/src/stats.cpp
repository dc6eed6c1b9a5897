#include "zrl/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "zrl/errors.hpp"

namespace zrl {

namespace {

// regularized lower incomplete gamma P(a, x) by its power series; valid and
// fast for x < a + 1
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 10000; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// regularized upper incomplete gamma Q(a, x) by a modified Lentz continued
// fraction; valid and fast for x >= a + 1
double gamma_q_cf(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double chi2_sf(double x, double k) {
    if (!(k > 0.0) || !std::isfinite(k))
        throw config_error("chi-squared needs a positive number of degrees "
                           "of freedom");
    if (std::isnan(x)) throw config_error("chi-squared statistic is NaN");
    if (x <= 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    const double a = 0.5 * k, hx = 0.5 * x;
    return hx < a + 1.0 ? 1.0 - gamma_p_series(a, hx) : gamma_q_cf(a, hx);
}

double chi2_ppf(double p, double k) {
    if (!(p > 0.0) || !(p < 1.0))
        throw config_error("quantile level must lie strictly inside (0, 1)");
    if (!(k > 0.0) || !std::isfinite(k))
        throw config_error("chi-squared needs a positive number of degrees "
                           "of freedom");
    double lo = 0.0, hi = std::max(k, 1.0);
    while (1.0 - chi2_sf(hi, k) < p) {
        hi *= 2.0;
        if (hi > 1e300) throw config_error("chi-squared quantile overflow");
    }
    for (int i = 0; i < 400 && hi - lo > 1e-14 * std::max(1.0, hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        (1.0 - chi2_sf(mid, k) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

gof_result chi2_gof(const std::vector<std::int64_t>& counts,
                    const std::vector<double>& probs, double min_expected) {
    if (counts.size() != probs.size() || counts.empty())
        throw config_error("goodness of fit needs matching nonempty count "
                           "and probability vectors");
    if (!(min_expected > 0.0))
        throw config_error("minimum expected count must be positive");
    double n = 0.0;
    for (auto c : counts) {
        if (c < 0) throw config_error("counts must be >= 0");
        n += double(c);
    }
    for (double p : probs)
        if (!(p >= 0.0) || !std::isfinite(p))
            throw config_error("cell probabilities must be finite and >= 0");

    // pool cells left to right; a trailing underfull remainder folds into
    // the last emitted cell
    std::vector<double> obs, exp;
    double o_acc = 0.0, e_acc = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        o_acc += double(counts[i]);
        e_acc += n * probs[i];
        if (e_acc >= min_expected) {
            obs.push_back(o_acc);
            exp.push_back(e_acc);
            o_acc = 0.0;
            e_acc = 0.0;
        }
    }
    if (e_acc > 0.0 || o_acc > 0.0) {
        if (obs.empty())
            throw config_error("every pooled cell falls below the minimum "
                               "expected count");
        obs.back() += o_acc;
        exp.back() += e_acc;
    }

    gof_result r;
    if (obs.size() < 2) return r;  // no resolvable cells: stat 0, p-value 1
    for (std::size_t i = 0; i < obs.size(); ++i) {
        const double d = obs[i] - exp[i];
        r.stat += d * d / exp[i];
    }
    r.dof = obs.size() - 1;
    r.pvalue = chi2_sf(r.stat, double(r.dof));
    return r;
}

replica_stats summarize(std::vector<double> values,
                        std::vector<std::uint64_t> streams) {
    if (values.empty()) throw config_error("no replica values to summarize");
    if (!streams.empty() && streams.size() != values.size())
        throw config_error("replica stream ids do not match the value count");
    replica_stats s;
    s.R = values.size();
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / double(s.R);
    if (s.R >= 2)
        s.se = std::sqrt(sample_variance(values) / double(s.R));
    s.values = std::move(values);
    s.streams = std::move(streams);
    return s;
}

double sample_variance(const std::vector<double>& values) {
    if (values.size() < 2)
        throw config_error("sample variance needs at least two values");
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / double(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return ss / double(values.size() - 1);
}

double variance_upper_cl(const std::vector<double>& values, double confidence) {
    if (!(confidence > 0.0) || !(confidence < 1.0))
        throw config_error("confidence level must lie strictly inside (0, 1)");
    const double r = double(values.size());
    return sample_variance(values) * (r - 1.0) /
           chi2_ppf(1.0 - confidence, r - 1.0);
}

}  // namespace zrl
