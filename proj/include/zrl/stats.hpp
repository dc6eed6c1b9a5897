// Replica summaries and the chi-squared machinery used by the statistical
// checks: survival function via the regularized incomplete gamma function,
// quantiles by bisection, goodness-of-fit with tail pooling, and the
// one-sided upper confidence limit for a variance.
#pragma once

#include <cstdint>
#include <vector>

namespace zrl {

struct replica_stats {
    std::vector<double> values;         // per replica, in replica order
    std::vector<std::uint64_t> streams; // RNG stream ids, same order
    double mean = 0.0;
    double se = 0.0;  // sample std / sqrt(R)
    std::size_t R = 0;
};

replica_stats summarize(std::vector<double> values,
                        std::vector<std::uint64_t> streams = {});

// sample variance (unbiased) of a replica vector
double sample_variance(const std::vector<double>& values);

// P(X > x) for X ~ chi^2_k
double chi2_sf(double x, double k);
// inverse: x with P(X <= x) = p
double chi2_ppf(double p, double k);

struct gof_result {
    double stat = 0.0;
    double pvalue = 1.0;
    std::size_t dof = 0;
};

// Pearson chi-squared against given cell probabilities; trailing cells are
// pooled until every expected count is >= min_expected
gof_result chi2_gof(const std::vector<std::int64_t>& counts,
                    const std::vector<double>& probs,
                    double min_expected = 5.0);

// one-sided upper confidence limit for the population variance:
// s^2 (R-1) / chi2_ppf(1 - confidence, R-1)
double variance_upper_cl(const std::vector<double>& values,
                         double confidence = 0.95);

}  // namespace zrl
