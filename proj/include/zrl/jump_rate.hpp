// Local jump rate g of a zero-range process plus the cached tables derived
// from it: log g!(k) = sum_{j<=k} log g(j) and the gradient bound
// grad_sup = sup_k |g(k+1)-g(k)| (the k=0 step g(1) included).
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace zrl {

class jump_rate_spec {
  public:
    static constexpr std::size_t default_k_max = 100000;

    // g(k) = 1 + b/k for k >= 1, g(0) = 0.  b = 0 is the constant-rate gas;
    // b > 2 condenses with critical density 1/(b-2).
    static jump_rate_spec evans(double b, std::size_t k_max = default_k_max);

    // arbitrary rate: fn(0) must be 0 and fn(k) > 0 for k >= 1; fn is kept
    // for tail evaluation beyond the cached table
    static jump_rate_spec custom(std::function<double(std::size_t)> fn,
                                 std::size_t k_max = default_k_max);

    // g(k); occupancies beyond k_max are a hard capacity error (the caller
    // sizes the table from N and the condensate mass)
    double rate(std::int64_t k) const;

    // g(k) for series evaluation: falls back to the generating function
    // beyond the cached table instead of erroring
    double rate_unbounded(std::size_t k) const;

    double log_gfact(std::int64_t k) const;  // log g!(k), k <= k_max

    double grad_sup() const { return grad_sup_; }
    std::size_t k_max() const { return rate_.size() - 1; }

    bool is_evans() const { return family_ == family::evans; }
    double evans_b() const;  // config_error unless evans family

    std::string describe() const;  // e.g. "evans(b=4)" for manifests

  private:
    enum class family { evans, custom };

    jump_rate_spec(family f, double b, std::function<double(std::size_t)> fn,
                   std::size_t k_max);

    family family_;
    double b_;
    std::function<double(std::size_t)> fn_;
    std::vector<double> rate_;       // k = 0..k_max
    std::vector<double> log_gfact_;  // k = 0..k_max
    double grad_sup_;
};

}  // namespace zrl
