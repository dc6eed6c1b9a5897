#include "zrl/jump_rate.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "zrl/errors.hpp"

namespace zrl {

jump_rate_spec::jump_rate_spec(family f, double b,
                               std::function<double(std::size_t)> fn,
                               std::size_t k_max)
    : family_(f), b_(b), fn_(std::move(fn)) {
    if (k_max < 2) throw config_error("jump rate table needs k_max >= 2");
    rate_.resize(k_max + 1);
    log_gfact_.resize(k_max + 1);
    rate_[0] = 0.0;
    log_gfact_[0] = 0.0;
    grad_sup_ = 0.0;
    for (std::size_t k = 1; k <= k_max; ++k) {
        const double g = fn_(k);
        if (!(g > 0.0) || !std::isfinite(g)) {
            std::ostringstream os;
            os << "jump rate must be finite and positive for k >= 1; g(" << k
               << ") = " << g;
            throw config_error(os.str());
        }
        rate_[k] = g;
        log_gfact_[k] = log_gfact_[k - 1] + std::log(g);
        grad_sup_ = std::max(grad_sup_, std::abs(g - rate_[k - 1]));
    }
}

jump_rate_spec jump_rate_spec::evans(double b, std::size_t k_max) {
    if (b < 0.0 || !std::isfinite(b))
        throw config_error("interaction strength b must be finite and >= 0");
    auto fn = [b](std::size_t k) {
        return k == 0 ? 0.0 : 1.0 + b / static_cast<double>(k);
    };
    return jump_rate_spec(family::evans, b, fn, k_max);
}

jump_rate_spec jump_rate_spec::custom(std::function<double(std::size_t)> fn,
                                      std::size_t k_max) {
    if (!fn) throw config_error("custom jump rate requires a generating function");
    if (fn(0) != 0.0) throw config_error("jump rate must vanish at occupancy 0");
    return jump_rate_spec(family::custom, 0.0, std::move(fn), k_max);
}

double jump_rate_spec::rate(std::int64_t k) const {
    if (k < 0) throw config_error("negative occupancy in jump rate lookup");
    if (static_cast<std::size_t>(k) >= rate_.size()) {
        std::ostringstream os;
        os << "occupancy " << k << " exceeds jump rate table capacity "
           << (rate_.size() - 1)
           << "; enlarge k_max for this lattice/condensate size";
        throw capacity_error(os.str());
    }
    return rate_[static_cast<std::size_t>(k)];
}

double jump_rate_spec::rate_unbounded(std::size_t k) const {
    if (k < rate_.size()) return rate_[k];
    return fn_(k);
}

double jump_rate_spec::log_gfact(std::int64_t k) const {
    if (k < 0) throw config_error("negative occupancy in log g! lookup");
    if (static_cast<std::size_t>(k) >= log_gfact_.size()) {
        std::ostringstream os;
        os << "occupancy " << k << " exceeds jump rate table capacity "
           << (log_gfact_.size() - 1);
        throw capacity_error(os.str());
    }
    return log_gfact_[static_cast<std::size_t>(k)];
}

double jump_rate_spec::evans_b() const {
    if (family_ != family::evans)
        throw config_error("evans_b() queried on a non-evans jump rate");
    return b_;
}

std::string jump_rate_spec::describe() const {
    if (family_ == family::evans) {
        std::ostringstream os;
        os << "evans(b=" << b_ << ")";
        return os.str();
    }
    return "custom";
}

}  // namespace zrl
