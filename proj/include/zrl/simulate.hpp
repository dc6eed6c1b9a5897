// Event-driven simulation of the diffusively rescaled symmetric
// nearest-neighbor zero-range process.  Time is macroscopic: the total event
// rate is N^2 * 2d * sum_x g(eta(x)), so hydrodynamic statements apply at
// t = O(1).  Between events the configuration is constant; observers receive
// every constant interval, which makes time integrals of configuration
// functionals exact (no sampling error in t).
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "zrl/configuration.hpp"
#include "zrl/jump_rate.hpp"
#include "zrl/lattice.hpp"
#include "zrl/rng.hpp"

namespace zrl {

struct jump_event {
    std::int64_t from = -1;
    std::int64_t to = -1;
    double dt = 0.0;  // +inf when the lattice is frozen (rate_sum = 0)
};

class time_observer {
  public:
    virtual ~time_observer() = default;

    // the configuration is constant on [t0, t1); called before the event at
    // t1 (if any) is applied
    virtual void interval(const configuration& c, double t0, double t1) = 0;

    // called after a particle moved from -> to at time t
    virtual void jumped(const configuration& c, double t, std::int64_t from,
                        std::int64_t to) {
        (void)c; (void)t; (void)from; (void)to;
    }
};

class simulation {
  public:
    static constexpr std::uint64_t default_event_budget = 1000000000ull;

    // lat and spec are borrowed; the caller keeps them alive
    simulation(const lattice& lat, const jump_rate_spec& spec,
               std::vector<std::int64_t> occ, rng gen);

    const configuration& config() const { return config_; }
    const lattice& lat() const { return config_.lat(); }
    double t() const { return t_; }
    std::uint64_t events() const { return events_; }

    // N^2 * 2d * sum_x g(eta(x))
    double total_rate() const;

    // draw the waiting time, advance the clock, move one particle; returns
    // the event (dt = +inf and no move when frozen)
    jump_event step(rng& gen);
    jump_event step() { return step(gen_); }

    // advance to t_end, feeding every constant interval to the observers;
    // throws event_budget_exceeded when the cumulative event count passes
    // the budget (observers have seen everything up to the last event)
    void run_until(double t_end, std::span<time_observer* const> observers,
                   std::uint64_t event_budget = default_event_budget);
    void run_until(double t_end) { run_until(t_end, {}); }

    // checkpoint state; io.hpp (de)serializes it losslessly
    struct snapshot {
        std::vector<std::int64_t> occ;
        double t = 0.0;
        std::uint64_t events = 0;
        rng::state rng_state;
    };
    snapshot save() const;
    void restore(const snapshot& s);

  private:
    configuration config_;
    rng gen_;
    double t_ = 0.0;
    std::uint64_t events_ = 0;
};

}  // namespace zrl
