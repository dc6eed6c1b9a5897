#include "zrl/simulate.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "zrl/errors.hpp"

namespace zrl {

namespace {
// incremental leaf updates drift by roundoff; recompute exactly this often
constexpr std::uint64_t kRebuildCadence = 1ull << 20;
}  // namespace

simulation::simulation(const lattice& lat, const jump_rate_spec& spec,
                       std::vector<std::int64_t> occ, rng gen)
    : config_(lat, spec, std::move(occ)), gen_(std::move(gen)) {}

double simulation::total_rate() const {
    const auto& l = config_.lat();
    return static_cast<double>(l.N()) * static_cast<double>(l.N()) *
           static_cast<double>(l.n_dirs()) * config_.rate_sum();
}

jump_event simulation::step(rng& gen) {
    const double rate = total_rate();
    if (rate <= 0.0)
        return {-1, -1, std::numeric_limits<double>::infinity()};
    jump_event ev;
    ev.dt = gen.next_exponential(rate);
    ev.from = config_.sample_site(gen.next_double());
    const int dir = static_cast<int>(gen.next_double() *
                                     static_cast<double>(config_.lat().n_dirs()));
    ev.to = config_.lat().neighbor(
        ev.from, dir < config_.lat().n_dirs() ? dir : config_.lat().n_dirs() - 1);
    t_ += ev.dt;
    config_.move_particle(ev.from, ev.to);
    events_ += 1;
    if (events_ % kRebuildCadence == 0) config_.rebuild_rates();
    return ev;
}

void simulation::run_until(double t_end,
                           std::span<time_observer* const> observers,
                           std::uint64_t event_budget) {
    if (t_end < t_)
        throw config_error("run_until target is in the past");
    std::uint64_t used = 0;
    while (t_ < t_end) {
        const double rate = total_rate();
        if (rate <= 0.0) {
            // frozen: nothing moves for the rest of the horizon
            for (auto* o : observers) o->interval(config_, t_, t_end);
            t_ = t_end;
            return;
        }
        const double dt = gen_.next_exponential(rate);
        if (t_ + dt >= t_end) {
            // the drawn event lands beyond the horizon: discard it (the
            // exponential is memoryless, so stopping here is exact) and do
            // not consume the site/direction draws
            for (auto* o : observers) o->interval(config_, t_, t_end);
            t_ = t_end;
            return;
        }
        const double t1 = t_ + dt;
        for (auto* o : observers) o->interval(config_, t_, t1);
        const std::int64_t from = config_.sample_site(gen_.next_double());
        const int n_dirs = config_.lat().n_dirs();
        int dir = static_cast<int>(gen_.next_double() *
                                   static_cast<double>(n_dirs));
        if (dir >= n_dirs) dir = n_dirs - 1;
        const std::int64_t to = config_.lat().neighbor(from, dir);
        t_ = t1;
        config_.move_particle(from, to);
        events_ += 1;
        used += 1;
        if (events_ % kRebuildCadence == 0) config_.rebuild_rates();
        for (auto* o : observers) o->jumped(config_, t_, from, to);
        if (used >= event_budget)
            throw event_budget_exceeded(
                "event budget exhausted before reaching the time horizon");
    }
}

simulation::snapshot simulation::save() const {
    return {config_.occ(), t_, events_, gen_.save()};
}

void simulation::restore(const snapshot& s) {
    config_ = configuration(config_.lat(), config_.spec(), s.occ);
    t_ = s.t;
    events_ = s.events;
    gen_.restore(s.rng_state);
}

}  // namespace zrl
