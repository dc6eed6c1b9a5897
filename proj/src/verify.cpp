#include "zrl/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "zrl/block.hpp"
#include "zrl/errors.hpp"
#include "zrl/simulate.hpp"

namespace zrl {

namespace {

void check_experiment(const experiment& ex) {
    if (ex.lat == nullptr || ex.profile == nullptr)
        throw config_error("experiment needs a lattice and a thermodynamic "
                           "profile");
    if (!(ex.T >= 0.0) || !std::isfinite(ex.T))
        throw config_error("experiment horizon must be finite and >= 0");
}

void check_sample_times(const std::vector<double>& times, double T) {
    if (times.empty()) throw config_error("at least one sample time required");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] >= 0.0) || times[i] > T)
            throw config_error("sample times must lie in [0, T]");
        if (i > 0 && times[i] < times[i - 1])
            throw config_error("sample times must be sorted");
    }
}

simulation make_replica(const experiment& ex, rng gen) {
    auto occ = sample_initial(ex.init, *ex.lat, *ex.profile, gen);
    return simulation(*ex.lat, ex.profile->spec(), std::move(occ), gen);
}

std::vector<std::uint64_t> stream_ids(std::size_t R) {
    std::vector<std::uint64_t> s(R);
    for (std::size_t i = 0; i < R; ++i) s[i] = i;
    return s;
}

// visit every site within sup-norm distance r of `site` (periodic)
template <class F>
void for_window(const lattice& lat, std::int64_t site, std::int64_t r, F&& f) {
    if (lat.d() == 1) {
        const std::int64_t N = lat.N();
        for (std::int64_t o = -r; o <= r; ++o) {
            std::int64_t y = (site + o) % N;
            if (y < 0) y += N;
            f(y);
        }
        return;
    }
    const auto c = lat.coords(site);
    for (std::int64_t oi = -r; oi <= r; ++oi)
        for (std::int64_t oj = -r; oj <= r; ++oj)
            f(lat.site_at({c[0] + oi, c[1] + oj}));
}

double eval_cylinder(const cylinder_observable& psi, const lattice& lat,
                     const std::vector<std::int64_t>& occ, std::int64_t site,
                     std::vector<std::int64_t>& buf) {
    const std::int64_t r = psi.radius();
    if (r == 0) return psi.eval(&occ[site], 1);
    buf.clear();
    for_window(lat, site, r,
               [&](std::int64_t y) { buf.push_back(occ[y]); });
    return psi.eval(buf.data(), buf.size());
}

// incremental observer for the one-block defect
//   S(eta) = sum_x H(x/N) [Psi^l(x) - Psibar(eta^l(x))]
// maintained exactly through each jump: a move touches O((l+r)^d) sites
struct one_block_observer final : time_observer {
    const experiment& ex;
    const cylinder_observable& psi;
    std::int64_t ell;
    double window = 1.0;  // (2 ell + 1)^d

    std::vector<double> hval;              // H(x/N)
    std::vector<std::int64_t> wsum;        // occupancy window sums
    std::vector<double> psi_val, psi_sum;  // per-site Psi and its window sums
    std::vector<double> d_val;             // current per-site defect
    std::vector<std::uint64_t> psi_stamp, d_stamp;
    std::uint64_t epoch = 0;
    std::unordered_map<std::int64_t, double> hom_cache;
    std::vector<std::int64_t> scratch;

    double s_raw = 0.0;  // sum_x H(x) d_val(x)
    double acc = 0.0;    // integral of s_raw dt

    one_block_observer(const experiment& e, const cylinder_observable& p,
                       const space_function& H, std::int64_t l,
                       const configuration& c)
        : ex(e), psi(p), ell(l) {
        const lattice& lat = *ex.lat;
        const auto n = static_cast<std::size_t>(lat.n_sites());
        window = double(window_size(lat, ell));
        hval.resize(n);
        for (std::size_t x = 0; x < n; ++x)
            hval[x] = H(lat.position(std::int64_t(x)));
        wsum = window_sums(lat, c.occ(), ell);
        psi_val.resize(n);
        for (std::size_t x = 0; x < n; ++x)
            psi_val[x] =
                eval_cylinder(psi, lat, c.occ(), std::int64_t(x), scratch);
        psi_sum = window_sums(lat, psi_val, ell);
        psi_stamp.assign(n, 0);
        d_stamp.assign(n, 0);
        d_val.resize(n);
        for (std::size_t x = 0; x < n; ++x) {
            d_val[x] = defect(std::int64_t(x));
            s_raw += hval[x] * d_val[x];
        }
    }

    double homologue_at(std::int64_t k) {
        const auto it = hom_cache.find(k);
        if (it != hom_cache.end()) return it->second;
        const double v = extended_homologue(psi, *ex.profile,
                                            double(k) / window);
        hom_cache.emplace(k, v);
        return v;
    }

    // same division path on both sides so the identity observable cancels
    // bitwise, not just mathematically
    double defect(std::int64_t x) {
        return psi_sum[x] / window - homologue_at(wsum[x]);
    }

    void touch_site(const configuration& c, std::int64_t s,
                    std::int64_t deta) {
        const lattice& lat = *ex.lat;
        for_window(lat, s, ell, [&](std::int64_t x) { wsum[x] += deta; });
        for_window(lat, s, psi.radius(), [&](std::int64_t y) {
            if (psi_stamp[y] == epoch) return;
            psi_stamp[y] = epoch;
            const double now = eval_cylinder(psi, lat, c.occ(), y, scratch);
            const double delta = now - psi_val[y];
            if (delta != 0.0) {
                psi_val[y] = now;
                for_window(lat, y, ell,
                           [&](std::int64_t x) { psi_sum[x] += delta; });
            }
        });
    }

    void refresh_around(std::int64_t s) {
        for_window(*ex.lat, s, ell + psi.radius(), [&](std::int64_t x) {
            if (d_stamp[x] == epoch) return;
            d_stamp[x] = epoch;
            const double now = defect(x);
            s_raw += hval[x] * (now - d_val[x]);
            d_val[x] = now;
        });
    }

    void interval(const configuration&, double t0, double t1) override {
        acc += s_raw * (t1 - t0);
    }

    void jumped(const configuration& c, double, std::int64_t from,
                std::int64_t to) override {
        ++epoch;
        touch_site(c, from, -1);
        touch_site(c, to, +1);
        refresh_around(from);
        refresh_around(to);
    }
};

// shared state for the continuity residuals: raw (unnormalized) pairings
// maintained through each jump, with exact time integrals of the separable
// weight
struct continuity_observer final : time_observer {
    const separable_field& G;
    const jump_rate_spec& spec;
    const lattice& lat;

    std::vector<double> h;        // G spatial part at x/N
    std::vector<double> lap;      // continuum Laplacian of h at x/N
    std::vector<double> grad_div; // sum_j [d_j h(x) - d_j h(x - e_j)]

    double P = 0.0;     // sum_x h(x) eta(x)
    double L = 0.0;     // sum_x lap(x) g(eta(x))
    double W = 0.0;     // sum_{j,x} d_j h(x) [g(eta(x)) - g(eta(x+e_j))]
    double Ipi = 0.0;   // integral of P da
    double IL = 0.0;    // integral of L a dt
    double IW = 0.0;    // integral of W a dt

    continuity_observer(const separable_field& g, const jump_rate_spec& sp,
                        const configuration& c)
        : G(g), spec(sp), lat(c.lat()) {
        if (!G.space || !G.space_grad || !G.space_laplacian)
            throw config_error("continuity residuals need the spatial part "
                               "with gradient and Laplacian evaluators");
        const auto n = static_cast<std::size_t>(lat.n_sites());
        h.resize(n);
        lap.resize(n);
        grad_div.resize(n);
        std::vector<double> gj(n * lat.d());
        for (std::size_t x = 0; x < n; ++x) {
            const auto u = lat.position(std::int64_t(x));
            h[x] = G.space(u);
            lap[x] = G.space_laplacian(u);
            for (int j = 0; j < lat.d(); ++j)
                gj[std::size_t(j) * n + x] = G.space_grad(u, j);
        }
        for (std::size_t x = 0; x < n; ++x) {
            double s = 0.0;
            for (int j = 0; j < lat.d(); ++j) {
                const auto left = static_cast<std::size_t>(
                    lat.neighbor(std::int64_t(x), 2 * j));
                s += gj[std::size_t(j) * n + x] - gj[std::size_t(j) * n + left];
            }
            grad_div[x] = s;
        }
        for (std::size_t x = 0; x < n; ++x) {
            const double g_x = spec.rate(std::size_t(c.occ()[x]));
            P += h[x] * double(c.occ()[x]);
            L += lap[x] * g_x;
            for (int j = 0; j < lat.d(); ++j) {
                const auto right = static_cast<std::size_t>(
                    lat.neighbor(std::int64_t(x), 2 * j + 1));
                W += gj[std::size_t(j) * n + x] *
                     (g_x - spec.rate(std::size_t(c.occ()[right])));
            }
        }
    }

    void interval(const configuration&, double t0, double t1) override {
        const double da = G.a(t1) - G.a(t0);
        const double dA = G.A(t1) - G.A(t0);
        Ipi += P * da;
        IL += L * dA;
        IW += W * dA;
    }

    void jumped(const configuration& c, double, std::int64_t from,
                std::int64_t to) override {
        const auto kf = c.occ()[from], kt = c.occ()[to];
        const double dgf = spec.rate(std::size_t(kf)) -
                           spec.rate(std::size_t(kf + 1));
        const double dgt = spec.rate(std::size_t(kt)) -
                           spec.rate(std::size_t(kt - 1));
        P += h[to] - h[from];
        L += lap[from] * dgf + lap[to] * dgt;
        W += grad_div[from] * dgf + grad_div[to] * dgt;
    }
};

// martingale observer: discrete Laplacian against sigma^N plus the realized
// quadratic variation accumulated jump by jump
struct qv_observer final : time_observer {
    const jump_rate_spec& spec;
    std::vector<double> h, lapN;
    double P = 0.0, L = 0.0;
    double I = 0.0;       // integral of L dt
    double qv_raw = 0.0;  // sum over jumps of (h(to) - h(from))^2

    qv_observer(const separable_field& g, const jump_rate_spec& sp,
                const configuration& c)
        : spec(sp) {
        const lattice& lat = c.lat();
        const auto n = static_cast<std::size_t>(lat.n_sites());
        const double N2 = double(lat.N()) * double(lat.N());
        h.resize(n);
        for (std::size_t x = 0; x < n; ++x)
            h[x] = g.space(lat.position(std::int64_t(x)));
        lapN.resize(n);
        for (std::size_t x = 0; x < n; ++x) {
            double s = 0.0;
            for (int j = 0; j < lat.d(); ++j) {
                const auto p = static_cast<std::size_t>(
                    lat.neighbor(std::int64_t(x), 2 * j + 1));
                const auto m = static_cast<std::size_t>(
                    lat.neighbor(std::int64_t(x), 2 * j));
                s += (h[p] - h[x]) - (h[x] - h[m]);
            }
            lapN[x] = N2 * s;
        }
        for (std::size_t x = 0; x < n; ++x) {
            P += h[x] * double(c.occ()[x]);
            L += lapN[x] * spec.rate(std::size_t(c.occ()[x]));
        }
    }

    void interval(const configuration&, double t0, double t1) override {
        I += L * (t1 - t0);
    }

    void jumped(const configuration& c, double, std::int64_t from,
                std::int64_t to) override {
        const auto kf = c.occ()[from], kt = c.occ()[to];
        L += lapN[from] * (spec.rate(std::size_t(kf)) -
                           spec.rate(std::size_t(kf + 1))) +
             lapN[to] * (spec.rate(std::size_t(kt)) -
                         spec.rate(std::size_t(kt - 1)));
        const double dh = h[to] - h[from];
        P += dh;
        qv_raw += dh * dh;
    }
};

// epsilon-block averages of the per-site jump rates
std::vector<double> rate_block_field(const configuration& c,
                                     const jump_rate_spec& spec,
                                     std::int64_t radius) {
    const auto n = static_cast<std::size_t>(c.lat().n_sites());
    std::vector<double> rate(n);
    for (std::size_t x = 0; x < n; ++x)
        rate[x] = spec.rate(std::size_t(c.occ()[x]));
    auto sums = window_sums(c.lat(), rate, radius);
    const double inv = 1.0 / double(window_size(c.lat(), radius));
    for (auto& v : sums) v *= inv;
    return sums;
}

std::int64_t block_radius(const lattice& lat, double eps) {
    const auto r = static_cast<std::int64_t>(double(lat.N()) * eps);
    if (r < 1)
        throw config_error("block scale [N eps] must be at least one site");
    if (2 * r + 1 > lat.N())
        throw config_error("block window exceeds the lattice");
    return r;
}

}  // namespace

replica_stats one_block_stat(const experiment& ex,
                             const cylinder_observable& psi,
                             const space_function& H, std::int64_t ell,
                             const replica_plan& plan) {
    check_experiment(ex);
    if (ell < 0 || 2 * ell + 1 > ex.lat->N())
        throw config_error("block radius does not fit the lattice");
    const double inv_vol = 1.0 / double(ex.lat->n_sites());
    const auto values = parallel_map<double>(
        plan.R, plan.workers, [&](std::size_t i) {
            auto sim = make_replica(ex, rng(plan.master_seed, i));
            one_block_observer obs(ex, psi, H, ell, sim.config());
            time_observer* list[] = {&obs};
            sim.run_until(ex.T, list, plan.event_budget);
            return std::abs(obs.acc) * inv_vol;
        });
    return summarize(values, stream_ids(plan.R));
}

continuity_result continuity_residuals(const experiment& ex,
                                       const separable_field& G,
                                       const std::vector<double>& sample_times,
                                       const replica_plan& plan) {
    check_experiment(ex);
    check_sample_times(sample_times, ex.T);
    const double inv_vol = 1.0 / double(ex.lat->n_sites());
    const double inv_bond =
        ex.lat->d() == 1 ? 1.0 : 1.0 / double(ex.lat->N());
    struct pair_v {
        double v1, v2;
    };
    const auto sups = parallel_map<pair_v>(
        plan.R, plan.workers, [&](std::size_t i) {
            auto sim = make_replica(ex, rng(plan.master_seed, i));
            continuity_observer obs(G, ex.profile->spec(), sim.config());
            time_observer* list[] = {&obs};
            const double a0 = G.a(0.0), p0 = obs.P;
            pair_v sup = {0.0, 0.0};
            for (double t : sample_times) {
                sim.run_until(t, list, plan.event_budget);
                const double head = G.a(t) * obs.P - a0 * p0 - obs.Ipi;
                const double v1 = (head - obs.IL) * inv_vol;
                const double v2 = head * inv_vol - obs.IW * inv_bond;
                sup.v1 = std::max(sup.v1, std::abs(v1));
                sup.v2 = std::max(sup.v2, std::abs(v2));
            }
            return sup;
        });
    std::vector<double> v1(plan.R), v2(plan.R);
    for (std::size_t i = 0; i < plan.R; ++i) {
        v1[i] = sups[i].v1;
        v2[i] = sups[i].v2;
    }
    continuity_result res;
    res.v1 = summarize(std::move(v1), stream_ids(plan.R));
    res.v2 = summarize(std::move(v2), stream_ids(plan.R));
    return res;
}

qv_result martingale_qv_check(const experiment& ex, const separable_field& G,
                              const replica_plan& plan) {
    check_experiment(ex);
    if (G.time || G.time_prime || G.time_integral)
        throw config_error("the quadratic-variation check needs a "
                           "time-independent field");
    if (!G.space || !G.space_grad)
        throw config_error("the quadratic-variation check needs the spatial "
                           "part and its gradient");
    const double inv_vol = 1.0 / double(ex.lat->n_sites());
    struct triple {
        double a, qv, mass0;
    };
    const auto rows = parallel_map<triple>(
        plan.R, plan.workers, [&](std::size_t i) {
            auto sim = make_replica(ex, rng(plan.master_seed, i));
            qv_observer obs(G, ex.profile->spec(), sim.config());
            time_observer* list[] = {&obs};
            const double p0 = obs.P;
            const double mass0 = double(sim.config().total()) * inv_vol;
            sim.run_until(ex.T, list, plan.event_budget);
            return triple{(obs.P - p0 - obs.I) * inv_vol,
                          obs.qv_raw * inv_vol * inv_vol, mass0};
        });
    std::vector<double> a(plan.R), qv(plan.R);
    double mean_mass0 = 0.0;
    for (std::size_t i = 0; i < plan.R; ++i) {
        a[i] = rows[i].a;
        qv[i] = rows[i].qv;
        mean_mass0 += rows[i].mass0;
    }
    mean_mass0 /= double(plan.R);

    // sup over lattice points of |grad G|^2 (the analytic gradient sampled
    // where the dynamics lives)
    double grad2 = 0.0;
    for (std::int64_t x = 0; x < ex.lat->n_sites(); ++x) {
        double s = 0.0;
        for (int j = 0; j < ex.lat->d(); ++j) {
            const double gj = G.space_grad(ex.lat->position(x), j);
            s += gj * gj;
        }
        grad2 = std::max(grad2, s);
    }

    qv_result res;
    res.variance = plan.R >= 2 ? sample_variance(a) : 0.0;
    res.variance_upper_cl = plan.R >= 2 ? zrl::variance_upper_cl(a, 0.95) : 0.0;
    res.bound = 2.0 * ex.lat->d() * grad2 * ex.profile->grad_sup() * ex.T *
                mean_mass0;
    res.a_T = summarize(std::move(a), stream_ids(plan.R));
    res.realized_qv = summarize(std::move(qv), stream_ids(plan.R));
    return res;
}

std::vector<eoe_row> eoe_table(const thermo_profile& profile, double rho,
                               const std::vector<std::size_t>& sizes) {
    if (!(rho >= 0.0) || !std::isfinite(rho))
        throw config_error("density must be finite and >= 0");
    if (sizes.empty()) throw config_error("no ensemble sizes given");
    const double target = profile.Phibar(rho);
    std::vector<eoe_row> rows;
    rows.reserve(sizes.size());
    for (const std::size_t n : sizes) {
        if (n == 0) throw config_error("ensemble size must be >= 1");
        eoe_row row;
        row.n = n;
        row.K = static_cast<std::int64_t>(rho * double(n));
        const auto table = build_canonical_table(profile.spec(), n, row.K);
        row.expectation_g = canonical_expectation_g(table, n, row.K);
        row.deviation = std::abs(row.expectation_g - target);
        rows.push_back(row);
    }
    return rows;
}

jump_rate_bound_result jump_rate_bound(const experiment& ex, double eps,
                                       const std::vector<double>& sample_times,
                                       const replica_plan& plan) {
    check_experiment(ex);
    check_sample_times(sample_times, ex.T);
    if (!std::isfinite(ex.profile->phi_c()))
        throw config_error("the jump-rate bound needs a finite critical "
                           "fugacity");
    const std::int64_t r = block_radius(*ex.lat, eps);
    const auto n = static_cast<std::size_t>(ex.lat->n_sites());
    const auto m = sample_times.size();

    struct row_t {
        double sup;
        std::vector<double> site_avg;
    };
    const auto rows = parallel_map<row_t>(
        plan.R, plan.workers, [&](std::size_t i) {
            auto sim = make_replica(ex, rng(plan.master_seed, i));
            row_t row{0.0, std::vector<double>(n, 0.0)};
            for (double t : sample_times) {
                sim.run_until(t, {}, plan.event_budget);
                const auto field =
                    rate_block_field(sim.config(), ex.profile->spec(), r);
                for (std::size_t x = 0; x < n; ++x) {
                    row.site_avg[x] += field[x];
                    row.sup = std::max(row.sup, field[x]);
                }
            }
            for (auto& v : row.site_avg) v /= double(m);
            return row;
        });

    jump_rate_bound_result res;
    res.phi_c = ex.profile->phi_c();
    res.site_mean.assign(n, 0.0);
    res.site_se.assign(n, 0.0);
    std::vector<double> sups(plan.R);
    for (std::size_t i = 0; i < plan.R; ++i) {
        sups[i] = rows[i].sup;
        for (std::size_t x = 0; x < n; ++x)
            res.site_mean[x] += rows[i].site_avg[x];
    }
    for (auto& v : res.site_mean) v /= double(plan.R);
    if (plan.R >= 2) {
        for (std::size_t x = 0; x < n; ++x) {
            double ss = 0.0;
            for (std::size_t i = 0; i < plan.R; ++i) {
                const double d = rows[i].site_avg[x] - res.site_mean[x];
                ss += d * d;
            }
            res.site_se[x] =
                std::sqrt(ss / double(plan.R - 1) / double(plan.R));
        }
    }
    for (std::size_t x = 0; x < n; ++x)
        if (res.site_mean[x] > res.phi_c + 3.0 * res.site_se[x])
            ++res.sites_above_band;
    res.sup_stat = summarize(std::move(sups), stream_ids(plan.R));
    return res;
}

double_block_result double_block_stat(const experiment& ex, std::int64_t ell,
                                      double eps, double M, double A,
                                      const replica_plan& plan) {
    check_experiment(ex);
    if (ell < 0 || 2 * ell + 1 > ex.lat->N())
        throw config_error("block radius does not fit the lattice");
    if (!(M > 0.0)) throw config_error("truncation level M must be positive");
    if (!(A >= 0.0)) throw config_error("cut-off level A must be >= 0");
    const std::int64_t r2 = block_radius(*ex.lat, eps);
    const lattice& lat = *ex.lat;
    const auto n = static_cast<std::size_t>(lat.n_sites());
    const double w1 = double(window_size(lat, ell));
    const double w2 = double(window_size(lat, r2));
    const double inv_vol = 1.0 / double(n);

    struct accum final : time_observer {
        const lattice& lat;
        std::int64_t ell, r2;
        double w1, w2, M, A, inv_vol;
        double acc1 = 0.0, acc2 = 0.0;
        accum(const lattice& l, std::int64_t e, std::int64_t r, double a1,
              double a2, double m, double a, double iv)
            : lat(l), ell(e), r2(r), w1(a1), w2(a2), M(m), A(a), inv_vol(iv) {}
        void interval(const configuration& c, double t0, double t1) override {
            const auto ws = window_sums(lat, c.occ(), ell);
            const auto ncell = ws.size();
            std::vector<double> blk(ncell), excess(ncell);
            double d2 = 0.0;
            for (std::size_t x = 0; x < ncell; ++x) {
                blk[x] = double(ws[x]) / w1;
                excess[x] = blk[x] > M ? blk[x] - M : 0.0;
                if (blk[x] > A) d2 += std::min(blk[x], M);
            }
            const auto exc_sums = window_sums(lat, excess, r2);
            const auto blk_sums = window_sums(lat, blk, r2);
            double d1 = 0.0;
            for (std::size_t x = 0; x < ncell; ++x)
                if (blk_sums[x] / w2 <= M) d1 += exc_sums[x] / w2;
            const double dt = t1 - t0;
            acc1 += d1 * inv_vol * dt;
            acc2 += d2 * inv_vol * dt;
        }
    };

    struct pair_t {
        double e1, e2;
    };
    const auto rows = parallel_map<pair_t>(
        plan.R, plan.workers, [&](std::size_t i) {
            auto sim = make_replica(ex, rng(plan.master_seed, i));
            accum obs(lat, ell, r2, w1, w2, M, A, inv_vol);
            time_observer* list[] = {&obs};
            sim.run_until(ex.T, list, plan.event_budget);
            return pair_t{obs.acc1, obs.acc2};
        });
    std::vector<double> e1(plan.R), e2(plan.R);
    for (std::size_t i = 0; i < plan.R; ++i) {
        e1[i] = rows[i].e1;
        e2[i] = rows[i].e2;
    }
    double_block_result res;
    res.truncated_excess = summarize(std::move(e1), stream_ids(plan.R));
    res.cutoff_mass = summarize(std::move(e2), stream_ids(plan.R));
    return res;
}

energy_result energy_stat(const experiment& ex, double eps,
                          const std::vector<double>& sample_times,
                          const replica_plan& plan) {
    check_experiment(ex);
    check_sample_times(sample_times, ex.T);
    if (ex.lat->d() != 1)
        throw config_error("the energy diagnostic is implemented on the "
                           "one-dimensional torus");
    const std::int64_t r = block_radius(*ex.lat, eps);
    const auto n = static_cast<std::size_t>(ex.lat->n_sites());
    const double N = double(ex.lat->N());
    const double inv_vol = 1.0 / double(n);
    constexpr double kPi = 3.14159265358979323846;

    // fixed dictionary: sin(2 pi k u) for k = 1..3 and cos(2 pi k u) for
    // k = 1..2, each at amplitudes {0.25, 0.5, 1, 2} -- 20 fields total,
    // evaluated with analytic derivatives (a documented lower bound for the
    // variational supremum)
    struct field {
        int k;
        bool is_sin;
        double amp;
    };
    std::vector<field> dict;
    for (int k = 1; k <= 3; ++k)
        for (double amp : {0.25, 0.5, 1.0, 2.0}) dict.push_back({k, true, amp});
    for (int k = 1; k <= 2; ++k)
        for (double amp : {0.25, 0.5, 1.0, 2.0}) dict.push_back({k, false, amp});

    struct pair_t {
        double k0, grad;
    };
    const auto rows = parallel_map<pair_t>(
        plan.R, plan.workers, [&](std::size_t i) {
            auto sim = make_replica(ex, rng(plan.master_seed, i));
            const auto m = sample_times.size();
            std::vector<double> per_field(dict.size(), 0.0), prev_field,
                grad_vals(m, 0.0);
            std::vector<double> cur(dict.size());
            for (std::size_t k = 0; k < m; ++k) {
                sim.run_until(sample_times[k], {}, plan.event_budget);
                const auto s =
                    rate_block_field(sim.config(), ex.profile->spec(), r);
                for (std::size_t f = 0; f < dict.size(); ++f) {
                    const auto& d = dict[f];
                    double v = 0.0;
                    for (std::size_t x = 0; x < n; ++x) {
                        const double u = double(x) / N;
                        const double w = 2.0 * kPi * double(d.k);
                        const double H = d.amp * (d.is_sin ? std::sin(w * u)
                                                           : std::cos(w * u));
                        const double Hp =
                            d.amp * w *
                            (d.is_sin ? std::cos(w * u) : -std::sin(w * u));
                        v += (Hp - 2.0 * H * H) * s[x];
                    }
                    cur[f] = v * inv_vol;
                }
                double ge = 0.0;
                for (std::size_t x = 0; x < n; ++x) {
                    if (s[x] < 1e-12) continue;
                    const double ds = s[(x + 1) % n] - s[x];
                    ge += ds * ds * N / s[x];
                }
                grad_vals[k] = ge;
                if (k > 0) {
                    const double dt = sample_times[k] - sample_times[k - 1];
                    for (std::size_t f = 0; f < dict.size(); ++f)
                        per_field[f] += 0.5 * (prev_field[f] + cur[f]) * dt;
                }
                prev_field = cur;
            }
            double k0 = -std::numeric_limits<double>::infinity();
            for (double v : per_field) k0 = std::max(k0, v);
            double grad_int = 0.0;
            for (std::size_t k = 1; k < m; ++k)
                grad_int += 0.5 * (grad_vals[k - 1] + grad_vals[k]) *
                            (sample_times[k] - sample_times[k - 1]);
            if (m == 1) {
                // single snapshot: report instantaneous values
                k0 = -std::numeric_limits<double>::infinity();
                for (double v : cur) k0 = std::max(k0, v);
                grad_int = grad_vals[0];
            }
            return pair_t{k0, grad_int};
        });
    std::vector<double> k0(plan.R), ge(plan.R);
    for (std::size_t i = 0; i < plan.R; ++i) {
        k0[i] = rows[i].k0;
        ge[i] = rows[i].grad;
    }
    energy_result res;
    res.k0_lower = summarize(std::move(k0), stream_ids(plan.R));
    res.grad_energy = summarize(std::move(ge), stream_ids(plan.R));
    return res;
}

hydro_result mean_density_at_time(const experiment& ex,
                                  const std::vector<space_function>& tests,
                                  const replica_plan& plan) {
    check_experiment(ex);
    const auto fields = parallel_map<empirical_fields>(
        plan.R, plan.workers, [&](std::size_t i) {
            auto sim = make_replica(ex, rng(plan.master_seed, i));
            sim.run_until(ex.T, {}, plan.event_budget);
            return extract_fields(sim.config(), ex.T);
        });
    hydro_result res;
    res.mean_fields = fields[0];
    for (std::size_t i = 1; i < plan.R; ++i) {
        for (std::size_t x = 0; x < res.mean_fields.density.size(); ++x) {
            res.mean_fields.density[x] += fields[i].density[x];
            res.mean_fields.jump_rate[x] += fields[i].jump_rate[x];
        }
        for (std::size_t b = 0; b < res.mean_fields.current.size(); ++b)
            res.mean_fields.current[b] += fields[i].current[b];
    }
    const double inv_r = 1.0 / double(plan.R);
    for (auto& v : res.mean_fields.density) v *= inv_r;
    for (auto& v : res.mean_fields.jump_rate) v *= inv_r;
    for (auto& v : res.mean_fields.current) v *= inv_r;
    res.pairings.reserve(tests.size());
    for (const auto& f : tests)
        res.pairings.push_back(pair_density(res.mean_fields, f));
    return res;
}

}  // namespace zrl
