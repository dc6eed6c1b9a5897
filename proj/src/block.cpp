#include "zrl/block.hpp"

#include <cstdlib>
#include <sstream>

#include "zrl/errors.hpp"

namespace zrl {
namespace {

void require_window(const lattice& lat, std::int64_t ell, const char* what) {
    if (ell < 0) throw config_error("window radius must be >= 0");
    if (2 * ell + 1 > lat.N()) {
        std::ostringstream os;
        os << what << ": window side " << (2 * ell + 1)
           << " exceeds the lattice side " << lat.N();
        throw config_error(os.str());
    }
}

// periodic sliding sums along one line of stride `stride` starting at `base`
template <class T>
void line_window_sums(const T* v, T* out, std::int64_t n, std::int64_t stride,
                      std::int64_t ell) {
    T s{};
    for (std::int64_t y = -ell; y <= ell; ++y)
        s += v[((y + n) % n) * stride];
    out[0] = s;
    for (std::int64_t x = 1; x < n; ++x) {
        s += v[((x + ell) % n) * stride];
        s -= v[((x - 1 - ell + n) % n) * stride];
        out[x * stride] = s;
    }
}

template <class T>
std::vector<T> window_sums_impl(const lattice& lat, const std::vector<T>& v,
                                std::int64_t ell) {
    require_window(lat, ell, "window sums");
    if (static_cast<std::int64_t>(v.size()) != lat.n_sites())
        throw config_error("field length does not match the lattice");
    const std::int64_t n = lat.N();
    if (lat.d() == 1) {
        std::vector<T> out(v.size());
        line_window_sums(v.data(), out.data(), n, 1, ell);
        return out;
    }
    // rows first (axis 1, contiguous), then columns on the row sums
    std::vector<T> rows(v.size()), out(v.size());
    for (std::int64_t i = 0; i < n; ++i)
        line_window_sums(v.data() + i * n, rows.data() + i * n, n, 1, ell);
    for (std::int64_t j = 0; j < n; ++j)
        line_window_sums(rows.data() + j, out.data() + j, n, n, ell);
    return out;
}

}  // namespace

std::vector<std::int64_t> window_sums(const lattice& lat,
                                      const std::vector<std::int64_t>& v,
                                      std::int64_t ell) {
    return window_sums_impl(lat, v, ell);
}

std::vector<double> window_sums(const lattice& lat,
                                const std::vector<double>& v,
                                std::int64_t ell) {
    return window_sums_impl(lat, v, ell);
}

std::int64_t window_size(const lattice& lat, std::int64_t ell) {
    const std::int64_t side = 2 * ell + 1;
    return lat.d() == 1 ? side : side * side;
}

double block_average(const lattice& lat, const std::vector<std::int64_t>& occ,
                     std::int64_t x, std::int64_t ell) {
    require_window(lat, ell, "block average");
    const auto c = lat.coords(x);
    std::int64_t s = 0;
    if (lat.d() == 1) {
        for (std::int64_t y = -ell; y <= ell; ++y)
            s += occ[lat.site_at({c[0] + y, 0})];
    } else {
        for (std::int64_t y0 = -ell; y0 <= ell; ++y0)
            for (std::int64_t y1 = -ell; y1 <= ell; ++y1)
                s += occ[lat.site_at({c[0] + y0, c[1] + y1})];
    }
    return static_cast<double>(s) / static_cast<double>(window_size(lat, ell));
}

double double_block_average(const lattice& lat,
                            const std::vector<std::int64_t>& occ,
                            std::int64_t x, std::int64_t ell, std::int64_t L) {
    require_window(lat, L, "double block average");
    const auto c = lat.coords(x);
    double s = 0.0;
    if (lat.d() == 1) {
        for (std::int64_t z = -L; z <= L; ++z)
            s += block_average(lat, occ, lat.site_at({c[0] + z, 0}), ell);
    } else {
        for (std::int64_t z0 = -L; z0 <= L; ++z0)
            for (std::int64_t z1 = -L; z1 <= L; ++z1)
                s += block_average(lat, occ, lat.site_at({c[0] + z0, c[1] + z1}),
                                   ell);
    }
    return s / static_cast<double>(window_size(lat, L));
}

double consecutive_average_majorant(const lattice& lat,
                                    const std::vector<std::int64_t>& occ,
                                    std::int64_t x, std::int64_t ell,
                                    std::int64_t L) {
    if (ell < 0 || L < ell)
        throw config_error("annulus needs 0 <= ell <= L");
    require_window(lat, L + ell, "consecutive-average majorant");
    const auto c = lat.coords(x);
    std::int64_t s = 0;
    auto in_annulus = [&](std::int64_t z0, std::int64_t z1) {
        const std::int64_t a = std::abs(z0) > std::abs(z1) ? std::abs(z0)
                                                           : std::abs(z1);
        return a > L - ell && a <= L + ell;
    };
    if (lat.d() == 1) {
        for (std::int64_t z = -(L + ell); z <= L + ell; ++z)
            if (in_annulus(z, 0)) s += occ[lat.site_at({c[0] + z, 0})];
    } else {
        for (std::int64_t z0 = -(L + ell); z0 <= L + ell; ++z0)
            for (std::int64_t z1 = -(L + ell); z1 <= L + ell; ++z1)
                if (in_annulus(z0, z1))
                    s += occ[lat.site_at({c[0] + z0, c[1] + z1})];
    }
    return static_cast<double>(s) / static_cast<double>(window_size(lat, L));
}

}  // namespace zrl
