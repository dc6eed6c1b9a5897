// Scalar reference kernels.  These definitions are the semantics; the SIMD
// variants must agree with them within tests/test_kernels.cpp tolerances.
#include <algorithm>
#include <cstddef>

#include "zrl/kernels.hpp"

namespace zrl::kernels {
namespace {

double sum_scalar(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

double max_scalar(const double* x, std::size_t n) {
    double m = x[0];
    for (std::size_t i = 1; i < n; ++i) m = std::max(m, x[i]);
    return m;
}

void table_interp_map_scalar(const double* x, double* out, std::size_t n,
                             const double* tab, std::size_t tab_n, double drho) {
    const double hi = drho * static_cast<double>(tab_n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        double r = std::clamp(x[i], 0.0, hi);
        std::size_t j = std::min(static_cast<std::size_t>(r / drho), tab_n - 2);
        const double w = (r - static_cast<double>(j) * drho) / drho;
        out[i] = tab[j] + w * (tab[j + 1] - tab[j]);
    }
}

void lap_update_1d_scalar(double* rho, const double* phi, std::size_t n,
                          double c) {
    const double first = phi[0], last = phi[n - 1];
    double left = last;
    for (std::size_t i = 0; i < n; ++i) {
        const double centre = phi[i];
        const double right = (i + 1 < n) ? phi[i + 1] : first;
        rho[i] += c * ((right - centre) - (centre - left));
        left = centre;
    }
}

void lap_update_2d_scalar(double* rho, const double* phi, std::size_t nx,
                          double c) {
    for (std::size_t i = 0; i < nx; ++i) {
        const std::size_t up = (i == 0 ? nx - 1 : i - 1) * nx;
        const std::size_t dn = (i + 1 == nx ? 0 : i + 1) * nx;
        const std::size_t row = i * nx;
        for (std::size_t j = 0; j < nx; ++j) {
            const std::size_t jl = j == 0 ? nx - 1 : j - 1;
            const std::size_t jr = j + 1 == nx ? 0 : j + 1;
            const double centre = phi[row + j];
            rho[row + j] += c * (((phi[row + jr] - centre) - (centre - phi[row + jl])) +
                                 ((phi[dn + j] - centre) - (centre - phi[up + j])));
        }
    }
}

}  // namespace

const backend& scalar_backend() {
    static const backend k = {"scalar",
                              sum_scalar,
                              dot_scalar,
                              max_scalar,
                              table_interp_map_scalar,
                              lap_update_1d_scalar,
                              lap_update_2d_scalar};
    return k;
}

}  // namespace zrl::kernels
