// AVX2 kernel variants (4-wide double lanes).  Compiled with -mavx2 -mfma
// only on x86-64; dispatched at runtime, never called on CPUs without AVX2.
//
// table_interp_map and the laplacian updates perform the exact same IEEE
// operation sequence per element as the scalar backend (explicit mul/add
// intrinsics, true division for the bin index), so their outputs are
// bit-identical to scalar.  The reductions reassociate (4 lanes) and agree
// with scalar only up to roundoff; dot additionally uses FMA.
#include <immintrin.h>

#include <algorithm>
#include <cstddef>

#include "zrl/kernels.hpp"

namespace zrl::kernels {
namespace {

double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double sum_avx2(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double s = hsum(acc);
    for (; i < n; ++i) s += x[i];
    return s;
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
    double s = hsum(acc);
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

double max_avx2(const double* x, std::size_t n) {
    if (n < 4) {
        double m = x[0];
        for (std::size_t i = 1; i < n; ++i) m = std::max(m, x[i]);
        return m;
    }
    __m256d acc = _mm256_loadu_pd(x);
    std::size_t i = 4;
    for (; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, _mm256_loadu_pd(x + i));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double m = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
    for (; i < n; ++i) m = std::max(m, x[i]);
    return m;
}

void table_interp_map_avx2(const double* x, double* out, std::size_t n,
                           const double* tab, std::size_t tab_n, double drho) {
    const double hi = drho * static_cast<double>(tab_n - 1);
    const __m256d vlo = _mm256_setzero_pd();
    const __m256d vhi = _mm256_set1_pd(hi);
    const __m256d vdrho = _mm256_set1_pd(drho);
    const __m128i vjmax = _mm_set1_epi32(static_cast<int>(tab_n - 2));
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d r =
            _mm256_min_pd(_mm256_max_pd(_mm256_loadu_pd(x + i), vlo), vhi);
        // j = min(trunc(r/drho), tab_n-2); truncation matches the scalar cast
        __m128i j = _mm256_cvttpd_epi32(_mm256_div_pd(r, vdrho));
        j = _mm_min_epi32(j, vjmax);
        const __m256d jd = _mm256_cvtepi32_pd(j);
        const __m256d w = _mm256_div_pd(
            _mm256_sub_pd(r, _mm256_mul_pd(jd, vdrho)), vdrho);
        const __m256d t0 = _mm256_i32gather_pd(tab, j, 8);
        const __m256d t1 = _mm256_i32gather_pd(tab + 1, j, 8);
        _mm256_storeu_pd(
            out + i,
            _mm256_add_pd(t0, _mm256_mul_pd(w, _mm256_sub_pd(t1, t0))));
    }
    if (i < n)
        scalar_backend().table_interp_map(x + i, out + i, n - i, tab, tab_n,
                                          drho);
}

void lap_update_1d_avx2(double* rho, const double* phi, std::size_t n,
                        double c) {
    if (n < 8) {
        scalar_backend().laplacian_flux_update_1d(rho, phi, n, c);
        return;
    }
    const __m256d vc = _mm256_set1_pd(c);
    std::size_t i = 1;
    for (; i + 4 <= n - 1; i += 4) {
        const __m256d centre = _mm256_loadu_pd(phi + i);
        const __m256d left = _mm256_loadu_pd(phi + i - 1);
        const __m256d right = _mm256_loadu_pd(phi + i + 1);
        const __m256d lap = _mm256_sub_pd(_mm256_sub_pd(right, centre),
                                          _mm256_sub_pd(centre, left));
        _mm256_storeu_pd(rho + i, _mm256_add_pd(_mm256_loadu_pd(rho + i),
                                                _mm256_mul_pd(vc, lap)));
    }
    for (; i < n - 1; ++i)
        rho[i] += c * ((phi[i + 1] - phi[i]) - (phi[i] - phi[i - 1]));
    rho[0] += c * ((phi[1] - phi[0]) - (phi[0] - phi[n - 1]));
    rho[n - 1] += c * ((phi[0] - phi[n - 1]) - (phi[n - 1] - phi[n - 2]));
}

void lap_update_2d_avx2(double* rho, const double* phi, std::size_t nx,
                        double c) {
    if (nx < 8) {
        scalar_backend().laplacian_flux_update_2d(rho, phi, nx, c);
        return;
    }
    const __m256d vc = _mm256_set1_pd(c);
    for (std::size_t i = 0; i < nx; ++i) {
        const double* up = phi + (i == 0 ? nx - 1 : i - 1) * nx;
        const double* dn = phi + (i + 1 == nx ? 0 : i + 1) * nx;
        const double* row = phi + i * nx;
        double* out = rho + i * nx;
        std::size_t j = 1;
        for (; j + 4 <= nx - 1; j += 4) {
            const __m256d centre = _mm256_loadu_pd(row + j);
            const __m256d horiz = _mm256_sub_pd(
                _mm256_sub_pd(_mm256_loadu_pd(row + j + 1), centre),
                _mm256_sub_pd(centre, _mm256_loadu_pd(row + j - 1)));
            const __m256d vert =
                _mm256_sub_pd(_mm256_sub_pd(_mm256_loadu_pd(dn + j), centre),
                              _mm256_sub_pd(centre, _mm256_loadu_pd(up + j)));
            _mm256_storeu_pd(
                out + j,
                _mm256_add_pd(_mm256_loadu_pd(out + j),
                              _mm256_mul_pd(vc, _mm256_add_pd(horiz, vert))));
        }
        for (; j < nx - 1; ++j) {
            out[j] += c * (((row[j + 1] - row[j]) - (row[j] - row[j - 1])) +
                           ((dn[j] - row[j]) - (row[j] - up[j])));
        }
        for (std::size_t jj : {std::size_t{0}, nx - 1}) {
            const std::size_t jl = jj == 0 ? nx - 1 : jj - 1;
            const std::size_t jr = jj + 1 == nx ? 0 : jj + 1;
            out[jj] += c * (((row[jr] - row[jj]) - (row[jj] - row[jl])) +
                            ((dn[jj] - row[jj]) - (row[jj] - up[jj])));
        }
    }
}

}  // namespace

const backend& avx2_backend() {
    static const backend k = {"avx2",
                              sum_avx2,
                              dot_avx2,
                              max_avx2,
                              table_interp_map_avx2,
                              lap_update_1d_avx2,
                              lap_update_2d_avx2};
    return k;
}

}  // namespace zrl::kernels
