// Data-parallel inner-loop kernels: scalar reference implementations plus an
// AVX2 variant selected at runtime.  Only genuinely vectorizable hot loops
// live here (grid updates, table interpolation, reductions); the event-driven
// simulation core is branchy by nature and stays scalar.
//
// Selection: auto-detect at first use; override with set_backend("scalar") /
// ("avx2") or the ZRL_KERNELS environment variable.  Variants are
// equivalence-tested against each other in tests/test_kernels.cpp.
#pragma once

#include <cstddef>
#include <string>

namespace zrl::kernels {

struct backend {
    const char* name;

    // reductions
    double (*sum)(const double* x, std::size_t n);
    double (*dot)(const double* x, const double* y, std::size_t n);
    double (*max)(const double* x, std::size_t n);  // n >= 1

    // out[i] = linear interpolation of tab (tab_n points, spacing drho,
    // clamped to [0, (tab_n-1)*drho]) at x[i]
    void (*table_interp_map)(const double* x, double* out, std::size_t n,
                             const double* tab, std::size_t tab_n, double drho);

    // periodic flux-form diffusion update, rho[i] += c * Lap(phi)[i]
    void (*laplacian_flux_update_1d)(double* rho, const double* phi,
                                     std::size_t n, double c);
    void (*laplacian_flux_update_2d)(double* rho, const double* phi,
                                     std::size_t nx, double c);
};

const backend& scalar_backend();
#ifdef ZRL_WITH_AVX2
const backend& avx2_backend();
#endif

// active backend (env/auto-selected on first call)
const backend& active();

// force a backend by name ("scalar", "avx2", "auto"); throws config_error on
// an unknown name or an unavailable instruction set
void set_backend(const std::string& name);

// true when the AVX2 variant is compiled in and the CPU supports it
bool avx2_available();

}  // namespace zrl::kernels
