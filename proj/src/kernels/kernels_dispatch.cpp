#include <cstdlib>
#include <string>

#include "zrl/errors.hpp"
#include "zrl/kernels.hpp"

namespace zrl::kernels {
namespace {

const backend* resolve_auto() {
#if defined(ZRL_WITH_AVX2)
    if (avx2_available()) return &avx2_backend();
#endif
    return &scalar_backend();
}

const backend* initial_backend() {
    if (const char* env = std::getenv("ZRL_KERNELS")) {
        const std::string want(env);
        if (want == "scalar") return &scalar_backend();
        if (want == "auto" || want.empty()) return resolve_auto();
        if (want == "avx2") {
#if defined(ZRL_WITH_AVX2)
            if (avx2_available()) return &avx2_backend();
#endif
            throw config_error("ZRL_KERNELS=avx2 requested but AVX2 is not "
                               "available on this build/CPU");
        }
        throw config_error("unknown ZRL_KERNELS value '" + want +
                           "' (expected scalar, avx2, or auto)");
    }
    return resolve_auto();
}

const backend*& active_slot() {
    static const backend* slot = initial_backend();
    return slot;
}

}  // namespace

bool avx2_available() {
#if defined(ZRL_WITH_AVX2)
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

const backend& active() { return *active_slot(); }

void set_backend(const std::string& name) {
    if (name == "scalar") {
        active_slot() = &scalar_backend();
        return;
    }
    if (name == "auto") {
        active_slot() = resolve_auto();
        return;
    }
    if (name == "avx2") {
#if defined(ZRL_WITH_AVX2)
        if (avx2_available()) {
            active_slot() = &avx2_backend();
            return;
        }
#endif
        throw config_error(
            "kernel backend 'avx2' is not available on this build/CPU");
    }
    throw config_error("unknown kernel backend '" + name +
                       "' (expected scalar, avx2, or auto)");
}

}  // namespace zrl::kernels
