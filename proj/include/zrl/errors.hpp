// Error types shared across the library.  Each maps to a process exit code
// in the CLI front end (see tools/zrlab_main.cpp).
#pragma once

#include <stdexcept>
#include <string>

namespace zrl {

// invalid or inconsistent configuration / usage (exit code 2)
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// a power series was detected non-summable where a value was required (exit 3)
struct series_divergence : std::runtime_error {
    explicit series_divergence(const std::string& msg) : std::runtime_error(msg) {}
};

// critical-fugacity extrapolants disagree beyond tolerance
struct unstable_extrapolation : std::runtime_error {
    explicit unstable_extrapolation(const std::string& msg) : std::runtime_error(msg) {}
};

// event cap reached while advancing a trajectory (exit 4)
struct event_budget_exceeded : std::runtime_error {
    explicit event_budget_exceeded(const std::string& msg) : std::runtime_error(msg) {}
};

// an assertion-mode statistical check failed (exit 5)
struct check_failure : std::runtime_error {
    explicit check_failure(const std::string& msg) : std::runtime_error(msg) {}
};

// requested table size exceeds a documented capacity cap
struct capacity_error : config_error {
    explicit capacity_error(const std::string& msg) : config_error(msg) {}
};

// product-profile sampling requested above the critical density
struct supercritical_profile : config_error {
    explicit supercritical_profile(const std::string& msg) : config_error(msg) {}
};

// pairing against a measure with singular mass needs a recession function
struct missing_recession : config_error {
    explicit missing_recession(const std::string& msg) : config_error(msg) {}
};

}  // namespace zrl
