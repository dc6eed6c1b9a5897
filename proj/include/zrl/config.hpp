// Experiment configuration: flat-sectioned INI, strictly validated (unknown
// sections or keys are rejected so typos cannot silently change an
// experiment).  Every run writes the fully resolved configuration next to
// its outputs; re-running that file reproduces the outputs byte for byte.
#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "zrl/ensembles.hpp"
#include "zrl/jump_rate.hpp"
#include "zrl/lattice.hpp"
#include "zrl/thermo.hpp"

namespace zrl {

struct experiment_config {
    // [model]
    std::string family;  // "evans" | "custom"; required by every subcommand
    double b = 0.0;
    std::size_t k_max = jump_rate_spec::default_k_max;
    std::string rates_file;  // custom: CSV (k, rate), constant beyond table

    // [lattice]
    int d = 1;
    std::int64_t N = 64;

    // [initial]
    std::string kind = "product";     // product | canonical | deterministic
    std::string profile = "constant"; // constant | sine | file
    double rho = 0.5;                 // constant level / sine mean
    double amplitude = 0.0;           // sine: rho + amplitude sin(2 pi f u)
    int frequency = 1;
    std::string profile_file;         // CSV (site, rho)
    double condensate_alpha = 0.0;
    std::vector<double> condensate_u = {0.5, 0.5};
    std::int64_t K = 0;               // canonical total
    std::int64_t occupancy = 0;       // deterministic constant
    std::string occupancy_file;       // CSV (site, occupancy)

    // [run]
    double T = 0.1;
    std::size_t replicas = 50;
    std::uint64_t seed = 1;
    std::uint64_t event_budget = 1000000000ull;
    unsigned workers = 0;
    std::vector<double> snapshots;

    // [thermo]
    std::size_t phi_points = 100;
    std::size_t rho_points = 1001;
    double rho_max = 0.0;  // 0 = auto

    // [statistic]
    std::string which;  // one-block | eoe | continuity | qv | jump-bound
                        // | double-block | energy | hydro
    std::int64_t ell = 0;
    double eps = 0.0;
    double M = 5.0;
    double A = 3.0;
    std::string psi = "jump-rate";  // occupancy | jump-rate | indicator:<k>
    std::vector<std::int64_t> Ns;
    std::vector<std::int64_t> ells;
    std::vector<std::size_t> sizes;
    double stat_rho = 0.0;
    std::vector<double> sample_times;
    double eoe_final_max = 0.05;
    double weak_error_max = 0.05;

    // [pde]
    std::size_t G = 256;
    double safety = 0.8;
    std::size_t table_points = 10000;
    double rho_table_max = 0.0;

    // [young]
    bool young_enabled = false;
    std::int64_t young_ell = 0;
    double young_M = 5.0;

    // [output]
    std::string out_dir = "out";

    // keys present in the loaded file, as "section.key"
    std::set<std::string> present;
    bool has(const std::string& section_key) const {
        return present.count(section_key) > 0;
    }
};

// parse + validate; throws config_error on unknown sections/keys or
// malformed values
experiment_config load_config(const std::string& path);
experiment_config parse_config_text(const std::string& text);

// serialize every field back to INI (the resolved-config artifact)
std::string resolved_config_text(const experiment_config& cfg);

// builders used by the CLI and the acceptance harness; each validates the
// fields it consumes (config_error on inconsistency)
jump_rate_spec make_spec(const experiment_config& cfg);
lattice make_lattice(const experiment_config& cfg);
initial_condition make_initial(const experiment_config& cfg,
                               const lattice& lat,
                               const thermo_profile& profile);

}  // namespace zrl
