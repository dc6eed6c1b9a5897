#include "zrl/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "zrl/errors.hpp"
#include "zrl/io.hpp"

namespace zrl {

namespace {

// section -> allowed keys; the single source of truth for strict validation
const std::map<std::string, std::vector<std::string>>& schema() {
    static const std::map<std::string, std::vector<std::string>> s = {
        {"model", {"family", "b", "k_max", "rates_file"}},
        {"lattice", {"d", "N"}},
        {"initial",
         {"kind", "profile", "rho", "amplitude", "frequency", "profile_file",
          "condensate_alpha", "condensate_u", "K", "occupancy",
          "occupancy_file"}},
        {"run",
         {"T", "replicas", "seed", "event_budget", "workers", "snapshots"}},
        {"thermo", {"phi_points", "rho_points", "rho_max"}},
        {"statistic",
         {"which", "ell", "eps", "M", "A", "psi", "Ns", "ells", "sizes", "rho",
          "sample_times", "eoe_final_max", "weak_error_max"}},
        {"pde", {"G", "safety", "table_points", "rho_max"}},
        {"young", {"enabled", "ell", "M"}},
        {"output", {"dir"}},
    };
    return s;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    throw config_error(where + ": " + what);
}

double to_double(const std::string& where, const std::string& v) {
    double out;
    const char* first = v.data();
    const char* last = v.data() + v.size();
    auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc() || res.ptr != last)
        bad(where, "not a real number: '" + v + "'");
    return out;
}

std::int64_t to_int64(const std::string& where, const std::string& v) {
    std::int64_t out;
    const char* first = v.data();
    const char* last = v.data() + v.size();
    auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc() || res.ptr != last)
        bad(where, "not an integer: '" + v + "'");
    return out;
}

std::uint64_t to_uint64(const std::string& where, const std::string& v) {
    std::uint64_t out;
    const char* first = v.data();
    const char* last = v.data() + v.size();
    auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc() || res.ptr != last)
        bad(where, "not a non-negative integer: '" + v + "'");
    return out;
}

std::size_t to_size(const std::string& where, const std::string& v) {
    return static_cast<std::size_t>(to_uint64(where, v));
}

int to_int(const std::string& where, const std::string& v) {
    std::int64_t x = to_int64(where, v);
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
        bad(where, "out of int range: '" + v + "'");
    return static_cast<int>(x);
}

bool to_bool(const std::string& where, const std::string& v) {
    if (v == "true") return true;
    if (v == "false") return false;
    bad(where, "not a boolean (true|false): '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : v) {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!cur.empty()) parts.push_back(std::move(cur)), cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) parts.push_back(std::move(cur));
    return parts;
}

std::vector<double> to_doubles(const std::string& where, const std::string& v) {
    std::vector<double> out;
    for (const auto& p : split_list(v)) out.push_back(to_double(where, p));
    return out;
}

std::vector<std::int64_t> to_int64s(const std::string& where,
                                    const std::string& v) {
    std::vector<std::int64_t> out;
    for (const auto& p : split_list(v)) out.push_back(to_int64(where, p));
    return out;
}

std::vector<std::size_t> to_sizes(const std::string& where,
                                  const std::string& v) {
    std::vector<std::size_t> out;
    for (const auto& p : split_list(v)) out.push_back(to_size(where, p));
    return out;
}

void assign(experiment_config& cfg, const std::string& section,
            const std::string& key, const std::string& value) {
    const std::string where = section + "." + key;
    if (section == "model") {
        if (key == "family") cfg.family = value;
        else if (key == "b") cfg.b = to_double(where, value);
        else if (key == "k_max") cfg.k_max = to_size(where, value);
        else cfg.rates_file = value;
    } else if (section == "lattice") {
        if (key == "d") cfg.d = to_int(where, value);
        else cfg.N = to_int64(where, value);
    } else if (section == "initial") {
        if (key == "kind") cfg.kind = value;
        else if (key == "profile") cfg.profile = value;
        else if (key == "rho") cfg.rho = to_double(where, value);
        else if (key == "amplitude") cfg.amplitude = to_double(where, value);
        else if (key == "frequency") cfg.frequency = to_int(where, value);
        else if (key == "profile_file") cfg.profile_file = value;
        else if (key == "condensate_alpha")
            cfg.condensate_alpha = to_double(where, value);
        else if (key == "condensate_u") cfg.condensate_u = to_doubles(where, value);
        else if (key == "K") cfg.K = to_int64(where, value);
        else if (key == "occupancy") cfg.occupancy = to_int64(where, value);
        else cfg.occupancy_file = value;
    } else if (section == "run") {
        if (key == "T") cfg.T = to_double(where, value);
        else if (key == "replicas") cfg.replicas = to_size(where, value);
        else if (key == "seed") cfg.seed = to_uint64(where, value);
        else if (key == "event_budget") cfg.event_budget = to_uint64(where, value);
        else if (key == "workers")
            cfg.workers = static_cast<unsigned>(to_uint64(where, value));
        else cfg.snapshots = to_doubles(where, value);
    } else if (section == "thermo") {
        if (key == "phi_points") cfg.phi_points = to_size(where, value);
        else if (key == "rho_points") cfg.rho_points = to_size(where, value);
        else cfg.rho_max = to_double(where, value);
    } else if (section == "statistic") {
        if (key == "which") cfg.which = value;
        else if (key == "ell") cfg.ell = to_int64(where, value);
        else if (key == "eps") cfg.eps = to_double(where, value);
        else if (key == "M") cfg.M = to_double(where, value);
        else if (key == "A") cfg.A = to_double(where, value);
        else if (key == "psi") cfg.psi = value;
        else if (key == "Ns") cfg.Ns = to_int64s(where, value);
        else if (key == "ells") cfg.ells = to_int64s(where, value);
        else if (key == "sizes") cfg.sizes = to_sizes(where, value);
        else if (key == "rho") cfg.stat_rho = to_double(where, value);
        else if (key == "sample_times") cfg.sample_times = to_doubles(where, value);
        else if (key == "eoe_final_max")
            cfg.eoe_final_max = to_double(where, value);
        else cfg.weak_error_max = to_double(where, value);
    } else if (section == "pde") {
        if (key == "G") cfg.G = to_size(where, value);
        else if (key == "safety") cfg.safety = to_double(where, value);
        else if (key == "table_points") cfg.table_points = to_size(where, value);
        else cfg.rho_table_max = to_double(where, value);
    } else if (section == "young") {
        if (key == "enabled") cfg.young_enabled = to_bool(where, value);
        else if (key == "ell") cfg.young_ell = to_int64(where, value);
        else cfg.young_M = to_double(where, value);
    } else {  // output
        cfg.out_dir = value;
    }
}

}  // namespace

experiment_config parse_config_text(const std::string& text) {
    experiment_config cfg;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string where = "line " + std::to_string(line_no);
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') bad(where, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (schema().find(section) == schema().end())
                bad(where, "unknown section [" + section + "]");
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            bad(where, "expected key = value, got '" + line + "'");
        if (section.empty()) bad(where, "key before any [section]");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto& keys = schema().at(section);
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            bad(where, "unknown key '" + key + "' in section [" + section + "]");
        const std::string section_key = section + "." + key;
        if (cfg.present.count(section_key))
            bad(where, "duplicate key " + section_key);
        cfg.present.insert(section_key);
        assign(cfg, section, key, value);
    }
    return cfg;
}

experiment_config load_config(const std::string& path) {
    return parse_config_text(read_text_file(path));
}

std::string resolved_config_text(const experiment_config& cfg) {
    std::ostringstream out;
    auto num = [](double x) { return format_double(x); };
    auto list_d = [&](const std::vector<double>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i)
            s += (i ? " " : "") + num(v[i]);
        return s;
    };
    auto list_i = [](const auto& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i)
            s += (i ? " " : "") + std::to_string(v[i]);
        return s;
    };
    out << "[model]\n"
        << "family = " << cfg.family << "\n"
        << "b = " << num(cfg.b) << "\n"
        << "k_max = " << cfg.k_max << "\n"
        << "rates_file = " << cfg.rates_file << "\n\n";
    out << "[lattice]\n"
        << "d = " << cfg.d << "\n"
        << "N = " << cfg.N << "\n\n";
    out << "[initial]\n"
        << "kind = " << cfg.kind << "\n"
        << "profile = " << cfg.profile << "\n"
        << "rho = " << num(cfg.rho) << "\n"
        << "amplitude = " << num(cfg.amplitude) << "\n"
        << "frequency = " << cfg.frequency << "\n"
        << "profile_file = " << cfg.profile_file << "\n"
        << "condensate_alpha = " << num(cfg.condensate_alpha) << "\n"
        << "condensate_u = " << list_d(cfg.condensate_u) << "\n"
        << "K = " << cfg.K << "\n"
        << "occupancy = " << cfg.occupancy << "\n"
        << "occupancy_file = " << cfg.occupancy_file << "\n\n";
    out << "[run]\n"
        << "T = " << num(cfg.T) << "\n"
        << "replicas = " << cfg.replicas << "\n"
        << "seed = " << cfg.seed << "\n"
        << "event_budget = " << cfg.event_budget << "\n"
        << "workers = " << cfg.workers << "\n"
        << "snapshots = " << list_d(cfg.snapshots) << "\n\n";
    out << "[thermo]\n"
        << "phi_points = " << cfg.phi_points << "\n"
        << "rho_points = " << cfg.rho_points << "\n"
        << "rho_max = " << num(cfg.rho_max) << "\n\n";
    out << "[statistic]\n"
        << "which = " << cfg.which << "\n"
        << "ell = " << cfg.ell << "\n"
        << "eps = " << num(cfg.eps) << "\n"
        << "M = " << num(cfg.M) << "\n"
        << "A = " << num(cfg.A) << "\n"
        << "psi = " << cfg.psi << "\n"
        << "Ns = " << list_i(cfg.Ns) << "\n"
        << "ells = " << list_i(cfg.ells) << "\n"
        << "sizes = " << list_i(cfg.sizes) << "\n"
        << "rho = " << num(cfg.stat_rho) << "\n"
        << "sample_times = " << list_d(cfg.sample_times) << "\n"
        << "eoe_final_max = " << num(cfg.eoe_final_max) << "\n"
        << "weak_error_max = " << num(cfg.weak_error_max) << "\n\n";
    out << "[pde]\n"
        << "G = " << cfg.G << "\n"
        << "safety = " << num(cfg.safety) << "\n"
        << "table_points = " << cfg.table_points << "\n"
        << "rho_max = " << num(cfg.rho_table_max) << "\n\n";
    out << "[young]\n"
        << "enabled = " << (cfg.young_enabled ? "true" : "false") << "\n"
        << "ell = " << cfg.young_ell << "\n"
        << "M = " << num(cfg.young_M) << "\n\n";
    out << "[output]\n"
        << "dir = " << cfg.out_dir << "\n";
    return out.str();
}

jump_rate_spec make_spec(const experiment_config& cfg) {
    if (cfg.family == "evans") {
        if (!(std::isfinite(cfg.b) && cfg.b >= 0.0))
            throw config_error("model.b must be finite and >= 0, got " +
                               format_double(cfg.b));
        return jump_rate_spec::evans(cfg.b, cfg.k_max);
    }
    if (cfg.family == "custom") {
        if (cfg.rates_file.empty())
            throw config_error("model.rates_file is required for family=custom");
        const csv_table t = read_csv(cfg.rates_file);
        if (t.columns != std::vector<std::string>{"k", "rate"})
            throw config_error(cfg.rates_file +
                               ": expected header 'k,rate' for a rate table");
        std::vector<double> rate(t.rows.size(),
                                 std::numeric_limits<double>::quiet_NaN());
        for (const auto& row : t.rows) {
            const std::int64_t k = to_int64(cfg.rates_file + " column k", row[0]);
            if (k < 0 || std::size_t(k) >= rate.size())
                throw config_error(cfg.rates_file + ": k values must cover 0.." +
                                   std::to_string(rate.size() - 1) +
                                   " exactly once, got " + row[0]);
            rate[std::size_t(k)] = to_double(cfg.rates_file + " column rate",
                                             row[1]);
        }
        for (std::size_t k = 0; k < rate.size(); ++k) {
            if (std::isnan(rate[k]))
                throw config_error(cfg.rates_file + ": missing rate for k=" +
                                   std::to_string(k));
            if (k == 0 && rate[k] != 0.0)
                throw config_error(cfg.rates_file + ": rate at k=0 must be 0");
            if (k > 0 && !(rate[k] > 0.0 && std::isfinite(rate[k])))
                throw config_error(cfg.rates_file +
                                   ": rates must be finite and > 0 for k >= 1");
        }
        if (rate.size() < 2)
            throw config_error(cfg.rates_file + ": need rates for k >= 1");
        // constant continuation beyond the tabulated range
        return jump_rate_spec::custom(
            [rate](std::size_t k) {
                return k < rate.size() ? rate[k] : rate.back();
            },
            cfg.k_max);
    }
    if (cfg.family.empty())
        throw config_error("model.family is required (evans|custom)");
    throw config_error("unknown model.family '" + cfg.family +
                       "' (expected evans|custom)");
}

lattice make_lattice(const experiment_config& cfg) {
    if (cfg.d != 1 && cfg.d != 2)
        throw config_error("lattice.d must be 1 or 2, got " +
                           std::to_string(cfg.d));
    if (cfg.N < 2)
        throw config_error("lattice.N must be >= 2, got " +
                           std::to_string(cfg.N));
    return lattice(cfg.d, cfg.N);
}

namespace {

// read a per-site CSV column, requiring every site index exactly once
template <class T, class Convert>
std::vector<T> per_site_column(const std::string& path,
                               const std::vector<std::string>& header,
                               std::int64_t n_sites, Convert convert) {
    const csv_table t = read_csv(path);
    if (t.columns != header)
        throw config_error(path + ": expected header '" + header[0] + "," +
                           header[1] + "'");
    if (t.rows.size() != std::size_t(n_sites))
        throw config_error(path + ": expected " + std::to_string(n_sites) +
                           " rows (one per site), got " +
                           std::to_string(t.rows.size()));
    std::vector<T> out(static_cast<std::size_t>(n_sites));
    std::vector<bool> seen(static_cast<std::size_t>(n_sites), false);
    for (const auto& row : t.rows) {
        const std::int64_t site = to_int64(path + " column site", row[0]);
        if (site < 0 || site >= n_sites)
            throw config_error(path + ": site index out of range: " + row[0]);
        if (seen[std::size_t(site)])
            throw config_error(path + ": duplicate site index " + row[0]);
        seen[std::size_t(site)] = true;
        out[std::size_t(site)] = convert(path, row[1]);
    }
    return out;
}

}  // namespace

initial_condition make_initial(const experiment_config& cfg, const lattice& lat,
                               const thermo_profile& profile) {
    (void)profile;  // density feasibility is checked by the samplers
    initial_condition ic;
    const std::int64_t n = lat.n_sites();
    if (cfg.kind == "product") {
        ic.family = initial_condition::kind::product_profile;
        if (cfg.profile == "constant") {
            ic.rho0.assign(std::size_t(n), cfg.rho);
        } else if (cfg.profile == "sine") {
            ic.rho0.resize(std::size_t(n));
            for (std::int64_t x = 0; x < n; ++x) {
                const double u = lat.position(x)[0];
                ic.rho0[std::size_t(x)] =
                    cfg.rho + cfg.amplitude *
                                  std::sin(2.0 * 3.14159265358979323846 *
                                           cfg.frequency * u);
            }
        } else if (cfg.profile == "file") {
            if (cfg.profile_file.empty())
                throw config_error(
                    "initial.profile_file is required for profile=file");
            ic.rho0 = per_site_column<double>(
                cfg.profile_file, {"site", "rho"}, n,
                [](const std::string& p, const std::string& v) {
                    return to_double(p + " column rho", v);
                });
        } else {
            throw config_error("unknown initial.profile '" + cfg.profile +
                               "' (expected constant|sine|file)");
        }
        for (double r : ic.rho0)
            if (!(std::isfinite(r) && r >= 0.0))
                throw config_error(
                    "initial profile must be finite and >= 0 everywhere");
        if (!(std::isfinite(cfg.condensate_alpha) && cfg.condensate_alpha >= 0.0))
            throw config_error("initial.condensate_alpha must be >= 0");
        ic.condensate_alpha = cfg.condensate_alpha;
        if (cfg.condensate_alpha > 0.0) {
            if (cfg.condensate_u.size() < std::size_t(lat.d()))
                throw config_error("initial.condensate_u needs " +
                                   std::to_string(lat.d()) + " coordinates");
            for (int j = 0; j < lat.d(); ++j) {
                const double u = cfg.condensate_u[std::size_t(j)];
                if (!(u >= 0.0 && u < 1.0))
                    throw config_error(
                        "initial.condensate_u must lie in [0,1)");
                ic.condensate_u[std::size_t(j)] = u;
            }
        }
    } else if (cfg.kind == "canonical") {
        ic.family = initial_condition::kind::canonical;
        if (cfg.K < 0)
            throw config_error("initial.K must be >= 0 for kind=canonical");
        ic.K = cfg.K;
    } else if (cfg.kind == "deterministic") {
        ic.family = initial_condition::kind::deterministic;
        if (!cfg.occupancy_file.empty()) {
            ic.eta = per_site_column<std::int64_t>(
                cfg.occupancy_file, {"site", "occupancy"}, n,
                [](const std::string& p, const std::string& v) {
                    return to_int64(p + " column occupancy", v);
                });
            for (std::int64_t k : ic.eta)
                if (k < 0)
                    throw config_error(cfg.occupancy_file +
                                       ": occupancies must be >= 0");
        } else {
            if (cfg.occupancy < 0)
                throw config_error("initial.occupancy must be >= 0");
            ic.eta.assign(std::size_t(n), cfg.occupancy);
        }
    } else {
        throw config_error("unknown initial.kind '" + cfg.kind +
                           "' (expected product|canonical|deterministic)");
    }
    return ic;
}

}  // namespace zrl
