#include "zrl/io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "zrl/errors.hpp"

namespace zrl {

namespace {

bool parse_int64_exact(const std::string& s, std::int64_t& out) {
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last;
}

bool parse_uint64_hex(const std::string& s, std::uint64_t& out) {
    if (s.size() < 3 || s[0] != '0' || (s[1] != 'x' && s[1] != 'X')) return false;
    const char* first = s.data() + 2;
    const char* last = s.data() + s.size();
    auto res = std::from_chars(first, last, out, 16);
    return res.ec == std::errc() && res.ptr == last;
}

bool parse_double_exact(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last;
}

std::string u64_hex(std::uint64_t v) {
    char buf[19] = "0x";
    auto res = std::to_chars(buf + 2, buf + sizeof buf, v, 16);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot open file for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw config_error("read failed: " + path);
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw config_error("cannot open file for writing: " + path);
    out.write(content.data(), std::streamsize(content.size()));
    out.flush();
    if (!out) throw config_error("write failed: " + path);
}

void write_csv(const std::string& path, const csv_table& t) {
    if (t.columns.empty()) throw config_error("csv table has no columns: " + path);
    auto check_cell = [&](const std::string& cell) {
        if (cell.find_first_of(",\n\r") != std::string::npos)
            throw config_error("csv cell contains a separator character: '" +
                               cell + "' (" + path + ")");
    };
    std::ostringstream out;
    for (const auto& c : t.comments) {
        if (c.find('\n') != std::string::npos)
            throw config_error("csv comment contains a newline (" + path + ")");
        out << "# " << c << '\n';
    }
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        check_cell(t.columns[i]);
        out << (i ? "," : "") << t.columns[i];
    }
    out << '\n';
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        if (row.size() != t.columns.size())
            throw config_error("csv row " + std::to_string(r) + " has " +
                               std::to_string(row.size()) + " cells, expected " +
                               std::to_string(t.columns.size()) + " (" + path +
                               ")");
        for (std::size_t i = 0; i < row.size(); ++i) {
            check_cell(row[i]);
            out << (i ? "," : "") << row[i];
        }
        out << '\n';
    }
    write_text_file(path, out.str());
}

csv_table read_csv(const std::string& path) {
    const std::string text = read_text_file(path);
    csv_table t;
    std::size_t pos = 0;
    bool header_seen = false;
    std::size_t line_no = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string line = text.substr(
            pos, nl == std::string::npos ? std::string::npos : nl - pos);
        pos = (nl == std::string::npos) ? text.size() + 1 : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (header_seen)
                throw config_error(path + ":" + std::to_string(line_no) +
                                   ": comment after the header row");
            std::size_t start = line.size() > 1 && line[1] == ' ' ? 2 : 1;
            t.comments.push_back(line.substr(start));
            continue;
        }
        std::vector<std::string> cells;
        std::size_t cpos = 0;
        while (true) {
            std::size_t comma = line.find(',', cpos);
            if (comma == std::string::npos) {
                cells.push_back(line.substr(cpos));
                break;
            }
            cells.push_back(line.substr(cpos, comma - cpos));
            cpos = comma + 1;
        }
        if (!header_seen) {
            t.columns = std::move(cells);
            header_seen = true;
        } else {
            if (cells.size() != t.columns.size())
                throw config_error(path + ":" + std::to_string(line_no) +
                                   ": expected " +
                                   std::to_string(t.columns.size()) +
                                   " cells, got " + std::to_string(cells.size()));
            t.rows.push_back(std::move(cells));
        }
    }
    if (!header_seen) throw config_error(path + ": no header row");
    return t;
}

const std::vector<csv_schema>& known_csv_schemas() {
    static const std::vector<csv_schema> schemas = {
        {"thermo", {{"phi", 'f'}, {"Z", 'f'}, {"R", 'f'}}},
        {"thermo_scalars", {{"phi_c", 'f'}, {"rho_c", 'f'}, {"grad_sup", 'f'}}},
        {"phibar", {{"rho", 'f'}, {"phibar", 'f'}}},
        {"fields_1d",
         {{"site", 'i'}, {"density", 'f'}, {"jump_rate", 'f'}, {"current", 'f'}}},
        {"fields_2d",
         {{"site", 'i'},
          {"density", 'f'},
          {"jump_rate", 'f'},
          {"current_0", 'f'},
          {"current_1", 'f'}}},
        {"young_regular",
         {{"u_index", 'i'}, {"lambda_index", 'i'}, {"mass", 'f'}}},
        {"young_singular", {{"u_index", 'i'}, {"mass", 'f'}}},
        {"replica_stats", {{"replica", 'i'}, {"stream", 'i'}, {"value", 'f'}}},
        {"trend", {{"N", 'i'}, {"ell", 'i'}, {"mean", 'f'}, {"se", 'f'}}},
        {"eoe",
         {{"n", 'i'}, {"K", 'i'}, {"expectation_g", 'f'}, {"deviation", 'f'}}},
        {"site_stats", {{"site", 'i'}, {"mean", 'f'}, {"se", 'f'}}},
        {"weak_error",
         {{"test", 'i'}, {"simulated", 'f'}, {"solved", 'f'}, {"abs_error", 'f'}}},
        {"canonical_samples",
         {{"sample", 'i'}, {"site", 'i'}, {"occupancy", 'i'}}},
        {"canonical_marginal", {{"k", 'i'}, {"probability", 'f'}}},
        {"pde_profile", {{"cell", 'i'}, {"rho", 'f'}}},
        {"pde_trace", {{"time", 'f'}, {"mass", 'f'}, {"window_energy", 'f'}}},
        {"rates", {{"k", 'i'}, {"rate", 'f'}}},
        {"profile", {{"site", 'i'}, {"rho", 'f'}}},
        {"occupancies", {{"site", 'i'}, {"occupancy", 'i'}}},
    };
    return schemas;
}

std::vector<std::string> check_csv_against(const csv_table& t,
                                           const csv_schema& schema) {
    std::vector<std::string> problems;
    if (t.columns.size() != schema.columns.size()) {
        problems.push_back("expected " + std::to_string(schema.columns.size()) +
                           " columns for schema '" + schema.name + "', got " +
                           std::to_string(t.columns.size()));
        return problems;
    }
    for (std::size_t i = 0; i < schema.columns.size(); ++i) {
        if (t.columns[i] != schema.columns[i].name) {
            problems.push_back("column " + std::to_string(i) + " is '" +
                               t.columns[i] + "', schema '" + schema.name +
                               "' expects '" + schema.columns[i].name + "'");
        }
    }
    if (!problems.empty()) return problems;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        for (std::size_t c = 0; c < schema.columns.size(); ++c) {
            const std::string& cell = t.rows[r][c];
            const char type = schema.columns[c].type;
            bool ok = true;
            if (type == 'i') {
                std::int64_t v;
                ok = parse_int64_exact(cell, v);
            } else if (type == 'f') {
                double v;
                ok = parse_double_exact(cell, v);
            } else {
                ok = !cell.empty();
            }
            if (!ok)
                problems.push_back("row " + std::to_string(r) + " column '" +
                                   schema.columns[c].name + "': cell '" + cell +
                                   "' is not of type '" + type + "'");
        }
    }
    return problems;
}

std::vector<std::string> check_csv_file(const std::string& path) {
    csv_table t;
    try {
        t = read_csv(path);
    } catch (const config_error& e) {
        return {e.what()};
    }
    for (const auto& schema : known_csv_schemas()) {
        if (t.columns.size() != schema.columns.size()) continue;
        bool match = true;
        for (std::size_t i = 0; i < schema.columns.size(); ++i)
            if (t.columns[i] != schema.columns[i].name) {
                match = false;
                break;
            }
        if (match) return check_csv_against(t, schema);
    }
    std::string header;
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        header += (i ? "," : "") + t.columns[i];
    return {"header does not match any known schema: " + header};
}

void write_checkpoint(const std::string& path, const simulation::snapshot& s) {
    nlohmann::ordered_json j;
    j["t"] = {{"decimal", format_double(s.t)},
              {"bits", u64_hex(std::bit_cast<std::uint64_t>(s.t))}};
    j["events"] = s.events;
    j["rng"] = {{"key", u64_hex(s.rng_state.key)},
                {"stream", u64_hex(s.rng_state.stream)},
                {"counter", u64_hex(s.rng_state.counter)},
                {"phase", s.rng_state.phase}};
    j["occ"] = s.occ;
    write_text_file(path, j.dump(2) + "\n");
}

simulation::snapshot read_checkpoint(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw config_error("checkpoint " + path + ": " + e.what());
    }
    simulation::snapshot s;
    try {
        std::uint64_t bits = 0;
        if (!parse_uint64_hex(j.at("t").at("bits").get<std::string>(), bits))
            throw config_error("checkpoint " + path + ": malformed t.bits");
        s.t = std::bit_cast<double>(bits);
        s.events = j.at("events").get<std::uint64_t>();
        const auto& r = j.at("rng");
        if (!parse_uint64_hex(r.at("key").get<std::string>(), s.rng_state.key) ||
            !parse_uint64_hex(r.at("stream").get<std::string>(),
                              s.rng_state.stream) ||
            !parse_uint64_hex(r.at("counter").get<std::string>(),
                              s.rng_state.counter))
            throw config_error("checkpoint " + path + ": malformed rng state");
        s.rng_state.phase = r.at("phase").get<int>();
        s.occ = j.at("occ").get<std::vector<std::int64_t>>();
    } catch (const nlohmann::json::exception& e) {
        throw config_error("checkpoint " + path + ": " + e.what());
    }
    return s;
}

void write_young_csv(const std::string& regular_path,
                     const std::string& singular_path,
                     const generalized_young_measure& ym) {
    const std::vector<std::string> comments = {
        "N=" + std::to_string(ym.N),        "d=" + std::to_string(ym.d),
        "ell=" + std::to_string(ym.ell),    "M=" + format_double(ym.M),
        "dlambda=" + format_double(ym.dlambda)};

    csv_table reg;
    reg.comments = comments;
    reg.columns = {"u_index", "lambda_index", "mass"};
    for (std::size_t i = 0; i < ym.n_cells; ++i)
        for (std::size_t jbin = 0; jbin < ym.n_bins; ++jbin) {
            const double m = ym.regular[i * ym.n_bins + jbin];
            if (m != 0.0)
                reg.rows.push_back({std::to_string(i), std::to_string(jbin),
                                    format_double(m)});
        }
    write_csv(regular_path, reg);

    csv_table sing;
    sing.comments = comments;
    sing.columns = {"u_index", "mass"};
    for (std::size_t i = 0; i < ym.n_cells; ++i)
        if (ym.singular[i] != 0.0)
            sing.rows.push_back({std::to_string(i), format_double(ym.singular[i])});
    write_csv(singular_path, sing);
}

}  // namespace zrl
