// Plain-text persistence: CSV tables with a strict schema registry (every
// file the tools emit validates against it), lossless checkpoints, and the
// Young-measure serialization.  Doubles are written as shortest
// round-tripping decimals so outputs are byte-stable and exactly reloadable.
#pragma once

#include <string>
#include <vector>

#include "zrl/simulate.hpp"
#include "zrl/young.hpp"

namespace zrl {

// shortest decimal that parses back to exactly x
std::string format_double(double x);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

struct csv_table {
    std::vector<std::string> comments;  // emitted as leading "# ..." lines
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

void write_csv(const std::string& path, const csv_table& t);
csv_table read_csv(const std::string& path);  // config_error on malformed input

// column types: 'i' integer, 'f' real, 's' text
struct csv_column_schema {
    std::string name;
    char type;
};
struct csv_schema {
    std::string name;
    std::vector<csv_column_schema> columns;
};

// every table shape the tools write, keyed by exact header column names
const std::vector<csv_schema>& known_csv_schemas();

// empty result = file parses, matches a known schema, and every cell is
// well-typed; otherwise one message per problem
std::vector<std::string> check_csv_file(const std::string& path);
std::vector<std::string> check_csv_against(const csv_table& t,
                                           const csv_schema& schema);

// trajectory checkpoints: JSON with doubles carried both as decimals (for
// humans) and raw IEEE bits (for bit-exact resume)
void write_checkpoint(const std::string& path, const simulation::snapshot& s);
simulation::snapshot read_checkpoint(const std::string& path);

// regular part: rows (u_index, lambda_bin_index, mass), nonzero cells only;
// singular part: rows (u_index, mass); both carry N, ell, M, dlambda in
// comment headers
void write_young_csv(const std::string& regular_path,
                     const std::string& singular_path,
                     const generalized_young_measure& ym);

}  // namespace zrl
