// csv-schema-check: validate CSV artifacts against the registry of table
// shapes the tools write.  Prints one line per problem; exit 0 only when
// every file parses, matches a known header, and every cell is well typed.
#include <iostream>
#include <string>
#include <vector>

#include "zrl/errors.hpp"
#include "zrl/io.hpp"

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: csv-schema-check FILE [FILE...]\n";
        return 2;
    }
    std::size_t problems = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string path = argv[i];
        std::vector<std::string> messages;
        try {
            messages = zrl::check_csv_file(path);
        } catch (const std::exception& e) {
            messages = {e.what()};
        }
        for (const std::string& m : messages) {
            std::cout << path << ": " << m << "\n";
            ++problems;
        }
    }
    return problems == 0 ? 0 : 1;
}
