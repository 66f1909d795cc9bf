#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ltst::cli {

/// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kPrecondition = 2,
    kIdentityFailure = 3,
    kResourceCap = 4,
};

using Cell = std::variant<std::int64_t, double, bool, std::string>;

/// Tabular result of one subcommand. Summary lines belong to the data;
/// metadata (timings, cache statistics) can be suppressed.
struct Table {
    std::string command;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::pair<std::string, Cell>> summary;
    std::vector<std::pair<std::string, Cell>> meta;
};

struct OutputOptions {
    bool json = false;
    bool include_meta = true;
    int precision = 12;
};

/// Fixed-precision decimal rendering ("%.<precision>g"), "nan"/"inf" for non-finite values.
std::string format_double(double value, int precision);

void write_csv(const Table& table, const OutputOptions& options, std::ostream& out);
void write_json(const Table& table, const OutputOptions& options, std::ostream& out);

/// Runs the command line; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace ltst::cli
