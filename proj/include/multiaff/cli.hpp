#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "multiaff/codes.hpp"

namespace multiaff::cli {

enum ExitCode : int {
    kSuccess = 0,
    kUsageOrIo = 1,
    kValidationFailure = 2,
    kNothingComputable = 3,
};

// Settings shared by the batch commands. Defaults follow the reference
// analysis: 12 sample countries, 19 disciplines, at most 10 authors per
// regression row and a 3-year citation window.
struct RunConfig {
    std::filesystem::path input;
    std::filesystem::path outdir;
    std::vector<Country> countries = default_countries();
    std::vector<Discipline> disciplines = default_disciplines();
    int max_authors = 10;
    int citation_window = 3;
    std::size_t min_rows = 50;
    std::size_t min_mark_positives = 5;
    std::size_t top_k = 3;
    unsigned threads = 1;
    std::uint64_t seed = 0;
};

// Runs one command line (args excludes the program name). Output files are
// written under the configured paths; diagnostics go to `err`, and commands
// without an output directory write to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Applies a JSON config file: every key (a long flag name without dashes) not
// already present in `args` is appended as a flag, so explicit flags win.
std::vector<std::string> apply_config(const std::vector<std::string>& args);

}  // namespace multiaff::cli
