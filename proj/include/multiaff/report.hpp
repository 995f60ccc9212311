#pragma once

// Output formatting shared by the CSV/JSON writers.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace multiaff::report {

// RFC 4180 quoting: fields containing comma, quote or newline are quoted.
std::string csv_field(std::string_view s);
std::string csv_row(const std::vector<std::string>& fields);

// Exact decimal rendering of num/den * scale, rounded half-up to `decimals`
// places. Requires den > 0.
std::string format_rational(std::uint64_t num, std::uint64_t den, int decimals,
                            std::uint64_t scale = 1);

// num/den as a percentage with one decimal, e.g. 976036/2137885 -> "45.7".
std::string format_percent(std::uint64_t num, std::uint64_t den);

// printf-style fixed formatting of a double.
std::string format_fixed(double x, int decimals);

// Rounds to `digits` significant decimal digits.
double round_significant(double x, int digits);

// Writes to a sibling temp file then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace multiaff::report
