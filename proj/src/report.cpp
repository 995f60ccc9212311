#include "multiaff/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "multiaff/error.hpp"

namespace multiaff::report {

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += csv_field(fields[i]);
    }
    out += '\n';
    return out;
}

std::string format_rational(std::uint64_t num, std::uint64_t den, int decimals,
                            std::uint64_t scale) {
    if (den == 0) throw InvalidInput("format_rational: zero denominator");
    unsigned __int128 pow10 = 1;
    for (int i = 0; i < decimals; ++i) pow10 *= 10;
    const unsigned __int128 scaled =
        (static_cast<unsigned __int128>(num) * scale * pow10 * 2 + den) / (2 * static_cast<unsigned __int128>(den));
    const auto whole = static_cast<std::uint64_t>(scaled / pow10);
    auto frac = static_cast<std::uint64_t>(scaled % pow10);
    std::string out = std::to_string(whole);
    if (decimals > 0) {
        std::string f = std::to_string(frac);
        out += '.';
        out += std::string(static_cast<std::size_t>(decimals) - f.size(), '0');
        out += f;
    }
    return out;
}

std::string format_percent(std::uint64_t num, std::uint64_t den) {
    return format_rational(num, den, 1, 100);
}

std::string format_fixed(double x, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
    return buf;
}

double round_significant(double x, int digits) {
    if (!std::isfinite(x) || x == 0.0) return x;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*e", digits - 1, x);
    return std::strtod(buf, nullptr);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace multiaff::report
