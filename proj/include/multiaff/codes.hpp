#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace multiaff {

// ISO 3166-1 alpha-2 country code. Only codes from the bundled table can be
// constructed.
class Country {
public:
    static std::optional<Country> parse(std::string_view code);
    // Throws InvalidInput for unknown codes.
    static Country of(std::string_view code);

    std::string_view code() const { return {code_.data(), 2}; }
    std::string str() const { return std::string(code()); }

    friend auto operator<=>(const Country&, const Country&) = default;
    friend bool operator==(const Country&, const Country&) = default;

private:
    explicit Country(std::array<char, 2> c) : code_(c) {}
    std::array<char, 2> code_;
};

bool is_iso_country(std::string_view code);

// The 19 ESI disciplines, in reporting order.
enum class Discipline : std::uint8_t {
    SPA, NEU, PSY, IMM, CLI, PHA, PHY, MOL, BIO, MIC,
    PLA, ENV, GEO, CHE, AGR, MATE, COM, ENG, MATH
};

inline constexpr std::size_t kDisciplineCount = 19;

struct DisciplineInfo {
    Discipline discipline;
    std::string_view code;
    std::string_view name;
    std::string_view field;
};

std::span<const DisciplineInfo> all_disciplines();
const DisciplineInfo& info(Discipline d);
std::string_view code(Discipline d);
std::optional<Discipline> parse_discipline(std::string_view code);
// Broader field group a discipline belongs to, e.g. CLI -> "Medicine related".
std::string_view map_field(Discipline d);
// Throws InvalidInput for codes outside the 19-code set.
std::string_view map_field(std::string_view discipline_code);

std::vector<Discipline> default_disciplines();
// G7 then BRICS sample countries.
std::vector<Country> default_countries();

}  // namespace multiaff
