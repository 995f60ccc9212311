#include "multiaff/codes.hpp"

#include <algorithm>

#include "multiaff/error.hpp"

namespace multiaff {

namespace {

// ISO 3166-1 alpha-2, officially assigned codes (249), sorted.
constexpr std::array<std::string_view, 249> kIsoCodes = {
    "AD", "AE", "AF", "AG", "AI", "AL", "AM", "AO", "AQ", "AR", "AS", "AT", "AU", "AW", "AX", "AZ",
    "BA", "BB", "BD", "BE", "BF", "BG", "BH", "BI", "BJ", "BL", "BM", "BN", "BO", "BQ", "BR", "BS",
    "BT", "BV", "BW", "BY", "BZ",
    "CA", "CC", "CD", "CF", "CG", "CH", "CI", "CK", "CL", "CM", "CN", "CO", "CR", "CU", "CV", "CW",
    "CX", "CY", "CZ",
    "DE", "DJ", "DK", "DM", "DO", "DZ",
    "EC", "EE", "EG", "EH", "ER", "ES", "ET",
    "FI", "FJ", "FK", "FM", "FO", "FR",
    "GA", "GB", "GD", "GE", "GF", "GG", "GH", "GI", "GL", "GM", "GN", "GP", "GQ", "GR", "GS", "GT",
    "GU", "GW", "GY",
    "HK", "HM", "HN", "HR", "HT", "HU",
    "ID", "IE", "IL", "IM", "IN", "IO", "IQ", "IR", "IS", "IT",
    "JE", "JM", "JO", "JP",
    "KE", "KG", "KH", "KI", "KM", "KN", "KP", "KR", "KW", "KY", "KZ",
    "LA", "LB", "LC", "LI", "LK", "LR", "LS", "LT", "LU", "LV", "LY",
    "MA", "MC", "MD", "ME", "MF", "MG", "MH", "MK", "ML", "MM", "MN", "MO", "MP", "MQ", "MR", "MS",
    "MT", "MU", "MV", "MW", "MX", "MY", "MZ",
    "NA", "NC", "NE", "NF", "NG", "NI", "NL", "NO", "NP", "NR", "NU", "NZ",
    "OM",
    "PA", "PE", "PF", "PG", "PH", "PK", "PL", "PM", "PN", "PR", "PS", "PT", "PW", "PY",
    "QA",
    "RE", "RO", "RS", "RU", "RW",
    "SA", "SB", "SC", "SD", "SE", "SG", "SH", "SI", "SJ", "SK", "SL", "SM", "SN", "SO", "SR", "SS",
    "ST", "SV", "SX", "SY", "SZ",
    "TC", "TD", "TF", "TG", "TH", "TJ", "TK", "TL", "TM", "TN", "TO", "TR", "TT", "TV", "TW", "TZ",
    "UA", "UG", "UM", "US", "UY", "UZ",
    "VA", "VC", "VE", "VG", "VI", "VN", "VU",
    "WF", "WS",
    "YE", "YT",
    "ZA", "ZM", "ZW",
};

constexpr std::array<DisciplineInfo, kDisciplineCount> kDisciplines = {{
    {Discipline::SPA, "SPA", "Space Science", "Space Science"},
    {Discipline::NEU, "NEU", "Neuroscience & Behavior", "Medicine related"},
    {Discipline::PSY, "PSY", "Psychiatry/Psychology", "Medicine related"},
    {Discipline::IMM, "IMM", "Immunology", "Medicine related"},
    {Discipline::CLI, "CLI", "Clinical Medicine", "Medicine related"},
    {Discipline::PHA, "PHA", "Pharmacology & Toxicology", "Medicine related"},
    {Discipline::PHY, "PHY", "Physics", "Physics"},
    {Discipline::MOL, "MOL", "Molecular Biology & Genetics", "Biology related"},
    {Discipline::BIO, "BIO", "Biology & Biochemistry", "Biology related"},
    {Discipline::MIC, "MIC", "Microbiology", "Biology related"},
    {Discipline::PLA, "PLA", "Plant & Animal Science", "Biology related"},
    {Discipline::ENV, "ENV", "Environment/Ecology", "Environment/Ecology"},
    {Discipline::GEO, "GEO", "Geosciences", "Geosciences"},
    {Discipline::CHE, "CHE", "Chemistry", "Chemistry"},
    {Discipline::AGR, "AGR", "Agricultural Sciences", "Agricultural Sciences"},
    {Discipline::MATE, "MATE", "Materials Science", "Engineering related"},
    {Discipline::COM, "COM", "Computer Science", "Engineering related"},
    {Discipline::ENG, "ENG", "Engineering", "Engineering related"},
    {Discipline::MATH, "MATH", "Mathematics", "Mathematics"},
}};

constexpr std::array<std::string_view, 12> kSampleCountries = {
    "CA", "DE", "FR", "GB", "IT", "JP", "US", "BR", "CN", "IN", "RU", "ZA"};

}  // namespace

bool is_iso_country(std::string_view code) {
    return std::binary_search(kIsoCodes.begin(), kIsoCodes.end(), code);
}

std::optional<Country> Country::parse(std::string_view code) {
    if (code.size() != 2 || !is_iso_country(code)) return std::nullopt;
    return Country({code[0], code[1]});
}

Country Country::of(std::string_view code) {
    auto c = parse(code);
    if (!c) throw InvalidInput("unknown country code '" + std::string(code) + "'");
    return *c;
}

std::span<const DisciplineInfo> all_disciplines() { return kDisciplines; }

const DisciplineInfo& info(Discipline d) { return kDisciplines[static_cast<std::size_t>(d)]; }

std::string_view code(Discipline d) { return info(d).code; }

std::optional<Discipline> parse_discipline(std::string_view code) {
    for (const auto& d : kDisciplines)
        if (d.code == code) return d.discipline;
    return std::nullopt;
}

std::string_view map_field(Discipline d) { return info(d).field; }

std::string_view map_field(std::string_view discipline_code) {
    auto d = parse_discipline(discipline_code);
    if (!d) throw InvalidInput("unknown discipline code '" + std::string(discipline_code) + "'");
    return map_field(*d);
}

std::vector<Discipline> default_disciplines() {
    std::vector<Discipline> out;
    for (const auto& d : kDisciplines) out.push_back(d.discipline);
    return out;
}

std::vector<Country> default_countries() {
    std::vector<Country> out;
    for (auto c : kSampleCountries) out.push_back(Country::of(c));
    return out;
}

}  // namespace multiaff
