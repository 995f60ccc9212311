#include "multiaff/ingest.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <thread>
#include <unordered_map>
#include <variant>

#include "json.hpp"
#include "multiaff/error.hpp"
#include "multiaff/report.hpp"

namespace multiaff::ingest {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string_view to_string(DocType t) { return t == DocType::Article ? "Article" : "Review"; }

std::string_view to_string(OrgType t) {
    switch (t) {
        case OrgType::university: return "university";
        case OrgType::college: return "college";
        case OrgType::hospital: return "hospital";
        case OrgType::other: return "other";
    }
    return "other";
}

std::optional<OrgType> parse_org_type(std::string_view s) {
    for (auto t : {OrgType::university, OrgType::college, OrgType::hospital, OrgType::other})
        if (to_string(t) == s) return t;
    return std::nullopt;
}

std::string_view to_string(QcKind k) {
    switch (k) {
        case QcKind::malformed_record: return "malformed_record";
        case QcKind::missing_field: return "missing_field";
        case QcKind::invalid_type: return "invalid_type";
        case QcKind::invalid_value: return "invalid_value";
        case QcKind::unknown_country: return "unknown_country";
        case QcKind::unknown_discipline: return "unknown_discipline";
        case QcKind::multi_discipline: return "multi_discipline";
        case QcKind::dangling_index: return "dangling_index";
        case QcKind::negative_count: return "negative_count";
        case QcKind::empty_list: return "empty_list";
        case QcKind::incomplete_window: return "incomplete_window";
        case QcKind::inconsistent_institution: return "inconsistent_institution";
    }
    return "unknown";
}

namespace {

struct RecordError {
    QcKind kind;
    std::string message;
};

[[noreturn]] void reject(QcKind kind, std::string message) {
    throw RecordError{kind, std::move(message)};
}

const json& require(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) reject(QcKind::missing_field, where + "missing field '" + key + "'");
    return *it;
}

std::string get_string(const json& v, const std::string& what) {
    if (!v.is_string()) reject(QcKind::invalid_type, what + " must be a string");
    return v.get<std::string>();
}

std::int64_t get_int(const json& v, const std::string& what) {
    if (v.is_number_unsigned()) {
        auto u = v.get<std::uint64_t>();
        if (u > static_cast<std::uint64_t>(INT64_MAX)) reject(QcKind::invalid_value, what + " out of range");
        return static_cast<std::int64_t>(u);
    }
    if (!v.is_number_integer()) reject(QcKind::invalid_type, what + " must be an integer");
    return v.get<std::int64_t>();
}

std::int64_t get_count(const json& v, const std::string& what) {
    auto n = get_int(v, what);
    if (n < 0) reject(QcKind::negative_count, what + " is negative (" + std::to_string(n) + ")");
    return n;
}

Affiliation parse_affiliation(const json& a, std::size_t idx) {
    const std::string where = "affiliations[" + std::to_string(idx) + "]: ";
    if (!a.is_object()) reject(QcKind::invalid_type, where + "must be an object");
    auto inst_id = get_string(require(a, "inst_id", where), where + "inst_id");
    if (inst_id.empty()) reject(QcKind::invalid_value, where + "empty inst_id");
    auto name = get_string(require(a, "name", where), where + "name");
    auto ccode = get_string(require(a, "country", where), where + "country");
    auto country = Country::parse(ccode);
    if (!country) reject(QcKind::unknown_country, where + "unknown country code '" + ccode + "'");
    std::optional<OrgType> org;
    if (auto it = a.find("org_type"); it != a.end() && !it->is_null()) {
        auto s = get_string(*it, where + "org_type");
        org = parse_org_type(s);
        if (!org) reject(QcKind::invalid_value, where + "unknown org_type '" + s + "'");
    }
    return Affiliation{std::move(inst_id), std::move(name), *country, org};
}

Publication parse_object(const json& rec, int window) {
    if (!rec.is_object()) reject(QcKind::malformed_record, "record is not an object");
    Publication pub;
    pub.id = get_string(require(rec, "id", ""), "id");
    pub.year = static_cast<int>(get_int(require(rec, "year", ""), "year"));

    auto dt = get_string(require(rec, "doc_type", ""), "doc_type");
    if (dt == "Article") pub.doc_type = DocType::Article;
    else if (dt == "Review") pub.doc_type = DocType::Review;
    else reject(QcKind::invalid_value, "doc_type '" + dt + "' is not Article or Review");

    const auto& disc = require(rec, "discipline", "");
    if (disc.is_array()) reject(QcKind::multi_discipline, "discipline must be a single code");
    auto dcode = get_string(disc, "discipline");
    auto d = parse_discipline(dcode);
    if (!d) reject(QcKind::unknown_discipline, "unknown discipline code '" + dcode + "'");
    pub.discipline = *d;

    if (auto it = rec.find("citations_by_year"); it != rec.end() && !it->is_null()) {
        if (!it->is_array()) reject(QcKind::invalid_type, "citations_by_year must be an array");
        std::vector<std::int64_t> cites;
        for (std::size_t i = 0; i < it->size(); ++i)
            cites.push_back(get_count((*it)[i], "citations_by_year[" + std::to_string(i) + "]"));
        pub.citations_by_year = std::move(cites);
    }
    if (auto it = rec.find("tc3"); it != rec.end() && !it->is_null()) pub.tc3 = get_count(*it, "tc3");
    pub.n_refs = get_count(require(rec, "n_refs", ""), "n_refs");

    const auto& affs = require(rec, "affiliations", "");
    if (!affs.is_array()) reject(QcKind::invalid_type, "affiliations must be an array");
    if (affs.empty()) reject(QcKind::empty_list, "no affiliations");
    std::unordered_map<std::string, Country> inst_country;
    for (std::size_t i = 0; i < affs.size(); ++i) {
        auto a = parse_affiliation(affs[i], i);
        auto [it, inserted] = inst_country.emplace(a.inst_id, a.country);
        if (!inserted && it->second != a.country)
            reject(QcKind::inconsistent_institution,
                   "inst_id '" + a.inst_id + "' listed with countries " + it->second.str() + " and " + a.country.str());
        pub.affiliations.push_back(std::move(a));
    }

    const auto& authors = require(rec, "authors", "");
    if (!authors.is_array()) reject(QcKind::invalid_type, "authors must be an array");
    if (authors.empty()) reject(QcKind::empty_list, "no authors");
    for (std::size_t i = 0; i < authors.size(); ++i) {
        const std::string where = "authors[" + std::to_string(i) + "]: ";
        const auto& a = authors[i];
        if (!a.is_object()) reject(QcKind::invalid_type, where + "must be an object");
        AuthorRecord author;
        author.name = get_string(require(a, "name", where), where + "name");
        const auto& links = require(a, "affs", where);
        if (!links.is_array()) reject(QcKind::invalid_type, where + "affs must be an array");
        if (links.empty()) reject(QcKind::empty_list, where + "author has no affiliation links");
        for (const auto& l : links) {
            auto idx = get_int(l, where + "affs entry");
            if (idx < 0 || static_cast<std::size_t>(idx) >= pub.affiliations.size())
                reject(QcKind::dangling_index, where + "dangling index " + std::to_string(idx) + " (" +
                                                   std::to_string(pub.affiliations.size()) + " affiliations)");
            author.affs.push_back(static_cast<std::size_t>(idx));
        }
        pub.authors.push_back(std::move(author));
    }

    try {
        compute_tc(pub, window);
    } catch (const InvalidInput& e) {
        reject(QcKind::incomplete_window, e.what());
    }
    return pub;
}

using LineResult = std::variant<Publication, QcEntry>;

LineResult parse_line(std::string_view line, std::size_t lineno, int window) {
    QcEntry err;
    if (auto pub = parse_record(line, err, window)) return std::move(*pub);
    err.line = lineno;
    return err;
}

bool is_blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

std::optional<Publication> parse_record(std::string_view line, QcEntry& error, int citation_window) {
    json rec;
    try {
        rec = json::parse(line);
    } catch (const json::parse_error& e) {
        error = QcEntry{0, QcKind::malformed_record, e.what()};
        return std::nullopt;
    }
    try {
        return parse_object(rec, citation_window);
    } catch (const RecordError& e) {
        error = QcEntry{0, e.kind, e.message};
        return std::nullopt;
    }
}

Corpus parse_corpus(std::istream& in, const ParseOptions& options) {
    std::vector<std::pair<std::size_t, std::string>> lines;
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!is_blank(line)) lines.emplace_back(lineno, std::move(line));
    }

    std::vector<std::optional<LineResult>> results(lines.size());
    const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, lines.size() / 256 + 1));
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            results[i] = parse_line(lines[i].second, lines[i].first, options.citation_window);
    };
    if (threads == 1) {
        work(0, lines.size());
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (lines.size() + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t b = t * chunk, e = std::min(lines.size(), b + chunk);
            if (b < e) pool.emplace_back(work, b, e);
        }
    }

    Corpus corpus;
    for (auto& r : results) {
        if (auto* pub = std::get_if<Publication>(&*r)) corpus.publications.push_back(std::move(*pub));
        else corpus.qc.push_back(std::get<QcEntry>(std::move(*r)));
    }
    return corpus;
}

std::string to_record(const Publication& pub) {
    ordered_json rec;
    rec["id"] = pub.id;
    rec["year"] = pub.year;
    rec["doc_type"] = to_string(pub.doc_type);
    rec["discipline"] = code(pub.discipline);
    if (pub.citations_by_year) rec["citations_by_year"] = *pub.citations_by_year;
    if (pub.tc3) rec["tc3"] = *pub.tc3;
    rec["n_refs"] = pub.n_refs;
    rec["affiliations"] = ordered_json::array();
    for (const auto& a : pub.affiliations) {
        ordered_json aj;
        aj["inst_id"] = a.inst_id;
        aj["name"] = a.name;
        aj["country"] = a.country.code();
        if (a.org_type) aj["org_type"] = to_string(*a.org_type);
        rec["affiliations"].push_back(std::move(aj));
    }
    rec["authors"] = ordered_json::array();
    for (const auto& au : pub.authors) {
        ordered_json aj;
        aj["name"] = au.name;
        aj["affs"] = au.affs;
        rec["authors"].push_back(std::move(aj));
    }
    return rec.dump();
}

std::int64_t compute_tc(const Publication& pub, int window) {
    if (window < 1) throw InvalidInput("citation window must be positive");
    const auto w = static_cast<std::size_t>(window);
    if (pub.citations_by_year && pub.citations_by_year->size() >= w) {
        std::int64_t tc = 0;
        for (std::size_t i = 0; i < w; ++i) tc += (*pub.citations_by_year)[i];
        return tc;
    }
    if (pub.tc3) return *pub.tc3;
    if (pub.citations_by_year)
        throw InvalidInput("incomplete citation window: " + std::to_string(pub.citations_by_year->size()) +
                           " yearly counts for a " + std::to_string(window) + "-year window and no tc3");
    throw InvalidInput("no citation data (citations_by_year or tc3)");
}

std::size_t distinct_institutions(const Publication& pub) {
    std::set<std::string_view> ids;
    for (const auto& a : pub.affiliations) ids.insert(a.inst_id);
    return ids.size();
}

Corpus filter_collaborative(const Corpus& corpus) {
    Corpus out;
    out.qc = corpus.qc;
    for (const auto& p : corpus.publications)
        if (distinct_institutions(p) >= 2) out.publications.push_back(p);
    return out;
}

void write_qc_csv(std::ostream& out, const std::vector<QcEntry>& qc) {
    out << "line,kind,message\n";
    for (const auto& e : qc)
        out << report::csv_row({std::to_string(e.line), std::string(to_string(e.kind)), e.message});
}

}  // namespace multiaff::ingest
