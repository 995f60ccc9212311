#pragma once

// Line-delimited publication records: parsing, validation, QC and the
// collaborative-publication filter.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "multiaff/codes.hpp"

namespace multiaff::ingest {

enum class DocType { Article, Review };
enum class OrgType { university, college, hospital, other };

std::string_view to_string(DocType t);
std::string_view to_string(OrgType t);
std::optional<OrgType> parse_org_type(std::string_view s);

struct Affiliation {
    std::string inst_id;
    std::string name;
    Country country;
    std::optional<OrgType> org_type;

    friend bool operator==(const Affiliation&, const Affiliation&) = default;
};

struct AuthorRecord {
    std::string name;
    std::vector<std::size_t> affs;  // indices into Publication::affiliations

    friend bool operator==(const AuthorRecord&, const AuthorRecord&) = default;
};

struct Publication {
    std::string id;
    int year = 0;
    DocType doc_type = DocType::Article;
    Discipline discipline = Discipline::SPA;
    std::optional<std::vector<std::int64_t>> citations_by_year;  // [0] = publication year
    std::optional<std::int64_t> tc3;
    std::int64_t n_refs = 0;
    std::vector<Affiliation> affiliations;
    std::vector<AuthorRecord> authors;

    friend bool operator==(const Publication&, const Publication&) = default;
};

enum class QcKind {
    malformed_record,
    missing_field,
    invalid_type,
    invalid_value,
    unknown_country,
    unknown_discipline,
    multi_discipline,
    dangling_index,
    negative_count,
    empty_list,
    incomplete_window,
    inconsistent_institution,
};

std::string_view to_string(QcKind k);

struct QcEntry {
    std::size_t line = 0;  // 1-based physical line number
    QcKind kind = QcKind::malformed_record;
    std::string message;

    friend bool operator==(const QcEntry&, const QcEntry&) = default;
};

struct Corpus {
    std::vector<Publication> publications;
    std::vector<QcEntry> qc;
};

struct ParseOptions {
    unsigned threads = 1;
    int citation_window = 3;
};

// Parses one record. Returns the publication, or fills `error` (line left 0).
std::optional<Publication> parse_record(std::string_view line, QcEntry& error,
                                        int citation_window = 3);

// Blank lines are skipped but still counted for line numbering. Never throws
// on bad records; they land in Corpus::qc in line order.
Corpus parse_corpus(std::istream& in, const ParseOptions& options = {});

// Serializes a publication back to one record line (no trailing newline).
std::string to_record(const Publication& pub);

// Cumulative citations within the window (publication year plus window-1
// following years). Per-year data wins over tc3 when it covers the window.
// Throws InvalidInput when neither source covers the window.
std::int64_t compute_tc(const Publication& pub, int window = 3);

// Number of distinct inst_id values on the publication.
std::size_t distinct_institutions(const Publication& pub);

// Keeps publications with at least two distinct institutions; QC is carried over.
Corpus filter_collaborative(const Corpus& corpus);

void write_qc_csv(std::ostream& out, const std::vector<QcEntry>& qc);

}  // namespace multiaff::ingest
