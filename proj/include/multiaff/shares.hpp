#pragma once

// Descriptive share statistics over a collaborative, classified corpus.
// Counts are kept as integers; shares are exact rationals until formatting.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "multiaff/classify.hpp"
#include "multiaff/codes.hpp"

namespace multiaff::shares {

using classify::PublicationProfile;

struct ShareCell {
    std::uint64_t numerator = 0;
    std::uint64_t denominator = 0;

    bool defined() const { return denominator > 0; }
    double share() const;  // throws if undefined
    friend bool operator==(const ShareCell&, const ShareCell&) = default;
};

enum class Kind { NM, IM };

struct CorpusSummary {
    ShareCell total, p_m, p_nm, p_im, p_nom;
    std::uint64_t overlap = 0;  // publications in both P_NM and P_IM
};

// Throws InsufficientData on an empty corpus.
CorpusSummary corpus_summary(std::span<const PublicationProfile> corpus);

struct DisciplineShare {
    Discipline discipline;
    ShareCell p_m, p_nm, p_im;
};

struct DisciplineShares {
    std::vector<DisciplineShare> rows;
    std::vector<Discipline> omitted;  // requested but without collaborative publications
};

DisciplineShares discipline_shares(std::span<const PublicationProfile> corpus,
                                   std::span<const Discipline> disciplines);

struct ShareMatrix {
    Kind kind = Kind::NM;
    std::vector<Country> rows;
    std::vector<Discipline> cols;
    std::vector<std::vector<ShareCell>> cells;  // [row][col]
    std::vector<ShareCell> baseline;            // global per-column share
};

// Throws InvalidInput if a requested country never appears in the corpus.
ShareMatrix country_discipline_shares(std::span<const PublicationProfile> corpus,
                                      std::span<const Country> countries,
                                      std::span<const Discipline> disciplines, Kind kind);

struct RatioMatrix {
    std::vector<Country> rows;
    std::vector<Discipline> cols;
    std::vector<std::vector<std::optional<double>>> ratio;  // nullopt: undefined
    std::vector<bool> column_defined;                       // baseline share > 0
    // Exact ratio numerator/denominator for formatting; valid where ratio is set.
    std::vector<std::vector<ShareCell>> exact;
};

// cell share / baseline share. Columns with zero (or missing) baseline are
// flagged undefined, as are cells with an empty denominator.
RatioMatrix normalize(const ShareMatrix& matrix);

struct InstitutionRank {
    std::string inst_id;
    std::string inst_name;
    std::uint64_t count = 0;
    ShareCell share_in_total;  // count / institution's collaborative publications
};

// Institutions of `country` ranked by the number of publications carrying the
// country's domestic flag of `kind`; ties broken by inst_id. Only institutions
// with a non-zero count are listed.
std::vector<InstitutionRank> top_institutions(std::span<const PublicationProfile> corpus, Country country,
                                              Kind kind, std::size_t k);

struct HospUnivRow {
    Discipline discipline;
    ShareCell cell;  // undefined (denominator 0) means no qualifying publications
};

struct HospUnivResult {
    bool computable = false;  // false when no affiliation carries org_type
    std::vector<HospUnivRow> rows;
};

HospUnivResult hosp_univ_combination_share(std::span<const PublicationProfile> corpus,
                                           std::span<const Discipline> disciplines);

}  // namespace multiaff::shares
