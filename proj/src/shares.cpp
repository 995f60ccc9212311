#include "multiaff/shares.hpp"

#include <algorithm>
#include <map>

#include "multiaff/error.hpp"

namespace multiaff::shares {

using classify::AuthorClass;
using ingest::OrgType;

double ShareCell::share() const {
    if (!defined()) throw InvalidInput("share of an empty denominator");
    return static_cast<double>(numerator) / static_cast<double>(denominator);
}

CorpusSummary corpus_summary(std::span<const PublicationProfile> corpus) {
    if (corpus.empty()) throw InsufficientData("empty corpus");
    std::uint64_t m = 0, nm = 0, im = 0, both = 0;
    for (const auto& p : corpus) {
        m += p.cls.multi_affiliated();
        nm += p.cls.has_nm;
        im += p.cls.has_im;
        both += p.cls.has_nm && p.cls.has_im;
    }
    const std::uint64_t total = corpus.size();
    return CorpusSummary{{total, total}, {m, total}, {nm, total}, {im, total}, {total - m, total}, both};
}

DisciplineShares discipline_shares(std::span<const PublicationProfile> corpus,
                                   std::span<const Discipline> disciplines) {
    std::array<DisciplineShare, kDisciplineCount> acc{};
    for (std::size_t i = 0; i < kDisciplineCount; ++i) acc[i].discipline = static_cast<Discipline>(i);
    for (const auto& p : corpus) {
        auto& row = acc[static_cast<std::size_t>(p.pub->discipline)];
        row.p_m.denominator++;
        row.p_m.numerator += p.cls.multi_affiliated();
        row.p_nm.numerator += p.cls.has_nm;
        row.p_im.numerator += p.cls.has_im;
    }
    DisciplineShares out;
    for (auto d : disciplines) {
        auto row = acc[static_cast<std::size_t>(d)];
        if (row.p_m.denominator == 0) {
            out.omitted.push_back(d);
            continue;
        }
        row.p_nm.denominator = row.p_im.denominator = row.p_m.denominator;
        out.rows.push_back(row);
    }
    return out;
}

ShareMatrix country_discipline_shares(std::span<const PublicationProfile> corpus,
                                      std::span<const Country> countries,
                                      std::span<const Discipline> disciplines, Kind kind) {
    ShareMatrix m;
    m.kind = kind;
    m.rows.assign(countries.begin(), countries.end());
    m.cols.assign(disciplines.begin(), disciplines.end());

    std::map<Discipline, std::size_t> col_of;
    for (std::size_t j = 0; j < m.cols.size(); ++j) col_of.emplace(m.cols[j], j);

    m.cells.assign(m.rows.size(), std::vector<ShareCell>(m.cols.size()));
    m.baseline.assign(m.cols.size(), ShareCell{});
    std::vector<bool> seen(m.rows.size(), false);

    for (const auto& p : corpus) {
        auto it = col_of.find(p.pub->discipline);
        if (it == col_of.end()) {
            for (std::size_t r = 0; r < m.rows.size(); ++r) seen[r] = seen[r] || p.has_country(m.rows[r]);
            continue;
        }
        const std::size_t j = it->second;
        m.baseline[j].denominator++;
        m.baseline[j].numerator += kind == Kind::NM ? p.cls.has_nm : p.cls.has_im;
        for (std::size_t r = 0; r < m.rows.size(); ++r) {
            if (!p.has_country(m.rows[r])) continue;
            seen[r] = true;
            auto f = p.domestic(m.rows[r]);
            auto& cell = m.cells[r][j];
            cell.denominator++;
            cell.numerator += kind == Kind::NM ? f.p_nm_domestic : f.p_im_domestic;
        }
    }
    for (std::size_t r = 0; r < m.rows.size(); ++r)
        if (!seen[r]) throw InvalidInput("country " + m.rows[r].str() + " is absent from the corpus");
    return m;
}

RatioMatrix normalize(const ShareMatrix& matrix) {
    RatioMatrix out;
    out.rows = matrix.rows;
    out.cols = matrix.cols;
    out.column_defined.resize(matrix.cols.size());
    for (std::size_t j = 0; j < matrix.cols.size(); ++j) {
        const auto& b = matrix.baseline[j];
        out.column_defined[j] = b.defined() && b.numerator > 0;
    }
    out.ratio.assign(matrix.rows.size(), std::vector<std::optional<double>>(matrix.cols.size()));
    out.exact.assign(matrix.rows.size(), std::vector<ShareCell>(matrix.cols.size()));
    for (std::size_t r = 0; r < matrix.rows.size(); ++r) {
        for (std::size_t j = 0; j < matrix.cols.size(); ++j) {
            const auto& c = matrix.cells[r][j];
            const auto& b = matrix.baseline[j];
            if (!out.column_defined[j] || !c.defined()) continue;
            // (a/b) / (c/d) = (a*d) / (b*c)
            ShareCell q{c.numerator * b.denominator, c.denominator * b.numerator};
            out.exact[r][j] = q;
            out.ratio[r][j] = q.share();
        }
    }
    return out;
}

std::vector<InstitutionRank> top_institutions(std::span<const PublicationProfile> corpus, Country country,
                                              Kind kind, std::size_t k) {
    if (k == 0) throw InvalidInput("top_institutions: k must be at least 1");
    struct Acc {
        std::string name;
        std::uint64_t flagged = 0, total = 0;
    };
    std::map<std::string, Acc, std::less<>> insts;
    bool present = false;
    for (const auto& p : corpus) {
        if (!p.has_country(country)) continue;
        present = true;
        auto f = p.domestic(country);
        const bool flagged = kind == Kind::NM ? f.p_nm_domestic : f.p_im_domestic;
        std::vector<std::string_view> counted;
        for (const auto& a : p.pub->affiliations) {
            if (a.country != country) continue;
            if (std::find(counted.begin(), counted.end(), a.inst_id) != counted.end()) continue;
            counted.push_back(a.inst_id);
            auto [it, inserted] = insts.try_emplace(a.inst_id);
            if (inserted) it->second.name = a.name;
            it->second.total++;
            it->second.flagged += flagged;
        }
    }
    if (!present) throw InvalidInput("country " + country.str() + " is absent from the corpus");

    std::vector<InstitutionRank> ranks;
    for (const auto& [id, acc] : insts)
        if (acc.flagged > 0) ranks.push_back({id, acc.name, acc.flagged, {acc.flagged, acc.total}});
    std::stable_sort(ranks.begin(), ranks.end(),
                     [](const auto& a, const auto& b) { return a.count > b.count; });
    if (ranks.size() > k) ranks.resize(k);
    return ranks;
}

HospUnivResult hosp_univ_combination_share(std::span<const PublicationProfile> corpus,
                                           std::span<const Discipline> disciplines) {
    HospUnivResult out;
    for (const auto& p : corpus)
        for (const auto& a : p.pub->affiliations)
            if (a.org_type) out.computable = true;

    std::array<ShareCell, kDisciplineCount> acc{};
    if (out.computable) {
        for (const auto& p : corpus) {
            bool hospital = false, combined = false;
            for (std::size_t i = 0; i < p.authors.size(); ++i) {
                if (p.authors[i].cls == AuthorClass::S) continue;
                bool h = false, u = false;
                for (auto idx : p.pub->authors[i].affs) {
                    const auto& t = p.pub->affiliations[idx].org_type;
                    h |= t == OrgType::hospital;
                    u |= t == OrgType::university || t == OrgType::college;
                }
                hospital |= h;
                combined |= h && u;
            }
            auto& cell = acc[static_cast<std::size_t>(p.pub->discipline)];
            cell.denominator += hospital;
            cell.numerator += combined;
        }
    }
    for (auto d : disciplines) out.rows.push_back({d, acc[static_cast<std::size_t>(d)]});
    return out;
}

}  // namespace multiaff::shares
