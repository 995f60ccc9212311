#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "multiaff/error.hpp"
#include "multiaff/report.hpp"
#include "multiaff/shares.hpp"
#include "published_anchors.hpp"
#include "support.hpp"

using namespace multiaff;
using namespace multiaff::shares;
using testing::aff;
using testing::author;
using testing::pub;
using ingest::OrgType;
using ingest::Publication;

namespace {

const Country FR = Country::of("FR"), DE = Country::of("DE"), IT = Country::of("IT"), ZA = Country::of("ZA");

// Publication types for hand-built corpora.
Publication nm_pub(Discipline d = Discipline::CHE) {
    return pub({aff("f1", "FR"), aff("f2", "FR"), aff("d1", "DE")}, {author({0, 1}), author({2})}, d);
}
Publication im_pub(Discipline d = Discipline::CHE) {
    return pub({aff("f1", "FR"), aff("d1", "DE")}, {author({0, 1}), author({1})}, d);
}
Publication both_pub(Discipline d = Discipline::CHE) {
    return pub({aff("f1", "FR"), aff("f2", "FR"), aff("d1", "DE")}, {author({0, 1}), author({1, 2})}, d);
}
Publication none_pub(Discipline d = Discipline::CHE) {
    return pub({aff("f1", "FR"), aff("d1", "DE")}, {author({0}), author({1})}, d);
}

std::vector<Publication> collaborative(const std::string& fixture) {
    return ingest::filter_collaborative(testing::load(fixture)).publications;
}

}  // namespace

TEST_CASE("exact half-up formatting") {
    CHECK(report::format_rational(1, 8, 2) == "0.13");
    CHECK(report::format_rational(1, 3, 2) == "0.33");
    CHECK(report::format_rational(2, 3, 2) == "0.67");
    CHECK(report::format_rational(5, 4, 2) == "1.25");
    CHECK(report::format_rational(7, 1, 0) == "7");
    CHECK(report::format_percent(1, 2000) == "0.1");  // 0.05% rounds up
    CHECK(report::format_percent(1, 1) == "100.0");
    CHECK(report::format_percent(0, 7) == "0.0");
    CHECK(report::format_percent(1, 3) == "33.3");
    CHECK(report::format_percent(2, 3) == "66.7");
    // Large counts stay exact.
    CHECK(report::format_percent(3000000000ULL, 4000000000ULL) == "75.0");
}

TEST_CASE("published Table 3 counts satisfy the summary identities") {
    using namespace anchors;
    CHECK(kPM + kPNoM == kTotal);
    const std::uint64_t overlap = kPNM + kPIM - kPM;
    CHECK(overlap == 85293);
    CHECK(kPNM + kPIM - overlap == kPM);
    CHECK(report::format_percent(kPNM, kTotal) == report::format_fixed(kSharePNM, 1));
    CHECK(report::format_percent(kPIM, kTotal) == report::format_fixed(kSharePIM, 1));
    // The printed P_M share is the exact value cut to one decimal.
    const double pm = 100.0 * static_cast<double>(kPM) / static_cast<double>(kTotal);
    CHECK(pm >= kSharePM);
    CHECK(pm < kSharePM + 0.1);
    CHECK(kSharePM + kSharePNoM == doctest::Approx(100.0));
}

TEST_CASE("corpus summary on a hand-built corpus") {
    // 4 in P_NM, 2 in P_IM, 1 in both.
    std::vector<Publication> pubs = {nm_pub(), nm_pub(), nm_pub(), both_pub(), im_pub(),
                                     none_pub(), none_pub(), none_pub(), none_pub(), none_pub()};
    const auto prof = classify::profile_all(pubs);
    const auto s = corpus_summary(prof);
    CHECK(s.total.numerator == 10);
    CHECK(s.p_nm.numerator == 4);
    CHECK(s.p_im.numerator == 2);
    CHECK(s.overlap == 1);
    CHECK(s.p_m.numerator == 5);
    CHECK(s.p_m.share() == 0.5);
    CHECK(s.p_nom.numerator == 5);
    CHECK(s.p_m.denominator == 10);
    CHECK_THROWS_AS(corpus_summary(std::vector<classify::PublicationProfile>{}), InsufficientData);
}

TEST_CASE("summary identities on the bundled corpus") {
    const auto pubs = collaborative("corpus200.jsonl");
    const auto prof = classify::profile_all(pubs);
    const auto s = corpus_summary(prof);
    CHECK(s.p_m.numerator + s.p_nom.numerator == s.total.numerator);
    CHECK(s.p_nm.numerator + s.p_im.numerator - s.overlap == s.p_m.numerator);
    CHECK(s.p_nm.numerator + s.p_im.numerator >= s.p_m.numerator);
}

TEST_CASE("discipline shares match naive per-record counting") {
    const auto pubs = collaborative("corpus200.jsonl");
    const auto prof = classify::profile_all(pubs);
    const auto ds = discipline_shares(prof, default_disciplines());
    std::map<Discipline, std::array<std::uint64_t, 4>> naive;  // n, m, nm, im
    for (const auto& p : pubs) {
        auto [nm, im] = testing::oracle::pub_flags(p);
        auto& r = naive[p.discipline];
        r[0]++;
        r[1] += nm || im;
        r[2] += nm;
        r[3] += im;
    }
    CHECK(ds.rows.size() == naive.size());
    CHECK(ds.rows.size() + ds.omitted.size() == 19);
    for (const auto& row : ds.rows) {
        const auto& r = naive.at(row.discipline);
        CHECK(row.p_m == ShareCell{r[1], r[0]});
        CHECK(row.p_nm == ShareCell{r[2], r[0]});
        CHECK(row.p_im == ShareCell{r[3], r[0]});
        CHECK(std::max(row.p_nm.share(), row.p_im.share()) <= row.p_m.share());
        CHECK(row.p_m.share() <= row.p_nm.share() + row.p_im.share());
    }
    for (auto d : ds.omitted) CHECK(naive.count(d) == 0);
}

TEST_CASE("discipline shares saturate and omit empty disciplines") {
    std::vector<Publication> pubs = {nm_pub(Discipline::MATH), nm_pub(Discipline::MATH), both_pub(Discipline::MATH)};
    const auto prof = classify::profile_all(pubs);
    const std::vector<Discipline> ds_list = {Discipline::SPA, Discipline::MATH};
    const auto ds = discipline_shares(prof, ds_list);
    REQUIRE(ds.rows.size() == 1);
    CHECK(ds.rows[0].discipline == Discipline::MATH);
    CHECK(ds.rows[0].p_nm.share() == 1.0);
    CHECK(ds.omitted == std::vector<Discipline>{Discipline::SPA});
}

TEST_CASE("country x discipline shares") {
    // FR: 2 SPA pubs, one with an FR-FR NM author. DE appears only through S authors.
    std::vector<Publication> pubs = {nm_pub(Discipline::SPA), none_pub(Discipline::SPA), nm_pub(Discipline::PHY),
                                     pub({aff("z1", "ZA"), aff("b1", "BR")}, {author({0, 1})}, Discipline::SPA)};
    const auto prof = classify::profile_all(pubs);
    const std::vector<Country> rows = {FR, DE, ZA};
    const std::vector<Discipline> cols = {Discipline::SPA, Discipline::PHY};
    const auto m = country_discipline_shares(prof, rows, cols, Kind::NM);
    CHECK(m.cells[0][0] == ShareCell{1, 2});
    CHECK(m.cells[0][1] == ShareCell{1, 1});  // single publication, flagged
    CHECK(m.cells[1][0] == ShareCell{0, 2});
    CHECK(m.cells[2][0] == ShareCell{0, 1});
    CHECK(m.baseline[0] == ShareCell{1, 3});
    CHECK(m.baseline[1] == ShareCell{1, 1});

    const auto im = country_discipline_shares(prof, rows, cols, Kind::IM);
    CHECK(im.cells[2][0] == ShareCell{1, 1});
    CHECK(im.cells[0][0] == ShareCell{0, 2});
    CHECK(im.baseline[0] == ShareCell{1, 3});

    const std::vector<Country> absent = {Country::of("JP")};
    CHECK_THROWS_AS(country_discipline_shares(prof, absent, cols, Kind::NM), InvalidInput);
}

TEST_CASE("normalization") {
    std::vector<Publication> pubs = {nm_pub(Discipline::SPA), none_pub(Discipline::SPA),
                                     pub({aff("z1", "ZA"), aff("b1", "BR")}, {author({0}), author({1})},
                                         Discipline::SPA),
                                     none_pub(Discipline::PHY)};
    const auto prof = classify::profile_all(pubs);
    const std::vector<Country> rows = {FR, ZA};
    const std::vector<Discipline> cols = {Discipline::SPA, Discipline::PHY};
    const auto r = normalize(country_discipline_shares(prof, rows, cols, Kind::NM));
    // FR: 1/2 against a 1/3 baseline.
    REQUIRE(r.ratio[0][0].has_value());
    CHECK(*r.ratio[0][0] == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(r.exact[0][0] == ShareCell{3, 2});
    CHECK(*r.ratio[1][0] == 0.0);
    // PHY has no NM publication anywhere: the column is undefined.
    CHECK_FALSE(r.column_defined[1]);
    CHECK_FALSE(r.ratio[0][1].has_value());
    CHECK(r.column_defined[0]);
}

TEST_CASE("cell equal to its baseline normalizes to one; world row is all ones") {
    const auto pubs = collaborative("corpus200.jsonl");
    const auto prof = classify::profile_all(pubs);
    const auto countries = default_countries();
    const auto disciplines = default_disciplines();
    for (auto kind : {Kind::NM, Kind::IM}) {
        auto m = country_discipline_shares(prof, countries, disciplines, kind);
        ShareMatrix world = m;
        world.rows = {Country::of("AQ")};
        world.cells = {m.baseline};
        const auto r = normalize(world);
        for (std::size_t j = 0; j < r.cols.size(); ++j) {
            if (!r.column_defined[j]) continue;
            REQUIRE(r.ratio[0][j].has_value());
            CHECK(*r.ratio[0][j] == 1.0);
        }
    }
}

TEST_CASE("published Fig. 5 anchors") {
    using namespace anchors;
    const double it_phy = kA4_IT_PHY / kA1_PHY_NM;
    CHECK(it_phy == doctest::Approx(1.251).epsilon(1e-3));
    CHECK(std::abs(it_phy - kFig5_IT_PHY) <= 0.06);
    CHECK(report::format_fixed(kA4_FR_NEU / kA1_NEU_NM, 2) == "1.14");

    // The same division through the library's exact path: shares as counts per mille.
    ShareMatrix m;
    m.kind = Kind::NM;
    m.rows = {IT, FR};
    m.cols = {Discipline::PHY, Discipline::NEU};
    m.cells = {{{438, 1000}, {0, 0}}, {{0, 0}, {585, 1000}}};
    m.baseline = {{350, 1000}, {513, 1000}};
    const auto r = normalize(m);
    CHECK(report::format_rational(r.exact[0][0].numerator, r.exact[0][0].denominator, 2) == "1.25");
    CHECK(report::format_rational(r.exact[1][1].numerator, r.exact[1][1].denominator, 2) == "1.14");
    CHECK_FALSE(r.ratio[0][1].has_value());

    // Output formatting of the other published cells.
    CHECK(report::format_percent(292, 1000) == report::format_fixed(kA4_FR_SPA, 1));
    CHECK(report::format_percent(1, 2) == report::format_fixed(kA5_ZA_SPA, 1));
}

TEST_CASE("top institutions") {
    // IM authors anchored in FR: FR-A on 5 flagged pubs, FR-B and FR-C on 3 each.
    std::vector<Publication> pubs;
    auto flagged = [&](const std::string& id, int n) {
        for (int i = 0; i < n; ++i)
            pubs.push_back(pub({aff(id, "FR"), aff("D1", "DE")}, {author({0, 1}), author({1})}));
    };
    flagged("FR-A", 5);
    flagged("FR-C", 3);
    flagged("FR-B", 3);
    for (int i = 0; i < 2; ++i) pubs.push_back(pub({aff("FR-A", "FR"), aff("D2", "DE")}, {author({0}), author({1})}));
    const auto prof = classify::profile_all(pubs);

    const auto top = top_institutions(prof, FR, Kind::IM, 3);
    REQUIRE(top.size() == 3);
    CHECK(top[0].inst_id == "FR-A");
    CHECK(top[0].count == 5);
    CHECK(top[0].share_in_total == ShareCell{5, 7});
    CHECK(top[0].inst_name == "Inst FR-A");
    CHECK(top[1].inst_id == "FR-B");
    CHECK(top[2].inst_id == "FR-C");
    CHECK(top[1].count == 3);
    CHECK(top_institutions(prof, FR, Kind::IM, 1).size() == 1);

    // DE institutions are ranked by DE's domestic IM flag; D1 is on every flagged pub.
    const auto de = top_institutions(prof, DE, Kind::IM, 5);
    REQUIRE(de.size() == 1);
    CHECK(de[0].inst_id == "D1");
    CHECK(de[0].share_in_total == ShareCell{11, 11});

    CHECK(top_institutions(prof, FR, Kind::NM, 3).empty());
    CHECK_THROWS_AS(top_institutions(prof, ZA, Kind::NM, 3), InvalidInput);
    CHECK_THROWS_AS(top_institutions(prof, FR, Kind::NM, 0), InvalidInput);
}

TEST_CASE("hospital-university combination share") {
    const auto H = OrgType::hospital, U = OrgType::university, C = OrgType::college, O = OrgType::other;
    std::vector<Publication> pubs = {
        // Qualifying, with the combination.
        pub({aff("h1", "FR", H), aff("u1", "FR", U)}, {author({0, 1})}),
        pub({aff("h1", "FR", H), aff("c1", "FR", C)}, {author({0, 1})}),
        pub({aff("h1", "FR", H), aff("u2", "DE", U), aff("x", "FR", O)}, {author({0, 1}), author({2})}),
        // Qualifying, hospital paired with a non-academic affiliation.
        pub({aff("h1", "FR", H), aff("o1", "FR", O)}, {author({0, 1})}),
        // Not qualifying: the hospital affiliation belongs to a single-affiliated author.
        pub({aff("h1", "FR", H), aff("u1", "FR", U)}, {author({0}), author({1})}),
    };
    const auto prof = classify::profile_all(pubs);
    const std::vector<Discipline> ds = {Discipline::CHE, Discipline::PHY};
    const auto r = hosp_univ_combination_share(prof, ds);
    REQUIRE(r.computable);
    CHECK(r.rows[0].cell == ShareCell{3, 4});
    CHECK(r.rows[0].cell.share() == 0.75);
    CHECK_FALSE(r.rows[1].cell.defined());

    std::vector<Publication> sat = {pubs[0], pubs[1]};
    const auto sp = classify::profile_all(sat);
    CHECK(hosp_univ_combination_share(sp, ds).rows[0].cell.share() == 1.0);

    std::vector<Publication> bare = {nm_pub()};
    const auto bp = classify::profile_all(bare);
    CHECK_FALSE(hosp_univ_combination_share(bp, ds).computable);
}

TEST_CASE("shares are invariant under record order") {
    auto pubs = collaborative("corpus200.jsonl");
    const auto countries = default_countries();
    const auto disciplines = default_disciplines();
    auto snapshot = [&](const std::vector<Publication>& v) {
        const auto prof = classify::profile_all(v);
        std::vector<std::uint64_t> out;
        const auto s = corpus_summary(prof);
        for (const auto& c : {s.total, s.p_m, s.p_nm, s.p_im, s.p_nom}) out.push_back(c.numerator);
        for (const auto& r : discipline_shares(prof, disciplines).rows)
            for (const auto& c : {r.p_m, r.p_nm, r.p_im}) out.insert(out.end(), {c.numerator, c.denominator});
        for (auto kind : {Kind::NM, Kind::IM}) {
            const auto m = country_discipline_shares(prof, countries, disciplines, kind);
            for (const auto& row : m.cells)
                for (const auto& c : row) out.insert(out.end(), {c.numerator, c.denominator});
            for (auto c : countries)
                for (const auto& t : top_institutions(prof, c, kind, 3)) out.push_back(t.count);
        }
        for (const auto& r : hosp_univ_combination_share(prof, disciplines).rows)
            out.insert(out.end(), {r.cell.numerator, r.cell.denominator});
        return out;
    };
    const auto base = snapshot(pubs);
    std::mt19937_64 rng(3);
    for (int k = 0; k < 3; ++k) {
        std::shuffle(pubs.begin(), pubs.end(), rng);
        CHECK(snapshot(pubs) == base);
    }
}
