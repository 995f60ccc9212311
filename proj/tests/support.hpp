#pragma once

// Shared helpers for the test binaries: fixture paths, small publication
// builders, a random publication generator and an independent classification
// oracle written directly from the definitions (pairwise comparisons over
// affiliation lists, no shared code with the library).

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "multiaff/classify.hpp"
#include "multiaff/ingest.hpp"
#include "multiaff/synth.hpp"

namespace testing {

using multiaff::Country;
using multiaff::Discipline;
using multiaff::ingest::Affiliation;
using multiaff::ingest::AuthorRecord;
using multiaff::ingest::OrgType;
using multiaff::ingest::Publication;

inline std::filesystem::path data_dir() { return MULTIAFF_TEST_DATA; }
inline std::filesystem::path fixture(const std::string& name) { return data_dir() / "fixtures" / name; }

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline multiaff::ingest::Corpus load(const std::string& name) {
    std::ifstream in(fixture(name));
    return multiaff::ingest::parse_corpus(in);
}

inline Affiliation aff(const std::string& id, const char* country, std::optional<OrgType> t = std::nullopt) {
    return Affiliation{id, "Inst " + id, Country::of(country), t};
}

inline AuthorRecord author(std::vector<std::size_t> affs, std::string name = "x") {
    return AuthorRecord{std::move(name), std::move(affs)};
}

inline Publication pub(std::vector<Affiliation> affs, std::vector<AuthorRecord> authors,
                       Discipline d = Discipline::CHE, std::string id = "p") {
    Publication p;
    p.id = std::move(id);
    p.year = 2014;
    p.discipline = d;
    p.tc3 = 0;
    p.n_refs = 10;
    p.affiliations = std::move(affs);
    p.authors = std::move(authors);
    return p;
}

// Random publication with at most 6 authors, 5 affiliation entries and 3
// countries. Institutions come from a small pool so duplicate inst_ids occur.
inline Publication random_pub(std::mt19937_64& rng, const std::vector<Country>& countries) {
    auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    const int n_countries = uni(1, 3);
    std::vector<Country> cs;
    while (static_cast<int>(cs.size()) < n_countries) {
        Country c = countries[static_cast<std::size_t>(uni(0, static_cast<int>(countries.size()) - 1))];
        if (std::find(cs.begin(), cs.end(), c) == cs.end()) cs.push_back(c);
    }
    Publication p;
    p.id = "r";
    p.year = 2014;
    p.tc3 = 0;
    const int n_affs = uni(1, 5);
    for (int i = 0; i < n_affs; ++i) {
        const auto c = cs[static_cast<std::size_t>(uni(0, n_countries - 1))];
        const std::string id = c.str() + "-" + std::to_string(uni(0, 2));
        p.affiliations.push_back({id, id, c, std::nullopt});
    }
    const int n_authors = uni(1, 6);
    for (int a = 0; a < n_authors; ++a) {
        AuthorRecord r;
        r.name = "a" + std::to_string(a);
        const int k = uni(1, n_affs);
        for (int j = 0; j < k; ++j) r.affs.push_back(static_cast<std::size_t>(uni(0, n_affs - 1)));
        p.authors.push_back(r);
    }
    return p;
}

// ---------------------------------------------------------------- oracle

namespace oracle {

// "IM": some pair of the author's affiliations lies in different countries.
// "NM": not IM, and some pair names different institutions.
inline std::string author_label(const Publication& p, const AuthorRecord& a) {
    bool cross_country = false, cross_inst = false;
    for (auto i : a.affs)
        for (auto j : a.affs) {
            cross_country |= p.affiliations[i].country != p.affiliations[j].country;
            cross_inst |= p.affiliations[i].inst_id != p.affiliations[j].inst_id;
        }
    if (cross_country) return "IM";
    if (cross_inst) return "NM";
    return "S";
}

inline std::string country_label(const Publication& p, const AuthorRecord& a, Country c) {
    bool present = false;
    for (auto i : a.affs) present |= p.affiliations[i].country == c;
    return author_label(p, a) + (present ? "_Domestic" : "_Foreign");
}

inline std::pair<bool, bool> pub_flags(const Publication& p) {
    bool nm = false, im = false;
    for (const auto& a : p.authors) {
        nm |= author_label(p, a) == "NM";
        im |= author_label(p, a) == "IM";
    }
    return {nm, im};
}

inline std::pair<bool, bool> domestic(const Publication& p, Country c) {
    bool nm = false, im = false;
    for (const auto& a : p.authors) {
        nm |= country_label(p, a, c) == "NM_Domestic";
        im |= country_label(p, a, c) == "IM_Domestic";
    }
    return {nm, im};
}

inline bool collaborative(const Publication& p) {
    std::set<std::string> ids;
    for (const auto& a : p.affiliations) ids.insert(a.inst_id);
    return ids.size() >= 2;
}

}  // namespace oracle

struct OracleResult {
    std::size_t checked = 0;
    std::size_t mismatches = 0;
};

// Compares every classifier label and flag against the oracle on n random
// publications.
inline OracleResult classification_oracle_run(std::size_t n, std::uint64_t seed) {
    namespace cl = multiaff::classify;
    std::mt19937_64 rng(seed);
    const auto countries = multiaff::default_countries();
    OracleResult r;
    auto check = [&](bool ok) {
        ++r.checked;
        r.mismatches += !ok;
    };
    for (std::size_t k = 0; k < n; ++k) {
        const auto p = random_pub(rng, countries);
        for (const auto& a : p.authors) {
            check(std::string(cl::to_string(cl::classify_author(a, p.affiliations))) == oracle::author_label(p, a));
            for (auto c : countries)
                check(std::string(cl::to_string(cl::classify_author_for_country(a, p.affiliations, c))) ==
                      oracle::country_label(p, a, c));
        }
        const auto f = cl::classify_publication(p);
        check(std::pair{f.has_nm, f.has_im} == oracle::pub_flags(p));
        const auto prof = cl::profile(p);
        check(prof.cls == f);
        for (auto c : countries) {
            const auto d = cl::domestic_flags(p, c);
            check(std::pair{d.p_nm_domestic, d.p_im_domestic} == oracle::domestic(p, c));
            check(prof.domestic(c) == d);
        }
    }
    return r;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("multiaff-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

// Relative paths of every file under `golden` whose bytes differ from (or are
// missing in) `produced`, plus files produced but absent from `golden`.
inline std::vector<std::string> golden_differences(const std::filesystem::path& golden,
                                                   const std::filesystem::path& produced) {
    namespace fs = std::filesystem;
    std::vector<std::string> diffs;
    for (const auto& e : fs::recursive_directory_iterator(golden)) {
        if (!e.is_regular_file()) continue;
        const auto rel = fs::relative(e.path(), golden);
        const auto other = produced / rel;
        if (!fs::exists(other) || read_file(other) != read_file(e.path())) diffs.push_back(rel.string());
    }
    for (const auto& e : fs::recursive_directory_iterator(produced)) {
        if (e.is_regular_file() && !fs::exists(golden / fs::relative(e.path(), produced)))
            diffs.push_back("extra: " + fs::relative(e.path(), produced).string());
    }
    std::sort(diffs.begin(), diffs.end());
    return diffs;
}

}  // namespace testing
