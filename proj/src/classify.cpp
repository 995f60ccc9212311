#include "multiaff/classify.hpp"

#include <algorithm>

namespace multiaff::classify {

namespace {

template <class T>
void sort_unique(std::vector<T>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

AuthorClass classify_from(const AuthorRecord& author, std::span<const Affiliation> affs,
                          const std::vector<Country>& countries) {
    if (countries.size() >= 2) return AuthorClass::IM;
    std::vector<std::string_view> insts;
    for (auto i : author.affs) insts.push_back(affs[i].inst_id);
    sort_unique(insts);
    return insts.size() >= 2 ? AuthorClass::NM : AuthorClass::S;
}

CountryAuthorClass combine(AuthorClass base, bool domestic) {
    switch (base) {
        case AuthorClass::NM: return domestic ? CountryAuthorClass::NM_Domestic : CountryAuthorClass::NM_Foreign;
        case AuthorClass::IM: return domestic ? CountryAuthorClass::IM_Domestic : CountryAuthorClass::IM_Foreign;
        case AuthorClass::S: break;
    }
    return domestic ? CountryAuthorClass::S_Domestic : CountryAuthorClass::S_Foreign;
}

}  // namespace

std::string_view to_string(AuthorClass c) {
    switch (c) {
        case AuthorClass::S: return "S";
        case AuthorClass::NM: return "NM";
        case AuthorClass::IM: return "IM";
    }
    return "?";
}

std::string_view to_string(CountryAuthorClass c) {
    switch (c) {
        case CountryAuthorClass::NM_Domestic: return "NM_Domestic";
        case CountryAuthorClass::NM_Foreign: return "NM_Foreign";
        case CountryAuthorClass::IM_Domestic: return "IM_Domestic";
        case CountryAuthorClass::IM_Foreign: return "IM_Foreign";
        case CountryAuthorClass::S_Domestic: return "S_Domestic";
        case CountryAuthorClass::S_Foreign: return "S_Foreign";
    }
    return "?";
}

AuthorClass base_class(CountryAuthorClass c) {
    switch (c) {
        case CountryAuthorClass::NM_Domestic:
        case CountryAuthorClass::NM_Foreign: return AuthorClass::NM;
        case CountryAuthorClass::IM_Domestic:
        case CountryAuthorClass::IM_Foreign: return AuthorClass::IM;
        default: return AuthorClass::S;
    }
}

bool is_domestic(CountryAuthorClass c) {
    return c == CountryAuthorClass::NM_Domestic || c == CountryAuthorClass::IM_Domestic ||
           c == CountryAuthorClass::S_Domestic;
}

std::vector<Country> author_countries(const AuthorRecord& author, std::span<const Affiliation> affs) {
    std::vector<Country> out;
    for (auto i : author.affs) out.push_back(affs[i].country);
    sort_unique(out);
    return out;
}

std::vector<Country> publication_countries(const Publication& pub) {
    std::vector<Country> out;
    for (const auto& a : pub.affiliations) out.push_back(a.country);
    sort_unique(out);
    return out;
}

AuthorClass classify_author(const AuthorRecord& author, std::span<const Affiliation> affs) {
    return classify_from(author, affs, author_countries(author, affs));
}

PubClass classify_publication(const Publication& pub) {
    PubClass out;
    for (const auto& a : pub.authors) {
        auto c = classify_author(a, pub.affiliations);
        out.has_nm |= c == AuthorClass::NM;
        out.has_im |= c == AuthorClass::IM;
    }
    return out;
}

CountryAuthorClass classify_author_for_country(const AuthorRecord& author, std::span<const Affiliation> affs,
                                               Country country) {
    auto countries = author_countries(author, affs);
    const bool domestic = std::binary_search(countries.begin(), countries.end(), country);
    return combine(classify_from(author, affs, countries), domestic);
}

DomesticFlags domestic_flags(const Publication& pub, Country country) {
    DomesticFlags f;
    for (const auto& a : pub.authors) {
        auto c = classify_author_for_country(a, pub.affiliations, country);
        f.p_nm_domestic |= c == CountryAuthorClass::NM_Domestic;
        f.p_im_domestic |= c == CountryAuthorClass::IM_Domestic;
    }
    return f;
}

ForeignFlags foreign_flags(const Publication& pub, Country country) {
    ForeignFlags f;
    for (const auto& a : pub.authors) {
        auto c = classify_author_for_country(a, pub.affiliations, country);
        f.p_nm_foreign |= c == CountryAuthorClass::NM_Foreign;
        f.p_im_foreign |= c == CountryAuthorClass::IM_Foreign;
    }
    return f;
}

bool PublicationProfile::has_country(Country c) const {
    return std::binary_search(countries.begin(), countries.end(), c);
}

bool PublicationProfile::has_institution(std::string_view inst_id) const {
    return std::binary_search(institutions.begin(), institutions.end(), inst_id);
}

DomesticFlags PublicationProfile::domestic(Country c) const {
    DomesticFlags f;
    for (const auto& a : authors) {
        if (!std::binary_search(a.countries.begin(), a.countries.end(), c)) continue;
        f.p_nm_domestic |= a.cls == AuthorClass::NM;
        f.p_im_domestic |= a.cls == AuthorClass::IM;
    }
    return f;
}

PublicationProfile profile(const Publication& pub) {
    PublicationProfile p;
    p.pub = &pub;
    for (const auto& a : pub.authors) {
        auto countries = author_countries(a, pub.affiliations);
        auto cls = classify_from(a, pub.affiliations, countries);
        p.cls.has_nm |= cls == AuthorClass::NM;
        p.cls.has_im |= cls == AuthorClass::IM;
        p.authors.push_back({cls, std::move(countries)});
    }
    p.countries = publication_countries(pub);
    for (const auto& a : pub.affiliations) p.institutions.push_back(a.inst_id);
    sort_unique(p.institutions);
    return p;
}

std::vector<PublicationProfile> profile_all(std::span<const Publication> pubs) {
    std::vector<PublicationProfile> out;
    out.reserve(pubs.size());
    for (const auto& p : pubs) out.push_back(profile(p));
    return out;
}

}  // namespace multiaff::classify
