#pragma once

// Authorship taxonomy: author classes S/NM/IM, publication flags, and the
// six-way Domestic/Foreign classification from one country's point of view.

#include <span>
#include <string_view>
#include <vector>

#include "multiaff/codes.hpp"
#include "multiaff/ingest.hpp"

namespace multiaff::classify {

using ingest::Affiliation;
using ingest::AuthorRecord;
using ingest::Publication;

enum class AuthorClass { S, NM, IM };

struct PubClass {
    bool has_nm = false;
    bool has_im = false;

    bool multi_affiliated() const { return has_nm || has_im; }  // P_M, else P_NoM
    friend bool operator==(const PubClass&, const PubClass&) = default;
};

enum class CountryAuthorClass { NM_Domestic, NM_Foreign, IM_Domestic, IM_Foreign, S_Domestic, S_Foreign };

struct DomesticFlags {
    bool p_nm_domestic = false;
    bool p_im_domestic = false;
    friend bool operator==(const DomesticFlags&, const DomesticFlags&) = default;
};

struct ForeignFlags {
    bool p_nm_foreign = false;
    bool p_im_foreign = false;
    friend bool operator==(const ForeignFlags&, const ForeignFlags&) = default;
};

std::string_view to_string(AuthorClass c);
std::string_view to_string(CountryAuthorClass c);
AuthorClass base_class(CountryAuthorClass c);
bool is_domestic(CountryAuthorClass c);

// IM if the author's affiliations span two or more countries, else NM if they
// span two or more distinct institutions, else S.
AuthorClass classify_author(const AuthorRecord& author, std::span<const Affiliation> affs);

PubClass classify_publication(const Publication& pub);

// Domestic iff `country` is among the author's affiliation countries.
CountryAuthorClass classify_author_for_country(const AuthorRecord& author, std::span<const Affiliation> affs,
                                               Country country);

DomesticFlags domestic_flags(const Publication& pub, Country country);
ForeignFlags foreign_flags(const Publication& pub, Country country);

// Sorted distinct countries of an author / a whole publication.
std::vector<Country> author_countries(const AuthorRecord& author, std::span<const Affiliation> affs);
std::vector<Country> publication_countries(const Publication& pub);

// Per-publication classification computed once and reused by the aggregation
// and regression code.
struct AuthorProfile {
    AuthorClass cls;
    std::vector<Country> countries;  // sorted, distinct
};

struct PublicationProfile {
    const Publication* pub = nullptr;
    PubClass cls;
    std::vector<AuthorProfile> authors;
    std::vector<Country> countries;            // sorted, distinct
    std::vector<std::string_view> institutions;  // sorted, distinct inst_ids

    bool has_country(Country c) const;
    bool has_institution(std::string_view inst_id) const;
    DomesticFlags domestic(Country c) const;
};

// `pub` must outlive the profile.
PublicationProfile profile(const Publication& pub);
std::vector<PublicationProfile> profile_all(std::span<const Publication> pubs);

}  // namespace multiaff::classify
