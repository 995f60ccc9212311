#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "multiaff/classify.hpp"
#include "multiaff/nb2.hpp"

namespace multiaff::nbrm {

// Column order of every design built from a corpus.
inline const std::vector<std::string> kDesignColumns = {"intercept", "NM_mark", "IM_mark", "N_refs",
                                                        "N_ins",     "N_c",     "N_a"};

struct DesignOptions {
    int max_authors = 10;
    int citation_window = 3;
    std::size_t min_rows = 50;
    std::size_t min_mark_positives = 5;
};

// One row per publication of `discipline` with at most max_authors authors.
// Marks are the global has_nm/has_im flags, or the country's domestic flags
// when `country` is given (rows then restricted to publications listing it).
// Throws InsufficientData when the result is below the minimum fit size.
RegressionInput build_design(std::span<const classify::PublicationProfile> corpus, Discipline discipline,
                             std::optional<Country> country, const DesignOptions& options = {});

// Reason the input is too small to fit, or nullopt.
std::optional<std::string> fit_size_problem(const RegressionInput& input, const DesignOptions& options);

}  // namespace multiaff::nbrm
