#pragma once

// Batch of per-discipline (optionally per-country) NB2 fits rendered as
// percent-change effect tables.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "multiaff/classify.hpp"
#include "multiaff/design.hpp"
#include "multiaff/inference.hpp"
#include "multiaff/nb2.hpp"

namespace multiaff::nbrm {

struct TableCell {
    Discipline discipline;
    std::optional<Country> country;
    std::optional<FitResult> fit;  // set when the fit ran
    std::optional<VifReport> vif;
    std::string skip_reason;       // non-empty when skipped or failed

    bool ok() const { return fit && fit->converged && skip_reason.empty(); }
};

struct EffectTable {
    std::vector<Discipline> disciplines;
    std::vector<Country> countries;  // empty: global mode
    std::vector<TableCell> cells;    // discipline-major, then country
};

struct TableOptions {
    DesignOptions design;
    FitOptions fit;
    unsigned threads = 1;
};

// Never throws for a single cell; failures are recorded as skip reasons.
EffectTable run_table(std::span<const classify::PublicationProfile> corpus, std::span<const Discipline> disciplines,
                      std::span<const Country> countries, const TableOptions& options = {});

std::size_t successful_fits(const EffectTable& table);

// "16.9***" style cell.
std::string effect_cell(const FitResult& fit, std::size_t column);

// Global layout: field,discipline,NM_mark,IM_mark,N_refs,N_ins,N_c,N_a,McFadden_R2,status
std::string format_table4(const EffectTable& table);
// Country layout: discipline then NM_mark/IM_mark pairs per country.
std::string format_table5(const EffectTable& table);

// Per-fit JSON document (pretty printed, trailing newline).
std::string fit_json(const TableCell& cell);
// File stem for a cell's JSON, e.g. "CHE" or "CHE_FR".
std::string fit_name(const TableCell& cell);

}  // namespace multiaff::nbrm
