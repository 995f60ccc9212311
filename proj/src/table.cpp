#include "multiaff/table.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "json.hpp"
#include "multiaff/error.hpp"
#include "multiaff/report.hpp"

namespace multiaff::nbrm {

namespace {

constexpr int kJsonDigits = 10;
const std::string kSkip = "SKIP";

void run_cell(std::span<const classify::PublicationProfile> corpus, TableCell& cell, const TableOptions& options) {
    try {
        const auto input = build_design(corpus, cell.discipline, cell.country, options.design);
        cell.fit = nb2_fit(input, options.fit);
        if (!cell.fit->converged) cell.skip_reason = "did not converge";
        try {
            cell.vif = vif(input);
        } catch (const Error&) {
        }
    } catch (const Error& e) {
        cell.skip_reason = e.what();
    }
}

nlohmann::ordered_json num(double x) {
    if (!std::isfinite(x)) return nullptr;
    return report::round_significant(x, kJsonDigits);
}

template <class Vec>
nlohmann::ordered_json num_array(const Vec& v) {
    auto a = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(num(v[i]));
    return a;
}

}  // namespace

EffectTable run_table(std::span<const classify::PublicationProfile> corpus, std::span<const Discipline> disciplines,
                      std::span<const Country> countries, const TableOptions& options) {
    EffectTable table;
    table.disciplines.assign(disciplines.begin(), disciplines.end());
    table.countries.assign(countries.begin(), countries.end());
    for (auto d : disciplines) {
        if (countries.empty()) table.cells.push_back({d, std::nullopt, {}, {}, {}});
        for (auto c : countries) table.cells.push_back({d, c, {}, {}, {}});
    }

    const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, table.cells.size()));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < table.cells.size(); i = next++) run_cell(corpus, table.cells[i], options);
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    return table;
}

std::size_t successful_fits(const EffectTable& table) {
    std::size_t n = 0;
    for (const auto& c : table.cells) n += c.ok();
    return n;
}

std::string effect_cell(const FitResult& fit, std::size_t column) {
    const auto k = static_cast<Eigen::Index>(column);
    return report::format_fixed(fit.pct_change[k], 1) + fit.stars[column];
}

std::string format_table4(const EffectTable& table) {
    std::vector<std::string> header = {"field", "discipline"};
    for (std::size_t j = 1; j < kDesignColumns.size(); ++j) header.push_back(kDesignColumns[j]);
    header.push_back("McFadden_R2");
    header.push_back("status");
    std::string out = report::csv_row(header);
    for (const auto& cell : table.cells) {
        std::vector<std::string> row = {std::string(map_field(cell.discipline)), std::string(code(cell.discipline))};
        for (std::size_t j = 1; j < kDesignColumns.size(); ++j)
            row.push_back(cell.ok() ? effect_cell(*cell.fit, j) : kSkip);
        row.push_back(cell.ok() ? report::format_fixed(cell.fit->pseudo_r2, 2) : kSkip);
        row.push_back(cell.ok() ? "ok" : "skipped: " + cell.skip_reason);
        out += report::csv_row(row);
    }
    return out;
}

std::string format_table5(const EffectTable& table) {
    std::vector<std::string> header = {"discipline"};
    for (auto c : table.countries) {
        header.push_back(c.str() + "_NM_mark");
        header.push_back(c.str() + "_IM_mark");
    }
    std::string out = report::csv_row(header);
    const std::size_t nc = table.countries.size();
    for (std::size_t d = 0; d < table.disciplines.size(); ++d) {
        std::vector<std::string> row = {std::string(code(table.disciplines[d]))};
        for (std::size_t c = 0; c < nc; ++c) {
            const auto& cell = table.cells[d * nc + c];
            row.push_back(cell.ok() ? effect_cell(*cell.fit, 1) : kSkip);
            row.push_back(cell.ok() ? effect_cell(*cell.fit, 2) : kSkip);
        }
        out += report::csv_row(row);
    }
    return out;
}

std::string fit_name(const TableCell& cell) {
    std::string name(code(cell.discipline));
    if (cell.country) name += "_" + cell.country->str();
    return name;
}

std::string fit_json(const TableCell& cell) {
    nlohmann::ordered_json j;
    j["discipline"] = code(cell.discipline);
    j["country"] = cell.country ? nlohmann::ordered_json(cell.country->str()) : nlohmann::ordered_json(nullptr);
    j["status"] = cell.ok() ? "ok" : "skipped";
    if (!cell.skip_reason.empty()) j["reason"] = cell.skip_reason;
    if (cell.fit) {
        const auto& f = *cell.fit;
        j["columns"] = f.columns;
        j["beta"] = num_array(f.beta);
        j["alpha"] = num(f.alpha);
        j["se"] = num_array(f.se);
        j["z"] = num_array(f.z);
        j["p"] = num_array(f.p);
        j["stars"] = f.stars;
        j["pct_change"] = num_array(f.pct_change);
        j["loglik"] = num(f.loglik);
        j["loglik_null"] = num(f.loglik_null);
        j["pseudo_r2"] = num(f.pseudo_r2);
        j["n_obs"] = f.n_obs;
        j["converged"] = f.converged;
        j["iterations"] = f.iterations;
        auto v = nlohmann::ordered_json::object();
        if (cell.vif)
            for (std::size_t k = 0; k < cell.vif->columns.size(); ++k)
                v[cell.vif->columns[k]] = cell.vif->vif[k] ? num(*cell.vif->vif[k]) : nlohmann::ordered_json("collinear");
        j["vif"] = v;
    }
    return j.dump(2) + "\n";
}

}  // namespace multiaff::nbrm
