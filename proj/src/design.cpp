#include "multiaff/design.hpp"

#include "multiaff/error.hpp"

namespace multiaff::nbrm {

RegressionInput build_design(std::span<const classify::PublicationProfile> corpus, Discipline discipline,
                             std::optional<Country> country, const DesignOptions& options) {
    std::vector<const classify::PublicationProfile*> rows;
    for (const auto& p : corpus) {
        if (p.pub->discipline != discipline) continue;
        if (static_cast<int>(p.pub->authors.size()) > options.max_authors) continue;
        if (country && !p.has_country(*country)) continue;
        rows.push_back(&p);
    }

    RegressionInput in;
    in.columns = kDesignColumns;
    const auto n = static_cast<Eigen::Index>(rows.size());
    in.y.resize(n);
    in.x.resize(n, static_cast<Eigen::Index>(kDesignColumns.size()));
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& p = *rows[static_cast<std::size_t>(i)];
        bool nm = p.cls.has_nm, im = p.cls.has_im;
        if (country) {
            const auto f = p.domestic(*country);
            nm = f.p_nm_domestic;
            im = f.p_im_domestic;
        }
        in.y[i] = static_cast<double>(ingest::compute_tc(*p.pub, options.citation_window));
        in.x.row(i) << 1.0, nm ? 1.0 : 0.0, im ? 1.0 : 0.0, static_cast<double>(p.pub->n_refs),
            static_cast<double>(p.institutions.size()), static_cast<double>(p.countries.size()),
            static_cast<double>(p.pub->authors.size());
    }
    if (auto problem = fit_size_problem(in, options)) throw InsufficientData(*problem);
    return in;
}

std::optional<std::string> fit_size_problem(const RegressionInput& input, const DesignOptions& options) {
    const auto n = static_cast<std::size_t>(input.n_obs());
    if (n < options.min_rows)
        return "only " + std::to_string(n) + " rows (minimum " + std::to_string(options.min_rows) + ")";
    for (Eigen::Index j = 0; j < input.x.cols(); ++j) {
        const auto& name = input.columns[static_cast<std::size_t>(j)];
        if (name != "NM_mark" && name != "IM_mark") continue;
        const auto pos = static_cast<std::size_t>((input.x.col(j).array() > 0).count());
        if (pos < options.min_mark_positives)
            return name + " has " + std::to_string(pos) + " positive rows (minimum " +
                   std::to_string(options.min_mark_positives) + ")";
    }
    return std::nullopt;
}

}  // namespace multiaff::nbrm
