#include "multiaff/synth.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>

#include "multiaff/error.hpp"

namespace multiaff::synth {

using ingest::Affiliation;
using ingest::AuthorRecord;
using ingest::OrgType;
using ingest::Publication;

namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

void check_mix(double sum, const char* what) {
    if (std::abs(sum - 1.0) > 1e-6) throw InvalidInput(std::string(what) + " must sum to 1");
}

struct Institution {
    std::string id;
    std::string name;
    Country country;
    OrgType type;
};

Institution institution(Country c, int k) {
    char id[16];
    std::snprintf(id, sizeof id, "%s-%03d", c.str().c_str(), k);
    static constexpr OrgType kTypes[] = {OrgType::university, OrgType::hospital, OrgType::college, OrgType::other};
    return {id, c.str() + " Institute " + std::to_string(k), c, kTypes[k % 4]};
}

// Affiliation list builder keyed by institution id.
struct AffList {
    std::vector<Affiliation> affs;

    std::size_t index_of(const Institution& inst) {
        for (std::size_t i = 0; i < affs.size(); ++i)
            if (affs[i].inst_id == inst.id) return i;
        affs.push_back({inst.id, inst.name, inst.country, inst.type});
        return affs.size() - 1;
    }
};

}  // namespace

SynthSpec SynthSpec::defaults() {
    SynthSpec s;
    for (auto d : default_disciplines()) s.discipline_mix.emplace_back(d, 1.0 / kDisciplineCount);
    const auto cs = default_countries();
    for (auto c : cs) s.countries.push_back({c, 1.0 / static_cast<double>(cs.size()), 0.3, 0.15});
    double total = 0;
    for (int k = 0; k < 15; ++k) total += std::pow(0.75, k);
    for (int k = 0; k < 15; ++k) s.author_weights.push_back(std::pow(0.75, k) / total);
    return s;
}

void SynthSpec::validate() const {
    if (n_pubs == 0) throw InvalidInput("n_pubs must be positive");
    if (discipline_mix.empty()) throw InvalidInput("discipline mix is empty");
    double sum = 0;
    for (const auto& [d, w] : discipline_mix) {
        if (!is_probability(w)) throw InvalidInput("discipline weights must be in [0,1]");
        sum += w;
    }
    check_mix(sum, "discipline mix");
    if (countries.empty()) throw InvalidInput("no countries configured");
    sum = 0;
    bool any_im = false;
    for (const auto& c : countries) {
        if (!is_probability(c.weight) || !is_probability(c.p_nm) || !is_probability(c.p_im))
            throw InvalidInput("country probabilities must be in [0,1]");
        sum += c.weight;
        any_im |= c.p_im > 0;
    }
    check_mix(sum, "country weights");
    if ((any_im || p_foreign_coauthor > 0) && countries.size() < 2)
        throw InvalidInput("international authorship needs at least two countries");
    if (author_weights.empty() || author_weights.size() > 15)
        throw InvalidInput("author weights must cover 1..15 authors at most");
    sum = 0;
    for (double w : author_weights) {
        if (!is_probability(w)) throw InvalidInput("author weights must be in [0,1]");
        sum += w;
    }
    check_mix(sum, "author weights");
    if (!(refs_mean >= 0) || !std::isfinite(refs_mean)) throw InvalidInput("refs_mean must be non-negative");
    if (!is_probability(p_collaborative) || !is_probability(p_foreign_coauthor))
        throw InvalidInput("probabilities must be in [0,1]");
    if (institutions_per_country < 2 || institutions_per_country > 999)
        throw InvalidInput("institutions_per_country must be in [2,999]");
    if (!(alpha >= 0) || !std::isfinite(alpha)) throw InvalidInput("alpha must be non-negative");
    for (double b : beta)
        if (!std::isfinite(b)) throw InvalidInput("beta must be finite");
}

std::int64_t draw_nb2(SplitMix64& rng, double mu, double alpha) {
    if (!std::isfinite(mu) || mu < 0) throw InvalidInput("non-finite mean in NB2 draw");
    double lambda = mu;
    if (alpha > 0) lambda = std::gamma_distribution<double>(1.0 / alpha, alpha * mu)(rng);
    if (lambda <= 0) return 0;
    return std::poisson_distribution<std::int64_t>(lambda)(rng);
}

std::vector<std::int64_t> gen_nb_counts(const Eigen::MatrixXd& x, const Eigen::VectorXd& beta, double alpha,
                                        std::uint64_t seed) {
    if (!(alpha >= 0)) throw InvalidInput("alpha must be non-negative");
    if (x.cols() != beta.size()) throw InvalidInput("beta length does not match design");
    const Eigen::VectorXd eta = x * beta;
    std::vector<std::int64_t> y(static_cast<std::size_t>(x.rows()));
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const double mu = std::exp(eta[i]);
        if (!std::isfinite(mu)) throw InvalidInput("non-finite mean");
        auto rng = SplitMix64::stream(seed, static_cast<std::uint64_t>(i));
        y[static_cast<std::size_t>(i)] = draw_nb2(rng, mu, alpha);
    }
    return y;
}

Eigen::MatrixXd gen_simple_design(Eigen::Index n, std::uint64_t seed) {
    Eigen::MatrixXd x(n, 3);
    for (Eigen::Index i = 0; i < n; ++i) {
        // Offset keeps these streams apart from gen_nb_counts with the same seed.
        auto rng = SplitMix64::stream(seed ^ 0xD1B54A32D192ED03ULL, static_cast<std::uint64_t>(i));
        x(i, 0) = 1.0;
        x(i, 1) = std::bernoulli_distribution(0.5)(rng) ? 1.0 : 0.0;
        x(i, 2) = std::normal_distribution<double>(0.0, 1.0)(rng);
    }
    return x;
}

std::vector<Publication> gen_corpus(const SynthSpec& spec) {
    spec.validate();
    std::vector<double> dweights, cweights;
    for (const auto& [d, w] : spec.discipline_mix) dweights.push_back(w);
    for (const auto& c : spec.countries) cweights.push_back(c.weight);

    std::vector<Publication> out;
    out.reserve(spec.n_pubs);
    for (std::size_t i = 0; i < spec.n_pubs; ++i) {
        auto rng = SplitMix64::stream(spec.seed, i);
        auto pick_country = [&](std::optional<std::size_t> exclude) {
            std::vector<double> w = cweights;
            if (exclude) {
                w[*exclude] = 0;
                if (std::accumulate(w.begin(), w.end(), 0.0) <= 0)
                    for (std::size_t k = 0; k < w.size(); ++k) w[k] = k == *exclude ? 0.0 : 1.0;
            }
            return std::discrete_distribution<std::size_t>(w.begin(), w.end())(rng);
        };
        auto pick_inst = [&](std::size_t /*country*/, std::optional<int> avoid) {
            const int n = spec.institutions_per_country;
            int k = std::uniform_int_distribution<int>(0, avoid ? n - 2 : n - 1)(rng);
            if (avoid && k >= *avoid) ++k;
            return k;
        };

        Publication pub;
        pub.id = "SYN" + std::to_string(i);
        pub.discipline =
            spec.discipline_mix[std::discrete_distribution<std::size_t>(dweights.begin(), dweights.end())(rng)].first;
        pub.year = 2013 + std::uniform_int_distribution<int>(0, 2)(rng);
        pub.doc_type = std::bernoulli_distribution(0.9)(rng) ? ingest::DocType::Article : ingest::DocType::Review;

        const std::size_t home = pick_country(std::nullopt);
        const auto& hs = spec.countries[home];
        std::size_t n_authors =
            1 + std::discrete_distribution<std::size_t>(spec.author_weights.begin(), spec.author_weights.end())(rng);
        const bool collaborative = std::bernoulli_distribution(spec.p_collaborative)(rng);
        if (collaborative && n_authors < 2) n_authors = 2;

        // Primary (country, institution) per author.
        std::vector<std::pair<std::size_t, int>> primary(n_authors);
        primary[0] = {home, pick_inst(home, std::nullopt)};
        for (std::size_t a = 1; a < n_authors; ++a) {
            if (!collaborative) {
                primary[a] = primary[0];
                continue;
            }
            std::size_t c = home;
            if (std::bernoulli_distribution(spec.p_foreign_coauthor)(rng)) c = pick_country(home);
            const bool must_differ = a == 1 && c == home;
            primary[a] = {c, pick_inst(c, must_differ ? std::optional<int>(primary[0].second) : std::nullopt)};
        }

        const bool add_nm = collaborative && std::bernoulli_distribution(hs.p_nm)(rng);
        const bool add_im = collaborative && std::bernoulli_distribution(hs.p_im)(rng);

        AffList affs;
        for (std::size_t a = 0; a < n_authors; ++a) {
            AuthorRecord author;
            author.name = "Author " + std::to_string(i) + "." + std::to_string(a);
            const auto [c, k] = primary[a];
            author.affs.push_back(affs.index_of(institution(spec.countries[c].country, k)));
            if (a == 0 && add_nm)
                author.affs.push_back(affs.index_of(institution(hs.country, pick_inst(home, k))));
            if (a == 1 && add_im) {
                const std::size_t other = pick_country(c);
                author.affs.push_back(
                    affs.index_of(institution(spec.countries[other].country, pick_inst(other, std::nullopt))));
            }
            pub.authors.push_back(std::move(author));
        }
        pub.affiliations = std::move(affs.affs);
        pub.n_refs = std::poisson_distribution<std::int64_t>(spec.refs_mean)(rng);

        // Response from the same covariates the regression will see.
        std::vector<std::string_view> insts;
        std::vector<Country> countries;
        for (const auto& a : pub.affiliations) {
            if (std::find(insts.begin(), insts.end(), a.inst_id) == insts.end()) insts.push_back(a.inst_id);
            if (std::find(countries.begin(), countries.end(), a.country) == countries.end())
                countries.push_back(a.country);
        }
        const bool im_author = add_im;
        const bool nm_author = add_nm;
        const std::array<double, 7> x = {1.0,
                                         nm_author ? 1.0 : 0.0,
                                         im_author ? 1.0 : 0.0,
                                         static_cast<double>(pub.n_refs),
                                         static_cast<double>(insts.size()),
                                         static_cast<double>(countries.size()),
                                         static_cast<double>(n_authors)};
        double eta = 0;
        for (std::size_t k = 0; k < x.size(); ++k) eta += x[k] * spec.beta[k];
        const std::int64_t tc = draw_nb2(rng, std::exp(eta), spec.alpha);

        // Spread the windowed total over three years, plus one later year.
        const auto y0 = std::binomial_distribution<std::int64_t>(tc, 0.2)(rng);
        const auto y1 = std::binomial_distribution<std::int64_t>(tc - y0, 0.45)(rng);
        const auto y3 = std::poisson_distribution<std::int64_t>(0.4 * static_cast<double>(tc) + 0.1)(rng);
        pub.citations_by_year = std::vector<std::int64_t>{y0, y1, tc - y0 - y1, y3};
        out.push_back(std::move(pub));
    }
    return out;
}

void write_records(std::ostream& out, const std::vector<Publication>& pubs) {
    for (const auto& p : pubs) out << ingest::to_record(p) << '\n';
}

}  // namespace multiaff::synth
