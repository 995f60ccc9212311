#pragma once

// Deterministic synthetic corpora and NB2 responses for tests and demos.
//
// Randomness comes from SplitMix64 (Steele, Lea & Flood 2014): a 64-bit
// Weyl sequence with increment 0x9E3779B97F4A7C15 passed through the
// variant-13 finaliser. Streams are split per item: item i of a run seeded
// with s draws from SplitMix64(mix(s) ^ mix(i + 1)), so output does not depend
// on generation order or thread count.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "multiaff/codes.hpp"
#include "multiaff/ingest.hpp"

namespace multiaff::synth {

class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return mix(state_ += kGamma); }

    // Independent stream for item `index` of a run seeded with `seed`.
    static SplitMix64 stream(std::uint64_t seed, std::uint64_t index) {
        return SplitMix64(mix(seed) ^ mix(index + 1));
    }

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
    std::uint64_t state_;
};

struct CountrySpec {
    Country country;
    double weight = 0;  // probability of being a publication's home country
    double p_nm = 0;    // probability a publication gets an NM author in this country
    double p_im = 0;    // probability a publication gets an IM author anchored here
};

struct SynthSpec {
    std::size_t n_pubs = 1000;
    std::vector<std::pair<Discipline, double>> discipline_mix;
    std::vector<CountrySpec> countries;
    std::vector<double> author_weights;  // entry k: probability of k+1 authors (at most 15 entries)
    double refs_mean = 35.0;
    double p_collaborative = 1.0;
    double p_foreign_coauthor = 0.2;
    int institutions_per_country = 20;
    // Named as the design columns: intercept, NM_mark, IM_mark, N_refs, N_ins, N_c, N_a.
    std::array<double, 7> beta{0.5, 0.15, 0.10, 0.01, 0.03, 0.08, 0.04};
    double alpha = 0.8;
    std::uint64_t seed = 0;

    // Uniform disciplines, the 12 sample countries, 1..15 authors.
    static SynthSpec defaults();
    // Throws InvalidInput.
    void validate() const;
};

std::vector<ingest::Publication> gen_corpus(const SynthSpec& spec);

void write_records(std::ostream& out, const std::vector<ingest::Publication>& pubs);

// y_i ~ Poisson(lambda_i), lambda_i ~ Gamma(1/alpha, alpha mu_i) for alpha > 0,
// else Poisson(mu_i); mu = exp(x beta).
std::vector<std::int64_t> gen_nb_counts(const Eigen::MatrixXd& x, const Eigen::VectorXd& beta, double alpha,
                                        std::uint64_t seed);

// One NB2 draw with mean mu.
std::int64_t draw_nb2(SplitMix64& rng, double mu, double alpha);

// n x 3 design: intercept, Bernoulli(0.5) indicator, standard normal.
Eigen::MatrixXd gen_simple_design(Eigen::Index n, std::uint64_t seed);

}  // namespace multiaff::synth
