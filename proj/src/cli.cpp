#include "multiaff/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "multiaff/classify.hpp"
#include "multiaff/error.hpp"
#include "multiaff/ingest.hpp"
#include "multiaff/report.hpp"
#include "multiaff/shares.hpp"
#include "multiaff/synth.hpp"
#include "multiaff/table.hpp"

namespace multiaff::cli {

namespace fs = std::filesystem;

namespace {

// Raised for conditions that map straight onto an exit code.
struct Exit {
    int code;
    std::string message;
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<Country> parse_countries(const std::string& s) {
    std::vector<Country> out;
    for (const auto& c : split_list(s)) {
        auto parsed = Country::parse(c);
        if (!parsed) throw Exit{kUsageOrIo, "unknown country code '" + c + "'"};
        out.push_back(*parsed);
    }
    return out;
}

std::vector<Discipline> parse_disciplines(const std::string& s) {
    std::vector<Discipline> out;
    for (const auto& d : split_list(s)) {
        auto parsed = parse_discipline(d);
        if (!parsed) throw Exit{kUsageOrIo, "unknown discipline code '" + d + "'"};
        out.push_back(*parsed);
    }
    return out;
}

// "KEY=value,KEY=value"
std::vector<std::pair<std::string, double>> parse_assignments(const std::string& s) {
    std::vector<std::pair<std::string, double>> out;
    for (const auto& item : split_list(s)) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw Exit{kUsageOrIo, "expected KEY=value, got '" + item + "'"};
        try {
            out.emplace_back(item.substr(0, eq), std::stod(item.substr(eq + 1)));
        } catch (const std::exception&) {
            throw Exit{kUsageOrIo, "bad number in '" + item + "'"};
        }
    }
    return out;
}

std::vector<double> parse_numbers(const std::string& s) {
    std::vector<double> out;
    for (const auto& item : split_list(s)) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw Exit{kUsageOrIo, "bad number '" + item + "'"};
        }
    }
    return out;
}

ingest::Corpus load_corpus(const RunConfig& cfg, std::ostream& err, bool warn_qc = true) {
    if (cfg.input.empty()) throw Exit{kUsageOrIo, "--input is required"};
    std::ifstream in(cfg.input, std::ios::binary);
    if (!in) throw Exit{kUsageOrIo, "cannot open input " + cfg.input.string()};
    auto corpus = ingest::parse_corpus(in, {cfg.threads, cfg.citation_window});
    if (warn_qc && !corpus.qc.empty())
        err << "warning: " << corpus.qc.size() << " record(s) rejected; run `validate` for the QC report\n";
    return corpus;
}

void ensure_outdir(const fs::path& dir) {
    if (dir.empty()) throw Exit{kUsageOrIo, "--outdir is required"};
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Exit{kUsageOrIo, "cannot create " + dir.string() + ": " + ec.message()};
}

// Drops requested countries that never occur, with a warning.
std::vector<Country> present_countries(std::span<const classify::PublicationProfile> profiles,
                                       const std::vector<Country>& wanted, std::ostream& err) {
    std::vector<Country> out;
    for (auto c : wanted) {
        const bool present = std::any_of(profiles.begin(), profiles.end(), [&](const auto& p) { return p.has_country(c); });
        if (present) out.push_back(c);
        else err << "warning: country " << c.str() << " is absent from the corpus; skipped\n";
    }
    return out;
}

std::string bit(bool b) { return b ? "1" : "0"; }

// ---------------------------------------------------------------- commands

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    auto corpus = load_corpus(cfg, err, false);
    std::ostringstream csv;
    ingest::write_qc_csv(csv, corpus.qc);
    if (cfg.outdir.empty()) {
        out << csv.str();
    } else {
        ensure_outdir(cfg.outdir);
        report::write_file_atomic(cfg.outdir / "qc.csv", csv.str());
    }
    if (corpus.publications.empty() && corpus.qc.empty()) {
        err << "error: empty corpus\n";
        return kValidationFailure;
    }
    err << corpus.publications.size() << " valid, " << corpus.qc.size() << " rejected\n";
    return corpus.qc.empty() ? kSuccess : kValidationFailure;
}

int cmd_classify(const RunConfig& cfg, const std::vector<Country>& countries, std::ostream& out, std::ostream& err) {
    const auto corpus = ingest::filter_collaborative(load_corpus(cfg, err));
    std::vector<std::string> header = {"pub_id", "discipline", "has_nm", "has_im"};
    if (!countries.empty()) header.insert(header.end(), {"country", "p_nm_domestic", "p_im_domestic"});
    std::string csv = report::csv_row(header);
    for (const auto& pub : corpus.publications) {
        const auto cls = classify::classify_publication(pub);
        std::vector<std::string> base = {pub.id, std::string(code(pub.discipline)), bit(cls.has_nm), bit(cls.has_im)};
        if (countries.empty()) {
            csv += report::csv_row(base);
            continue;
        }
        for (auto c : countries) {
            const auto f = classify::domestic_flags(pub, c);
            auto row = base;
            row.insert(row.end(), {c.str(), bit(f.p_nm_domestic), bit(f.p_im_domestic)});
            csv += report::csv_row(row);
        }
    }
    if (cfg.outdir.empty()) {
        out << csv;
    } else {
        ensure_outdir(cfg.outdir);
        report::write_file_atomic(cfg.outdir / "classify.csv", csv);
    }
    if (corpus.publications.empty()) {
        err << "warning: no collaborative publications\n";
        return kNothingComputable;
    }
    return kSuccess;
}

std::string pct_or_na(const shares::ShareCell& c) {
    return c.defined() ? report::format_percent(c.numerator, c.denominator) : "NA";
}

std::string share_matrix_csv(const shares::ShareMatrix& m) {
    std::vector<std::string> header = {"country"};
    for (auto d : m.cols) header.emplace_back(code(d));
    std::string csv = report::csv_row(header);
    for (std::size_t r = 0; r < m.rows.size(); ++r) {
        std::vector<std::string> row = {m.rows[r].str()};
        for (const auto& c : m.cells[r]) row.push_back(pct_or_na(c));
        csv += report::csv_row(row);
    }
    std::vector<std::string> world = {"WORLD"};
    for (const auto& c : m.baseline) world.push_back(pct_or_na(c));
    return csv + report::csv_row(world);
}

std::string ratio_matrix_csv(const shares::RatioMatrix& m) {
    std::vector<std::string> header = {"country"};
    for (auto d : m.cols) header.emplace_back(code(d));
    std::string csv = report::csv_row(header);
    for (std::size_t r = 0; r < m.rows.size(); ++r) {
        std::vector<std::string> row = {m.rows[r].str()};
        for (std::size_t j = 0; j < m.cols.size(); ++j) {
            const auto& q = m.exact[r][j];
            row.push_back(m.ratio[r][j] ? report::format_rational(q.numerator, q.denominator, 2) : "NA");
        }
        csv += report::csv_row(row);
    }
    return csv;
}

int cmd_shares(const RunConfig& cfg, std::ostream& err) {
    ensure_outdir(cfg.outdir);
    const auto corpus = ingest::filter_collaborative(load_corpus(cfg, err));
    const auto profiles = classify::profile_all(corpus.publications);
    if (profiles.empty()) {
        err << "error: no collaborative publications\n";
        return kNothingComputable;
    }
    using shares::Kind;

    const auto summary = shares::corpus_summary(profiles);
    std::string t3 = report::csv_row({"row", "Total", "P_M", "P_NM", "P_IM", "P_NoM"});
    t3 += report::csv_row({"Pubs", std::to_string(summary.total.numerator), std::to_string(summary.p_m.numerator),
                           std::to_string(summary.p_nm.numerator), std::to_string(summary.p_im.numerator),
                           std::to_string(summary.p_nom.numerator)});
    t3 += report::csv_row({"Share", "-", pct_or_na(summary.p_m), pct_or_na(summary.p_nm), pct_or_na(summary.p_im),
                           pct_or_na(summary.p_nom)});
    report::write_file_atomic(cfg.outdir / "table3.csv", t3);

    const auto ds = shares::discipline_shares(profiles, cfg.disciplines);
    for (auto d : ds.omitted) err << "warning: discipline " << code(d) << " has no collaborative publications\n";
    std::string a1 = report::csv_row({"discipline", "share_p_m", "share_p_nm", "share_p_im"});
    for (const auto& r : ds.rows)
        a1 += report::csv_row({std::string(code(r.discipline)), pct_or_na(r.p_m), pct_or_na(r.p_nm), pct_or_na(r.p_im)});
    report::write_file_atomic(cfg.outdir / "tableA1.csv", a1);

    const auto countries = present_countries(profiles, cfg.countries, err);
    const std::pair<Kind, std::string> kinds[] = {{Kind::NM, "nm"}, {Kind::IM, "im"}};
    for (const auto& [kind, tag] : kinds) {
        const auto m = shares::country_discipline_shares(profiles, countries, cfg.disciplines, kind);
        report::write_file_atomic(cfg.outdir / (kind == Kind::NM ? "tableA4.csv" : "tableA5.csv"), share_matrix_csv(m));
        const auto ratios = shares::normalize(m);
        for (std::size_t j = 0; j < ratios.cols.size(); ++j)
            if (!ratios.column_defined[j])
                err << "warning: fig5_" << tag << ": zero baseline for " << code(ratios.cols[j]) << "\n";
        report::write_file_atomic(cfg.outdir / ("fig5_" + tag + ".csv"), ratio_matrix_csv(ratios));
    }

    std::string topk = report::csv_row({"country", "kind", "rank", "inst_id", "inst_name", "count", "share_in_total"});
    for (auto c : countries) {
        for (const auto& [kind, tag] : kinds) {
            const auto ranks = shares::top_institutions(profiles, c, kind, cfg.top_k);
            for (std::size_t i = 0; i < ranks.size(); ++i)
                topk += report::csv_row({c.str(), kind == Kind::NM ? "NM" : "IM", std::to_string(i + 1),
                                         ranks[i].inst_id, ranks[i].inst_name, std::to_string(ranks[i].count),
                                         pct_or_na(ranks[i].share_in_total)});
        }
    }
    report::write_file_atomic(cfg.outdir / "topk.csv", topk);

    const auto hu = shares::hosp_univ_combination_share(profiles, cfg.disciplines);
    if (!hu.computable) err << "warning: no org_type annotations; figA1 not computable\n";
    std::string fa1 = report::csv_row({"discipline", "hospital_multi_pubs", "hospital_univ_pubs", "share"});
    for (const auto& r : hu.rows)
        fa1 += report::csv_row({std::string(code(r.discipline)), std::to_string(r.cell.denominator),
                                std::to_string(r.cell.numerator), hu.computable ? pct_or_na(r.cell) : "not_computable"});
    report::write_file_atomic(cfg.outdir / "figA1.csv", fa1);
    return kSuccess;
}

int cmd_regress(const RunConfig& cfg, const std::vector<Country>& countries, std::ostream& err) {
    ensure_outdir(cfg.outdir);
    const auto corpus = ingest::filter_collaborative(load_corpus(cfg, err));
    const auto profiles = classify::profile_all(corpus.publications);

    nbrm::TableOptions opt;
    opt.design.max_authors = cfg.max_authors;
    opt.design.citation_window = cfg.citation_window;
    opt.design.min_rows = cfg.min_rows;
    opt.design.min_mark_positives = cfg.min_mark_positives;
    opt.threads = cfg.threads;
    const auto table = nbrm::run_table(profiles, cfg.disciplines, countries, opt);

    const fs::path fits = cfg.outdir / "fits";
    ensure_outdir(fits);
    for (const auto& cell : table.cells) {
        report::write_file_atomic(fits / (nbrm::fit_name(cell) + ".json"), nbrm::fit_json(cell));
        if (!cell.ok()) err << "warning: " << nbrm::fit_name(cell) << " skipped: " << cell.skip_reason << "\n";
    }
    if (countries.empty()) report::write_file_atomic(cfg.outdir / "table4.csv", nbrm::format_table4(table));
    else report::write_file_atomic(cfg.outdir / "table5.csv", nbrm::format_table5(table));

    if (nbrm::successful_fits(table) == 0) {
        err << "warning: no cell could be fitted\n";
        return kNothingComputable;
    }
    return kSuccess;
}

struct SynthFlags {
    std::size_t n_pubs = 1000;
    std::string discipline_mix, country_weights, p_nm_country, p_im_country, author_weights, beta;
    double p_nm = 0.3, p_im = 0.15, refs_mean = 35, p_collaborative = 1.0, p_foreign = 0.2, alpha = 0.8;
    int institutions = 20;
    std::string output;
};

int cmd_synth(const RunConfig& cfg, const SynthFlags& f, bool countries_given, bool disciplines_given,
              std::ostream& out) {
    auto spec = synth::SynthSpec::defaults();
    spec.n_pubs = f.n_pubs;
    spec.seed = cfg.seed;
    spec.refs_mean = f.refs_mean;
    spec.p_collaborative = f.p_collaborative;
    spec.p_foreign_coauthor = f.p_foreign;
    spec.institutions_per_country = f.institutions;
    spec.alpha = f.alpha;

    if (!f.discipline_mix.empty()) {
        spec.discipline_mix.clear();
        for (const auto& [k, w] : parse_assignments(f.discipline_mix)) {
            auto d = parse_discipline(k);
            if (!d) throw Exit{kUsageOrIo, "unknown discipline code '" + k + "'"};
            spec.discipline_mix.emplace_back(*d, w);
        }
    } else if (disciplines_given) {
        spec.discipline_mix.clear();
        for (auto d : cfg.disciplines)
            spec.discipline_mix.emplace_back(d, 1.0 / static_cast<double>(cfg.disciplines.size()));
    }

    if (countries_given || !f.country_weights.empty()) {
        spec.countries.clear();
        if (!f.country_weights.empty()) {
            for (const auto& [k, w] : parse_assignments(f.country_weights)) {
                auto c = Country::parse(k);
                if (!c) throw Exit{kUsageOrIo, "unknown country code '" + k + "'"};
                spec.countries.push_back({*c, w, 0, 0});
            }
        } else {
            for (auto c : cfg.countries)
                spec.countries.push_back({c, 1.0 / static_cast<double>(cfg.countries.size()), 0, 0});
        }
    }
    for (auto& c : spec.countries) {
        c.p_nm = f.p_nm;
        c.p_im = f.p_im;
    }
    auto override_country = [&](const std::string& s, double synth::CountrySpec::*field) {
        for (const auto& [k, v] : parse_assignments(s)) {
            auto it = std::find_if(spec.countries.begin(), spec.countries.end(),
                                   [&](const auto& c) { return c.country.code() == k; });
            if (it == spec.countries.end()) throw Exit{kUsageOrIo, "country '" + k + "' is not configured"};
            (*it).*field = v;
        }
    };
    override_country(f.p_nm_country, &synth::CountrySpec::p_nm);
    override_country(f.p_im_country, &synth::CountrySpec::p_im);

    if (!f.author_weights.empty()) spec.author_weights = parse_numbers(f.author_weights);
    if (!f.beta.empty()) {
        const auto b = parse_numbers(f.beta);
        if (b.size() != spec.beta.size()) throw Exit{kUsageOrIo, "--beta needs 7 values"};
        std::copy(b.begin(), b.end(), spec.beta.begin());
    }

    const auto pubs = synth::gen_corpus(spec);
    std::ostringstream os;
    synth::write_records(os, pubs);
    if (f.output.empty() || f.output == "-") {
        out << os.str();
    } else {
        const fs::path path(f.output);
        if (path.has_parent_path()) fs::create_directories(path.parent_path());
        report::write_file_atomic(path, os.str());
    }
    return kSuccess;
}

}  // namespace

std::vector<std::string> apply_config(const std::vector<std::string>& args) {
    std::optional<std::string> path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (!path) return args;

    std::ifstream in(*path);
    if (!in) throw Exit{kUsageOrIo, "cannot open config " + *path};
    nlohmann::json cfg;
    try {
        cfg = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Exit{kUsageOrIo, std::string("bad config: ") + e.what()};
    }
    if (!cfg.is_object()) throw Exit{kUsageOrIo, "config must be a JSON object"};

    auto present = [&](const std::string& flag) {
        return std::any_of(args.begin(), args.end(),
                           [&](const auto& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
    };
    auto scalar = [](const nlohmann::json& v) {
        if (v.is_string()) return v.get<std::string>();
        return v.dump();
    };
    std::vector<std::string> out = args;
    for (const auto& [key, value] : cfg.items()) {
        const std::string flag = "--" + key;
        if (key == "config" || present(flag) || value.is_null()) continue;
        if (value.is_boolean()) {
            if (value.get<bool>()) out.push_back(flag);
            continue;
        }
        std::string text;
        if (value.is_array()) {
            for (const auto& v : value) text += (text.empty() ? "" : ",") + scalar(v);
        } else {
            text = scalar(value);
        }
        out.push_back(flag);
        out.push_back(text);
    }
    return out;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    try {
        const auto args = apply_config(raw_args);

        CLI::App app{"Multi-affiliated authorship classification, share statistics and citation regression", "multiaff"};
        app.require_subcommand(1);
        app.set_help_all_flag("--help-all");

        RunConfig cfg;
        std::string input, outdir, countries, disciplines, country, config;
        SynthFlags sf;

        auto add_common = [&](CLI::App* sub) {
            sub->add_option("--input", input, "Line-delimited publication records");
            sub->add_option("--outdir", outdir, "Output directory");
            sub->add_option("--countries", countries, "Comma-separated country codes");
            sub->add_option("--disciplines", disciplines, "Comma-separated discipline codes");
            sub->add_option("--config", config, "JSON file with default flag values");
            sub->add_option("--seed", cfg.seed, "Random seed");
            sub->add_option("--window", cfg.citation_window, "Citation window in years")->check(CLI::PositiveNumber);
            sub->add_option("--threads", cfg.threads, "Worker threads")->check(CLI::PositiveNumber);
        };

        auto* validate = app.add_subcommand("validate", "Check records and emit the QC report");
        add_common(validate);
        auto* classify = app.add_subcommand("classify", "Per-publication multi-affiliation flags");
        add_common(classify);
        classify->add_option("--country", country, "Add domestic flags for these countries");
        auto* shares = app.add_subcommand("shares", "Share tables and normalized matrices");
        add_common(shares);
        shares->add_option("--top-k", cfg.top_k, "Institutions per country in topk.csv")->check(CLI::PositiveNumber);
        auto* regress = app.add_subcommand("regress", "NB2 citation regressions");
        add_common(regress);
        regress->add_option("--country", country, "Country mode: fit per discipline and country");
        regress->add_option("--max-authors", cfg.max_authors, "Drop publications with more authors")
            ->check(CLI::PositiveNumber);
        regress->add_option("--min-rows", cfg.min_rows, "Minimum rows per fit");
        regress->add_option("--min-mark-positives", cfg.min_mark_positives, "Minimum positive rows per mark");
        auto* syn = app.add_subcommand("synth", "Generate a synthetic corpus");
        add_common(syn);
        syn->add_option("--output", sf.output, "Output file (default stdout)");
        syn->add_option("--n-pubs", sf.n_pubs, "Number of publications")->check(CLI::PositiveNumber);
        syn->add_option("--discipline-mix", sf.discipline_mix, "CODE=weight,...");
        syn->add_option("--country-weights", sf.country_weights, "CC=weight,...");
        syn->add_option("--p-nm", sf.p_nm, "Per-publication NM insertion probability");
        syn->add_option("--p-im", sf.p_im, "Per-publication IM insertion probability");
        syn->add_option("--p-nm-country", sf.p_nm_country, "Per-country overrides CC=p,...");
        syn->add_option("--p-im-country", sf.p_im_country, "Per-country overrides CC=p,...");
        syn->add_option("--author-weights", sf.author_weights, "Probabilities of 1..15 authors");
        syn->add_option("--refs-mean", sf.refs_mean, "Mean reference count");
        syn->add_option("--p-collaborative", sf.p_collaborative, "Probability a publication is collaborative");
        syn->add_option("--p-foreign", sf.p_foreign, "Probability a co-author is abroad");
        syn->add_option("--institutions-per-country", sf.institutions, "Institution pool size");
        syn->add_option("--beta", sf.beta, "7 true coefficients");
        syn->add_option("--alpha", sf.alpha, "True NB2 dispersion");

        std::vector<std::string> reversed(args.rbegin(), args.rend());
        try {
            app.parse(reversed);
        } catch (const CLI::CallForHelp&) {
            out << app.help();
            return kSuccess;
        } catch (const CLI::CallForAllHelp&) {
            out << app.help("", CLI::AppFormatMode::All);
            return kSuccess;
        } catch (const CLI::ParseError& e) {
            err << "error: " << e.what() << "\n" << "run with --help for usage\n";
            return kUsageOrIo;
        }

        cfg.input = input;
        cfg.outdir = outdir;
        if (!countries.empty()) cfg.countries = parse_countries(countries);
        if (!disciplines.empty()) cfg.disciplines = parse_disciplines(disciplines);
        const auto country_list = parse_countries(country);

        if (validate->parsed()) return cmd_validate(cfg, out, err);
        if (classify->parsed()) return cmd_classify(cfg, country_list, out, err);
        if (shares->parsed()) return cmd_shares(cfg, err);
        if (regress->parsed()) return cmd_regress(cfg, country_list, err);
        if (syn->parsed()) return cmd_synth(cfg, sf, !countries.empty(), !disciplines.empty(), out);
        return kUsageOrIo;
    } catch (const Exit& e) {
        err << "error: " << e.message << "\n";
        return e.code;
    } catch (const InsufficientData& e) {
        err << "error: " << e.what() << "\n";
        return kNothingComputable;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsageOrIo;
    }
}

}  // namespace multiaff::cli
