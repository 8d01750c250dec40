// Command-line pipeline around the abow library: generate or ingest event
// corpora, fit temporal bins, build augmented bag-of-words documents,
// sample regex features, classify/cluster, and compare methods.
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "abow/corpus.hpp"
#include "abow/encoding.hpp"
#include "abow/error.hpp"
#include "abow/learn.hpp"
#include "abow/pipeline.hpp"
#include "abow/regexgen.hpp"
#include "abow/rng.hpp"
#include "abow/synth.hpp"
#include "abow/temporal.hpp"
#include "json.hpp"

namespace {

using nlohmann::json;

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw abow::input_error("cannot write output file '" + path + "'");
    return out;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw abow::input_error("cannot open input file '" + path + "'");
    return in;
}

json load_json(const std::string& path) {
    std::ifstream in = open_input(path);
    try {
        json j;
        in >> j;
        return j;
    } catch (const json::exception& e) {
        throw abow::input_error("'" + path + "': malformed JSON: " + std::string(e.what()));
    }
}

void write_json(const json& j, const std::string& path) {
    std::ofstream out = open_output(path);
    out << j.dump(2) << '\n';
}

// ------------------------------------------------------------------ flags

struct CorpusOptions {
    std::string input;
    double time_scale = 1.0;
    bool strict_overlap = false;
};

void add_corpus_options(CLI::App* cmd, CorpusOptions& opts) {
    cmd->add_option("-i,--input", opts.input, "corpus JSONL file")->required();
    cmd->add_option("--time-scale", opts.time_scale,
                    "multiply all timestamps at load (e.g. 60 for minutes)");
    cmd->add_flag("--strict-overlap", opts.strict_overlap,
                  "error on negative gaps instead of clamping them to 0");
}

abow::Corpus load_corpus(const CorpusOptions& opts) {
    std::ifstream in = open_input(opts.input);
    return abow::parse_corpus(in, opts.time_scale);
}

struct SchemeOptions {
    std::string scheme = "interspersed";
    std::size_t bins = 2;
    std::size_t gram = 2;
    std::string base = "interspersed";
    std::size_t knn_k = 1;
    std::size_t regex_count = 0;
    double regex_pct = 0.0;
    std::size_t regex_max_attempts = 0;
};

void add_scheme_options(CLI::App* cmd, SchemeOptions& opts, bool with_params = true) {
    cmd->add_option("--scheme", opts.scheme,
                    "encoding: bow, bow_time, interspersed, cumulative, pyramid")
        ->required();
    if (with_params) {
        cmd->add_option("--N", opts.bins, "temporal bin count N (default 2)");
        cmd->add_option("--n", opts.gram, "gram size n (default 2)");
    }
    cmd->add_option("--base", opts.base, "pyramid base scheme (interspersed or cumulative)");
}

void add_regex_options(CLI::App* cmd, SchemeOptions& opts) {
    auto* count = cmd->add_option("--regex-count", opts.regex_count,
                                  "augment with this many accepted regex features");
    auto* pct = cmd->add_option("--regex-pct", opts.regex_pct,
                                "augment the vocabulary by this percentage of regex features");
    count->excludes(pct);
    cmd->add_option("--regex-max-attempts", opts.regex_max_attempts,
                    "cap on sampling attempts (default 200*target + 1000)");
}

abow::SchemeConfig make_config(const SchemeOptions& opts, const CorpusOptions& corpus_opts) {
    abow::SchemeConfig config;
    config.scheme = abow::scheme_from_string(opts.scheme);
    config.bins = opts.bins;
    config.gram = opts.gram;
    config.pyramid_base = abow::scheme_from_string(opts.base);
    config.knn_k = opts.knn_k;
    config.regex_count = opts.regex_count;
    config.regex_pct = opts.regex_pct;
    config.regex_max_attempts = opts.regex_max_attempts;
    config.clamp = corpus_opts.strict_overlap ? abow::ClampPolicy::strict
                                              : abow::ClampPolicy::clamp_to_zero;
    return config;
}

// "3", "1..5" or "1,3,5"
std::vector<std::size_t> parse_range(const std::string& text) {
    std::vector<std::size_t> values;
    const auto parse_int = [&](const std::string& s) {
        try {
            const long v = std::stol(s);
            if (v < 1) throw abow::input_error("range values must be >= 1: '" + text + "'");
            return static_cast<std::size_t>(v);
        } catch (const std::logic_error&) {
            throw abow::input_error("cannot parse range '" + text + "'");
        }
    };
    const auto dots = text.find("..");
    if (dots != std::string::npos) {
        const std::size_t lo = parse_int(text.substr(0, dots));
        const std::size_t hi = parse_int(text.substr(dots + 2));
        if (hi < lo) throw abow::input_error("descending range '" + text + "'");
        for (std::size_t v = lo; v <= hi; ++v) values.push_back(v);
        return values;
    }
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) values.push_back(parse_int(part));
    if (values.empty()) throw abow::input_error("empty range '" + text + "'");
    return values;
}

// ------------------------------------------------------------- reporting

json report_json(const abow::EvalReport& report) {
    json j;
    j["accuracy"] = report.accuracy;
    j["classes"] = report.classes;
    j["confusion"] = report.confusion;
    json per_class = json::array();
    for (std::size_t i = 0; i < report.classes.size(); ++i)
        per_class.push_back({{"class", report.classes[i]},
                             {"precision", report.per_class[i].precision},
                             {"recall", report.per_class[i].recall}});
    j["per_class"] = std::move(per_class);
    return j;
}

void write_confusion_csv(const abow::EvalReport& report, const std::string& path) {
    std::ofstream out = open_output(path);
    out << "class";
    for (const std::string& c : report.classes) out << ',' << c;
    out << '\n';
    for (std::size_t i = 0; i < report.classes.size(); ++i) {
        out << report.classes[i];
        for (std::size_t j = 0; j < report.classes.size(); ++j) out << ',' << report.confusion[i][j];
        out << '\n';
    }
}

// threshold sweep over the top-neighbor similarity, binary tasks only
json roc_points(const abow::EvalOutcome& outcome, const std::string& positive) {
    std::vector<std::pair<double, bool>> scored;  // (score, is positive)
    for (std::size_t i = 0; i < outcome.truth.size(); ++i) {
        const double sim = outcome.loocv.top_similarity[i];
        const double score = outcome.loocv.predictions[i] == positive ? sim : -sim;
        scored.emplace_back(score, outcome.truth[i] == positive);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        return a.first > b.first;
    });
    const double positives = static_cast<double>(
        std::count_if(scored.begin(), scored.end(), [](const auto& s) { return s.second; }));
    const double negatives = static_cast<double>(scored.size()) - positives;
    if (positives == 0.0 || negatives == 0.0) return json::array();

    json points = json::array();
    points.push_back({{"fpr", 0.0}, {"tpr", 0.0}});
    double tp = 0.0, fp = 0.0;
    for (std::size_t i = 0; i < scored.size(); ++i) {
        if (scored[i].second) ++tp;
        else ++fp;
        const bool last_of_threshold = i + 1 == scored.size() || scored[i + 1].first != scored[i].first;
        if (last_of_threshold)
            points.push_back({{"threshold", scored[i].first},
                              {"fpr", fp / negatives},
                              {"tpr", tp / positives}});
    }
    return points;
}

json predictions_json(const abow::EvalOutcome& outcome, const std::string& scheme) {
    json j;
    j["scheme"] = scheme;
    j["ids"] = outcome.ids;
    j["truth"] = outcome.truth;
    j["predictions"] = outcome.loocv.predictions;
    j["top_similarity"] = outcome.loocv.top_similarity;
    return j;
}

std::string fixed(double value, int digits = 4) {
    std::ostringstream ss;
    ss.setf(std::ios::fixed);
    ss.precision(digits);
    ss << value;
    return ss.str();
}

void print_confusion(std::ostream& out, const json& classes, const json& confusion) {
    std::size_t width = 5;
    for (const auto& c : classes) width = std::max(width, c.get<std::string>().size());
    for (const auto& row : confusion)
        for (const auto& cell : row) width = std::max(width, std::to_string(cell.get<long>()).size());
    width += 2;

    const auto pad = [&](const std::string& s) {
        out << s << std::string(width > s.size() ? width - s.size() : 1, ' ');
    };
    out << "confusion matrix (rows: truth, columns: predicted)\n";
    pad("");
    for (const auto& c : classes) pad(c.get<std::string>());
    out << '\n';
    for (std::size_t i = 0; i < classes.size(); ++i) {
        pad(classes[i].get<std::string>());
        for (const auto& cell : confusion[i]) pad(std::to_string(cell.get<long>()));
        out << '\n';
    }
}

// ----------------------------------------------------------- subcommands

int run_gen(const std::string& preset, const std::string& spec_path, std::size_t per_class,
            std::uint64_t seed, const std::string& output) {
    std::vector<abow::ClassSpec> specs;
    if (!spec_path.empty()) {
        std::ifstream in = open_input(spec_path);
        specs = abow::load_class_specs(in);
    } else {
        specs = abow::preset_by_name(preset, per_class);
    }
    std::mt19937_64 rng = abow::named_stream(seed, "datagen");
    const abow::Corpus corpus = abow::generate(specs, rng);
    std::ofstream out = open_output(output);
    abow::write_corpus(corpus, out);

    std::set<std::string> classes;
    for (const auto& a : corpus.activities) classes.insert(a.label);
    std::cout << "wrote " << corpus.activities.size() << " activities, " << classes.size()
              << " classes to " << output << '\n';
    return 0;
}

int run_bins(const CorpusOptions& corpus_opts, const std::string& family, std::size_t window,
             std::size_t bins, const std::string& output) {
    const abow::Corpus corpus = load_corpus(corpus_opts);
    const abow::ClampPolicy policy = corpus_opts.strict_overlap ? abow::ClampPolicy::strict
                                                                : abow::ClampPolicy::clamp_to_zero;
    abow::DurationFamily fam;
    if (family == "tau") fam = abow::DurationFamily::tau_consecutive;
    else if (family == "pi") fam = abow::DurationFamily::pi_window;
    else throw abow::input_error("unknown family '" + family + "' (expected tau or pi)");

    const std::vector<double> durations = abow::collect_durations(corpus, fam, window, policy);
    if (durations.size() < bins)
        throw abow::input_error("cannot fit " + std::to_string(bins) + " bins on " +
                                std::to_string(durations.size()) + " durations");
    const abow::BinningModel model = abow::fit_bins(durations, bins);
    model.save(output);

    std::cout << "fitted " << model.bin_count() << " bins on " << durations.size()
              << " durations\n";
    for (std::size_t i = 0; i < model.bin_count(); ++i) {
        std::cout << "  " << abow::bin_alias(i) << " (" << model.labels[i] << "): ";
        std::cout << (i == 0 ? "[0" : "(" + fixed(model.edges[i - 1], 3));
        std::cout << ", "
                  << (i + 1 == model.bin_count() ? "inf)" : fixed(model.edges[i], 3) + "]");
        std::cout << "  count " << model.realized_counts[i] << '\n';
    }
    return 0;
}

int run_encode(const CorpusOptions& corpus_opts, const SchemeOptions& scheme_opts,
               const std::string& bins_path, const std::string& features_path,
               const std::string& output) {
    const abow::Corpus corpus = load_corpus(corpus_opts);
    const abow::SchemeConfig config = make_config(scheme_opts, corpus_opts);

    abow::FittedModels models;
    if (!bins_path.empty()) {
        if (config.scheme == abow::Scheme::cumulative || config.scheme == abow::Scheme::pyramid)
            throw abow::input_error(
                "--bins supplies a single consecutive-gap model; cumulative and pyramid fit "
                "per-window models internally, omit --bins");
        models.tau_model = abow::BinningModel::load(bins_path);
    } else {
        models = abow::fit_models(corpus.activities, config);
    }

    std::vector<abow::Document> docs = abow::encode_all(corpus.activities, config, models);

    if (!features_path.empty()) {
        std::ifstream in = open_input(features_path);
        const std::vector<abow::RegexFeature> features = abow::read_features(in);
        if (!models.tau_model)
            models.tau_model = abow::fit_bins(
                abow::collect_durations(corpus, abow::DurationFamily::tau_consecutive, 1,
                                        config.clamp),
                config.bins);
        const auto seqs =
            abow::interspersed_sequences(corpus.activities, *models.tau_model, config.clamp);
        docs = abow::augment_documents(std::move(docs), features, seqs);
    }

    std::ofstream out = open_output(output);
    abow::write_documents(docs, out);

    std::set<std::string> vocabulary;
    for (const auto& d : docs)
        for (const auto& [t, c] : d.terms) vocabulary.insert(t);
    std::cout << "encoded " << docs.size() << " documents, vocabulary " << vocabulary.size()
              << " terms\n";
    return 0;
}

int run_regex(const CorpusOptions& corpus_opts, const SchemeOptions& scheme_opts,
              std::uint64_t seed, const std::string& output) {
    const abow::Corpus corpus = load_corpus(corpus_opts);
    abow::SchemeConfig config = make_config(scheme_opts, corpus_opts);
    if (!config.regex_enabled())
        throw abow::input_error("regex: pass --regex-count or --regex-pct to size the feature set");

    const abow::FittedModels models = abow::fit_models(corpus.activities, config);
    const std::vector<abow::Document> base_docs =
        abow::encode_all(corpus.activities, config, models);
    std::mt19937_64 rng = abow::named_stream(seed, "regex");
    const abow::GeneratedFeatures generated =
        abow::build_regex_features(corpus.activities, config, models, base_docs, rng);

    std::ofstream out = open_output(output);
    abow::write_features(generated.features, out);

    const std::size_t target = abow::resolve_regex_target(config, base_docs);
    std::cout << "accepted " << generated.features.size() << " of " << target
              << " requested features in " << generated.attempts << " attempts\n";
    if (generated.features.size() < target)
        std::cerr << "warning: attempt budget exhausted before reaching the target\n";
    return 0;
}

std::vector<abow::Activity> select_half(const abow::Corpus& corpus, const std::string& splits_path,
                                        const std::string& half) {
    if (splits_path.empty()) return corpus.activities;
    const json j = load_json(splits_path);
    std::vector<std::string> ids;
    try {
        if (half == "param") ids = j.at("param").get<std::vector<std::string>>();
        else if (half == "eval") ids = j.at("eval").get<std::vector<std::string>>();
        else throw abow::input_error("--half must be param or eval");
    } catch (const json::exception& e) {
        throw abow::input_error("'" + splits_path + "': " + e.what());
    }
    return abow::select_by_ids(corpus, ids);
}

int run_classify(const CorpusOptions& corpus_opts, const SchemeOptions& scheme_opts,
                 const std::string& splits_path, const std::string& half, std::uint64_t seed,
                 std::size_t jobs, const std::string& positive, const std::string& output,
                 const std::string& predictions_path, const std::string& confusion_path) {
    const abow::Corpus corpus = load_corpus(corpus_opts);
    const abow::SchemeConfig config = make_config(scheme_opts, corpus_opts);
    const std::vector<abow::Activity> rows = select_half(corpus, splits_path, half);

    const abow::EvalOutcome outcome = abow::loocv_evaluate(rows, config, seed, jobs);
    const abow::EvalReport& report = outcome.loocv.report;

    json j = report_json(report);
    j["kind"] = "classification";
    j["scheme"] = scheme_opts.scheme;
    j["params"] = {{"N", config.bins},
                   {"n", config.gram},
                   {"k", config.knn_k},
                   {"regex_features", outcome.regex_features_used},
                   {"seed", seed}};
    j["rows"] = rows.size();
    if (report.classes.size() == 2) {
        const std::string pos = positive.empty() ? report.classes[0] : positive;
        j["roc"] = {{"positive", pos}, {"points", roc_points(outcome, pos)}};
    }
    if (outcome.loocv.degenerate_labels) {
        j["warnings"] = json::array({"all rows share a single label"});
        std::cerr << "warning: all rows share a single label; accuracy is degenerate\n";
    }
    write_json(j, output);
    if (!predictions_path.empty())
        write_json(predictions_json(outcome, scheme_opts.scheme), predictions_path);
    if (!confusion_path.empty()) write_confusion_csv(report, confusion_path);

    std::cout << "accuracy " << fixed(report.accuracy) << " on " << rows.size() << " rows ("
              << scheme_opts.scheme << ", N=" << config.bins << ", n=" << config.gram;
    if (outcome.regex_features_used > 0) std::cout << ", +" << outcome.regex_features_used << " regex";
    std::cout << ")\n";
    return 0;
}

int run_cluster(const CorpusOptions& corpus_opts, const SchemeOptions& scheme_opts,
                std::size_t clusters, std::size_t restarts, std::uint64_t seed,
                const std::string& output) {
    const abow::Corpus corpus = load_corpus(corpus_opts);
    const abow::SchemeConfig config = make_config(scheme_opts, corpus_opts);

    const abow::FittedModels models = abow::fit_models(corpus.activities, config);
    std::vector<abow::Document> docs = abow::encode_all(corpus.activities, config, models);
    if (config.regex_enabled()) {
        std::mt19937_64 regex_rng = abow::named_stream(seed, "regex");
        const auto generated =
            abow::build_regex_features(corpus.activities, config, models, docs, regex_rng);
        const auto seqs =
            abow::interspersed_sequences(corpus.activities, models.tau_model.value(), config.clamp);
        docs = abow::augment_documents(std::move(docs), generated.features, seqs);
    }
    const abow::WeightedMatrix matrix = abow::tfidf_fit(docs);
    std::mt19937_64 rng = abow::named_stream(seed, "kmeans");
    const std::vector<std::size_t> assignment = abow::kmeans(matrix, clusters, rng, restarts);

    json j;
    j["kind"] = "clustering";
    j["scheme"] = scheme_opts.scheme;
    j["k"] = clusters;
    j["params"] = {{"N", config.bins}, {"n", config.gram}, {"restarts", restarts}, {"seed", seed}};
    json assignments = json::object();
    for (std::size_t i = 0; i < assignment.size(); ++i)
        assignments[matrix.row_ids[i]] = assignment[i];
    j["assignments"] = std::move(assignments);

    const bool labeled = std::all_of(corpus.activities.begin(), corpus.activities.end(),
                                     [](const abow::Activity& a) { return !a.label.empty(); });
    if (labeled) {
        std::vector<std::string> truth;
        for (const auto& a : corpus.activities) truth.push_back(a.label);
        const abow::ClusterQuality q = abow::cluster_quality(assignment, truth);
        j["metrics"] = {{"RI", q.ri}, {"ARI", q.ari}, {"NMI", q.nmi}};
        std::cout << "k=" << clusters << "  RI " << fixed(q.ri) << "  ARI " << fixed(q.ari)
                  << "  NMI " << fixed(q.nmi) << '\n';
    } else {
        std::cerr << "warning: corpus has unlabeled activities; skipping cluster quality metrics\n";
        std::cout << "k=" << clusters << " clusters assigned (no labels for quality metrics)\n";
    }
    write_json(j, output);
    return 0;
}

int run_gridsearch(const CorpusOptions& corpus_opts, const SchemeOptions& scheme_opts,
                   const std::string& bins_range, const std::string& gram_range,
                   std::uint64_t seed, std::size_t jobs, const std::string& output,
                   const std::string& splits_path) {
    const abow::Corpus corpus = load_corpus(corpus_opts);
    const abow::SchemeConfig config = make_config(scheme_opts, corpus_opts);
    const std::vector<std::size_t> bins = parse_range(bins_range);
    const std::vector<std::size_t> grams = parse_range(gram_range);

    const abow::GridResult result = abow::grid_search(corpus, config, bins, grams, seed, jobs);

    json table = json::array();
    for (const abow::GridPoint& p : result.table) {
        json row = {{"N", p.bins}, {"n", p.gram}};
        if (std::isnan(p.accuracy)) row["accuracy"] = nullptr;
        else row["accuracy"] = p.accuracy;
        table.push_back(std::move(row));
    }
    json j;
    j["kind"] = "grid_search";
    j["scheme"] = scheme_opts.scheme;
    j["seed"] = seed;
    j["table"] = std::move(table);
    j["best"] = {{"N", result.best_bins}, {"n", result.best_gram}};
    json final_report = report_json(result.final_eval.loocv.report);
    final_report["rows"] = result.final_eval.ids.size();
    j["final"] = std::move(final_report);
    write_json(j, output);

    json splits;
    splits["seed"] = seed;
    splits["param"] = result.split.param_ids;
    splits["eval"] = result.split.eval_ids;
    write_json(splits, splits_path);

    std::cout << "holdout accuracy by (N, n):\n";
    for (const std::size_t b : bins) {
        std::cout << "  N=" << b << ":";
        for (const std::size_t g : grams) {
            const auto it = std::find_if(result.table.begin(), result.table.end(),
                                         [&](const abow::GridPoint& p) {
                                             return p.bins == b && p.gram == g;
                                         });
            std::cout << "  n=" << g << " "
                      << (std::isnan(it->accuracy) ? "  -   " : fixed(it->accuracy));
        }
        std::cout << '\n';
    }
    std::cout << "best N=" << result.best_bins << " n=" << result.best_gram
              << "; eval-half accuracy " << fixed(result.final_eval.loocv.report.accuracy) << " on "
              << result.final_eval.ids.size() << " rows\n";
    std::cout << "split written to " << splits_path << '\n';
    return 0;
}

int run_mcnemar(const std::string& preds_a_path, const std::string& preds_b_path,
                const std::string& output) {
    const json ja = load_json(preds_a_path);
    const json jb = load_json(preds_b_path);
    std::vector<std::string> ids_a, ids_b, truth_a, truth_b, preds_a, preds_b;
    try {
        ids_a = ja.at("ids").get<std::vector<std::string>>();
        ids_b = jb.at("ids").get<std::vector<std::string>>();
        truth_a = ja.at("truth").get<std::vector<std::string>>();
        truth_b = jb.at("truth").get<std::vector<std::string>>();
        preds_a = ja.at("predictions").get<std::vector<std::string>>();
        preds_b = jb.at("predictions").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw abow::input_error(std::string("predictions file: ") + e.what());
    }
    if (ids_a != ids_b || truth_a != truth_b)
        throw abow::input_error(
            "prediction files cover different instances; McNemar needs paired predictions "
            "from the same split (run classify with the same --splits/--half)");

    const abow::McNemarResult result = abow::mcnemar(preds_a, preds_b, truth_a);
    const bool significant = result.p < 0.05;

    json j;
    j["kind"] = "mcnemar";
    j["method_a"] = ja.contains("scheme") ? ja.at("scheme") : json(nullptr);
    j["method_b"] = jb.contains("scheme") ? jb.at("scheme") : json(nullptr);
    j["b"] = result.b;
    j["c"] = result.c;
    j["chi2"] = result.chi2;
    j["p"] = result.p;
    j["significant_at_95"] = significant;
    write_json(j, output);

    std::cout << "b=" << result.b << " c=" << result.c << " chi2=" << fixed(result.chi2) << " p="
              << fixed(result.p) << (significant ? "  (significant at 95%)" : "  (not significant)")
              << '\n';
    return 0;
}

int run_report(const std::string& input, const std::string& confusion_csv) {
    const json j = load_json(input);
    const std::string kind = j.value("kind", "");
    std::ostream& out = std::cout;

    if (kind == "classification") {
        out << "classification report (" << j.value("scheme", "?") << ")\n";
        const json& params = j.at("params");
        out << "  N=" << params.at("N").get<std::size_t>() << " n="
            << params.at("n").get<std::size_t>() << " k=" << params.at("k").get<std::size_t>()
            << " regex_features=" << params.at("regex_features").get<std::size_t>() << '\n';
        out << "  rows " << j.at("rows").get<std::size_t>() << ", accuracy "
            << fixed(j.at("accuracy").get<double>()) << "\n\n";
        out << "per-class precision/recall\n";
        for (const auto& pc : j.at("per_class"))
            out << "  " << pc.at("class").get<std::string>() << ": precision "
                << fixed(pc.at("precision").get<double>()) << ", recall "
                << fixed(pc.at("recall").get<double>()) << '\n';
        out << '\n';
        print_confusion(out, j.at("classes"), j.at("confusion"));
        if (!confusion_csv.empty()) {
            std::ofstream csv = open_output(confusion_csv);
            csv << "class";
            for (const auto& c : j.at("classes")) csv << ',' << c.get<std::string>();
            csv << '\n';
            for (std::size_t i = 0; i < j.at("classes").size(); ++i) {
                csv << j.at("classes")[i].get<std::string>();
                for (const auto& cell : j.at("confusion")[i]) csv << ',' << cell.get<long>();
                csv << '\n';
            }
        }
        return 0;
    }
    if (kind == "clustering") {
        out << "clustering report (" << j.value("scheme", "?") << "), k="
            << j.at("k").get<std::size_t>() << '\n';
        if (j.contains("metrics"))
            out << "  RI " << fixed(j.at("metrics").at("RI").get<double>()) << "  ARI "
                << fixed(j.at("metrics").at("ARI").get<double>()) << "  NMI "
                << fixed(j.at("metrics").at("NMI").get<double>()) << '\n';
        std::map<std::size_t, std::size_t> sizes;
        for (const auto& [id, cluster] : j.at("assignments").items())
            ++sizes[cluster.get<std::size_t>()];
        for (const auto& [cluster, size] : sizes)
            out << "  cluster " << cluster << ": " << size << " rows\n";
        return 0;
    }
    if (kind == "grid_search") {
        out << "grid search (" << j.value("scheme", "?") << ")\n";
        for (const auto& row : j.at("table")) {
            out << "  N=" << row.at("N").get<std::size_t>() << " n=" << row.at("n").get<std::size_t>()
                << "  ";
            if (row.at("accuracy").is_null()) out << "infeasible\n";
            else out << fixed(row.at("accuracy").get<double>()) << '\n';
        }
        out << "best: N=" << j.at("best").at("N").get<std::size_t>() << " n="
            << j.at("best").at("n").get<std::size_t>() << "; eval accuracy "
            << fixed(j.at("final").at("accuracy").get<double>()) << '\n';
        return 0;
    }
    if (kind == "mcnemar") {
        out << "McNemar test: " << j.at("method_a").dump() << " vs " << j.at("method_b").dump()
            << '\n';
        out << "  b=" << j.at("b").get<std::size_t>() << " c=" << j.at("c").get<std::size_t>()
            << " chi2=" << fixed(j.at("chi2").get<double>()) << " p=" << fixed(j.at("p").get<double>())
            << '\n';
        out << (j.at("significant_at_95").get<bool>()
                    ? "  difference is significant at the 95% level (critical value 3.84)\n"
                    : "  difference is not significant at the 95% level\n");
        return 0;
    }
    throw abow::input_error("'" + input + "': unknown or missing report kind");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"augmented bag-of-words activity recognition pipeline"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a synthetic labeled corpus");
    std::string gen_preset = "parking", gen_spec, gen_output = "corpus.jsonl";
    std::size_t gen_per_class = 0;
    std::uint64_t gen_seed = 0;
    gen->add_option("--preset", gen_preset, "built-in scenario: parking or anomaly");
    gen->add_option("--spec", gen_spec, "class spec JSON file (overrides --preset)");
    gen->add_option("--per-class", gen_per_class, "override the preset's activities per class");
    gen->add_option("--seed", gen_seed, "master random seed");
    gen->add_option("-o,--output", gen_output, "corpus JSONL output")->required();

    // bins
    auto* bins_cmd = app.add_subcommand("bins", "fit an equal-frequency binning model");
    CorpusOptions bins_corpus;
    add_corpus_options(bins_cmd, bins_corpus);
    std::string bins_family = "tau", bins_output = "bins.json";
    std::size_t bins_window = 1, bins_count = 2;
    bins_cmd->add_option("--family", bins_family, "duration stream: tau (gaps) or pi (windows)");
    bins_cmd->add_option("--window", bins_window, "window size for the pi family");
    bins_cmd->add_option("--N", bins_count, "bin count")->required();
    bins_cmd->add_option("-o,--output", bins_output, "binning model JSON output")->required();

    // encode
    auto* encode = app.add_subcommand("encode", "encode activities into documents");
    CorpusOptions enc_corpus;
    SchemeOptions enc_scheme;
    add_corpus_options(encode, enc_corpus);
    add_scheme_options(encode, enc_scheme);
    std::string enc_bins, enc_features, enc_output = "docs.jsonl";
    encode->add_option("--bins", enc_bins, "reuse a fitted consecutive-gap binning model");
    encode->add_option("--features", enc_features, "augment with accepted regex features");
    encode->add_option("-o,--output", enc_output, "documents JSONL output")->required();

    // regex
    auto* regex = app.add_subcommand("regex", "sample accepted regex features");
    CorpusOptions rex_corpus;
    SchemeOptions rex_scheme;
    add_corpus_options(regex, rex_corpus);
    rex_scheme.scheme = "interspersed";
    regex->add_option("--N", rex_scheme.bins, "temporal bin count N (default 2)");
    regex->add_option("--n", rex_scheme.gram, "gram size n of the base vocabulary (default 2)");
    add_regex_options(regex, rex_scheme);
    std::uint64_t rex_seed = 0;
    std::string rex_output = "features.json";
    regex->add_option("--seed", rex_seed, "master random seed");
    regex->add_option("-o,--output", rex_output, "features JSON output")->required();

    // classify
    auto* classify = app.add_subcommand("classify", "LOOCV k-NN classification");
    CorpusOptions cls_corpus;
    SchemeOptions cls_scheme;
    add_corpus_options(classify, cls_corpus);
    add_scheme_options(classify, cls_scheme);
    add_regex_options(classify, cls_scheme);
    classify->add_option("-k,--neighbors", cls_scheme.knn_k, "k-NN neighbor count (default 1)");
    std::string cls_splits, cls_half = "eval", cls_positive;
    std::string cls_output = "report.json", cls_predictions, cls_confusion;
    std::uint64_t cls_seed = 0;
    std::size_t cls_jobs = 1;
    classify->add_option("--splits", cls_splits, "splits.json from gridsearch");
    classify->add_option("--half", cls_half, "which split half to evaluate: param or eval");
    classify->add_option("--positive", cls_positive, "positive class for the ROC sweep");
    classify->add_option("--seed", cls_seed, "master random seed");
    classify->add_option("--jobs", cls_jobs, "worker threads for LOOCV folds");
    classify->add_option("-o,--output", cls_output, "report JSON output")->required();
    classify->add_option("--predictions", cls_predictions, "per-row predictions JSON (for mcnemar)");
    classify->add_option("--confusion", cls_confusion, "confusion matrix CSV");

    // cluster
    auto* cluster = app.add_subcommand("cluster", "spherical k-means with quality metrics");
    CorpusOptions clu_corpus;
    SchemeOptions clu_scheme;
    add_corpus_options(cluster, clu_corpus);
    add_scheme_options(cluster, clu_scheme);
    add_regex_options(cluster, clu_scheme);
    std::size_t clu_k = 7, clu_restarts = 10;
    std::uint64_t clu_seed = 0;
    std::string clu_output = "cluster.json";
    cluster->add_option("-k,--clusters", clu_k, "cluster count (default 7)");
    cluster->add_option("--restarts", clu_restarts, "k-means restarts (default 10)");
    cluster->add_option("--seed", clu_seed, "master random seed");
    cluster->add_option("-o,--output", clu_output, "report JSON output")->required();

    // gridsearch
    auto* grid = app.add_subcommand("gridsearch", "optimize (N, n) on a stratified holdout");
    CorpusOptions grd_corpus;
    SchemeOptions grd_scheme;
    add_corpus_options(grid, grd_corpus);
    add_scheme_options(grid, grd_scheme, /*with_params=*/false);
    add_regex_options(grid, grd_scheme);
    grid->add_option("-k,--neighbors", grd_scheme.knn_k, "k-NN neighbor count (default 1)");
    std::string grd_bins = "1..5", grd_grams = "1..4";
    std::string grd_output = "grid.json", grd_splits = "splits.json";
    std::uint64_t grd_seed = 0;
    std::size_t grd_jobs = 1;
    grid->add_option("--N", grd_bins, "bin counts to test, e.g. 1..5 or 2,4");
    grid->add_option("--n", grd_grams, "gram sizes to test, e.g. 1..4");
    grid->add_option("--seed", grd_seed, "master random seed");
    grid->add_option("--jobs", grd_jobs, "worker threads for grid points");
    grid->add_option("-o,--output", grd_output, "grid table JSON output")->required();
    grid->add_option("--splits", grd_splits, "where to persist the stratified split");

    // mcnemar
    auto* mcn = app.add_subcommand("mcnemar", "paired significance test between two runs");
    std::string mcn_a, mcn_b, mcn_output = "mcnemar.json";
    mcn->add_option("--preds-a", mcn_a, "predictions JSON of method A")->required();
    mcn->add_option("--preds-b", mcn_b, "predictions JSON of method B")->required();
    mcn->add_option("-o,--output", mcn_output, "result JSON output")->required();

    // report
    auto* rep = app.add_subcommand("report", "render a JSON artifact as aligned text");
    std::string rep_input, rep_confusion;
    rep->add_option("-i,--input", rep_input, "report JSON file")->required();
    rep->add_option("--confusion-csv", rep_confusion, "also write the confusion matrix as CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (gen->parsed())
            return run_gen(gen_preset, gen_spec, gen_per_class, gen_seed, gen_output);
        if (bins_cmd->parsed())
            return run_bins(bins_corpus, bins_family, bins_window, bins_count, bins_output);
        if (encode->parsed())
            return run_encode(enc_corpus, enc_scheme, enc_bins, enc_features, enc_output);
        if (regex->parsed()) return run_regex(rex_corpus, rex_scheme, rex_seed, rex_output);
        if (classify->parsed())
            return run_classify(cls_corpus, cls_scheme, cls_splits, cls_half, cls_seed, cls_jobs,
                                cls_positive, cls_output, cls_predictions, cls_confusion);
        if (cluster->parsed())
            return run_cluster(clu_corpus, clu_scheme, clu_k, clu_restarts, clu_seed, clu_output);
        if (grid->parsed())
            return run_gridsearch(grd_corpus, grd_scheme, grd_bins, grd_grams, grd_seed, grd_jobs,
                                  grd_output, grd_splits);
        if (mcn->parsed()) return run_mcnemar(mcn_a, mcn_b, mcn_output);
        if (rep->parsed()) return run_report(rep_input, rep_confusion);
    } catch (const abow::input_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
