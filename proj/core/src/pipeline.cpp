#include "abow/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <set>
#include <stdexcept>
#include <thread>

#include "abow/error.hpp"
#include "abow/rng.hpp"

namespace abow {

bool SchemeConfig::needs_tau_model() const {
    if (regex_enabled()) return true;  // regexes match interspersed sequences
    switch (scheme) {
        case Scheme::bow: return false;
        case Scheme::bow_time:
        case Scheme::interspersed: return true;
        case Scheme::cumulative: return false;
        case Scheme::pyramid: return pyramid_base == Scheme::interspersed;
    }
    return false;
}

namespace {

BinningModel fit_stream(std::span<const Activity> activities, DurationFamily family,
                        std::size_t window, std::size_t bins, ClampPolicy policy) {
    std::vector<double> durations = collect_durations(activities, family, window, policy);
    if (durations.size() < bins) {
        const std::string stream = family == DurationFamily::tau_consecutive
                                       ? "consecutive-gap"
                                       : "window-" + std::to_string(window);
        throw input_error("cannot fit " + std::to_string(bins) + " bins on " +
                          std::to_string(durations.size()) + " " + stream + " durations");
    }
    return fit_bins(std::move(durations), bins);
}

void check_label_disjointness(const BinningModel& model, std::span<const Activity> activities) {
    std::set<std::string> kinds;
    for (const Activity& a : activities)
        for (const Event& e : a.events) kinds.insert(e.kind);
    for (const std::string& label : model.labels)
        if (kinds.count(label))
            throw input_error("bin label '" + label + "' collides with an observable event kind");
}

}  // namespace

FittedModels fit_models(std::span<const Activity> activities, const SchemeConfig& config) {
    if (activities.empty()) throw input_error("fit_models: no activities");
    if (config.bins == 0) throw input_error("fit_models: bin count must be >= 1");
    if (config.gram == 0) throw input_error("fit_models: gram size must be >= 1");

    FittedModels models;
    if (config.needs_tau_model()) {
        models.tau_model =
            fit_stream(activities, DurationFamily::tau_consecutive, 1, config.bins, config.clamp);
        check_label_disjointness(*models.tau_model, activities);
    }
    const bool cumulative_levels =
        config.scheme == Scheme::pyramid && config.pyramid_base == Scheme::cumulative;
    if (config.scheme == Scheme::cumulative) {
        models.pi_by_window[config.gram] =
            fit_stream(activities, DurationFamily::pi_window, config.gram, config.bins, config.clamp);
        check_label_disjointness(models.pi_by_window[config.gram], activities);
    } else if (cumulative_levels) {
        for (std::size_t level = 1; level <= config.gram; ++level) {
            models.pi_by_window[level] =
                fit_stream(activities, DurationFamily::pi_window, level, config.bins, config.clamp);
            check_label_disjointness(models.pi_by_window[level], activities);
        }
    }
    return models;
}

Document encode_one(const Activity& activity, const SchemeConfig& config, const FittedModels& models) {
    switch (config.scheme) {
        case Scheme::bow:
            return encode_bow(activity);
        case Scheme::bow_time:
            return encode_bow_time(activity, models.tau_model.value(), config.clamp);
        case Scheme::interspersed:
            return encode_interspersed(activity, models.tau_model.value(), config.gram, config.clamp);
        case Scheme::cumulative:
            return encode_cumulative(activity, models.pi_by_window.at(config.gram), config.gram);
        case Scheme::pyramid: {
            std::vector<BinningModel> levels;
            levels.reserve(config.gram);
            for (std::size_t level = 1; level <= config.gram; ++level) {
                if (config.pyramid_base == Scheme::interspersed)
                    levels.push_back(models.tau_model.value());
                else
                    levels.push_back(models.pi_by_window.at(level));
            }
            return encode_pyramid(activity, levels, config.gram, config.pyramid_base, config.clamp);
        }
    }
    throw std::logic_error("unknown scheme");
}

std::vector<Document> encode_all(std::span<const Activity> activities, const SchemeConfig& config,
                                 const FittedModels& models) {
    std::vector<Document> docs;
    docs.reserve(activities.size());
    for (const Activity& a : activities) docs.push_back(encode_one(a, config, models));
    return docs;
}

std::vector<SymbolSequence> interspersed_sequences(std::span<const Activity> activities,
                                                   const BinningModel& tau_model, ClampPolicy policy) {
    std::vector<SymbolSequence> seqs;
    seqs.reserve(activities.size());
    for (const Activity& a : activities) seqs.push_back(interspersed_sequence(a, tau_model, policy));
    return seqs;
}

std::vector<std::string> observed_vocabulary(std::span<const Activity> activities) {
    std::set<std::string> kinds;
    for (const Activity& a : activities)
        for (const Event& e : a.events) kinds.insert(e.kind);
    return {kinds.begin(), kinds.end()};
}

std::size_t resolve_regex_target(const SchemeConfig& config, std::span<const Document> base_docs) {
    if (config.regex_count > 0) return config.regex_count;
    if (config.regex_pct <= 0.0) return 0;
    std::set<std::string> vocabulary;
    for (const Document& doc : base_docs)
        for (const auto& [term, count] : doc.terms) vocabulary.insert(term);
    return static_cast<std::size_t>(
        std::ceil(config.regex_pct / 100.0 * static_cast<double>(vocabulary.size())));
}

GeneratedFeatures build_regex_features(std::span<const Activity> activities,
                                       const SchemeConfig& config, const FittedModels& models,
                                       std::span<const Document> base_docs, std::mt19937_64& rng) {
    const BinningModel& tau_model = models.tau_model.value();
    const std::vector<SymbolSequence> seqs =
        interspersed_sequences(activities, tau_model, config.clamp);
    const VocabularyStats stats =
        VocabularyStats::build(seqs, observed_vocabulary(activities), tau_model.labels);
    const std::size_t target = resolve_regex_target(config, base_docs);
    const std::size_t max_attempts =
        config.regex_max_attempts > 0 ? config.regex_max_attempts : 200 * target + 1000;
    return generate_accepted(seqs, target, stats, rng, max_attempts);
}

namespace {

std::vector<std::string> labels_of(std::span<const Activity> activities) {
    std::vector<std::string> labels;
    labels.reserve(activities.size());
    for (const Activity& a : activities) {
        if (a.label.empty())
            throw input_error("activity '" + a.id + "' is unlabeled; classification needs labels");
        labels.push_back(a.label);
    }
    return labels;
}

struct VoteResult {
    std::string label;
    double top_similarity = 0.0;
};

VoteResult vote_knn(const std::vector<SparseRow>& train_rows,
                    const std::vector<std::string>& train_labels, const SparseRow& query,
                    std::size_t k) {
    std::vector<std::pair<double, std::size_t>> sims;
    sims.reserve(train_rows.size());
    for (std::size_t j = 0; j < train_rows.size(); ++j)
        sims.emplace_back(cosine(query, train_rows[j]), j);
    std::partial_sort(sims.begin(), sims.begin() + static_cast<std::ptrdiff_t>(k), sims.end(),
                      [](const auto& a, const auto& b) {
                          if (a.first != b.first) return a.first > b.first;
                          return a.second < b.second;
                      });
    std::map<std::string, std::pair<std::size_t, double>> votes;
    for (std::size_t v = 0; v < k; ++v) {
        auto& entry = votes[train_labels[sims[v].second]];
        ++entry.first;
        entry.second += sims[v].first;
    }
    const auto best = std::max_element(votes.begin(), votes.end(), [](const auto& a, const auto& b) {
        if (a.second.first != b.second.first) return a.second.first < b.second.first;
        if (a.second.second != b.second.second) return a.second.second < b.second.second;
        return a.first > b.first;
    });
    return {best->first, sims.front().first};
}

}  // namespace

void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& body) {
    std::vector<std::exception_ptr> errors(count);
    const auto guarded = [&](std::size_t i) {
        try {
            body(i);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) guarded(i);
    } else {
        std::atomic<std::size_t> next{0};
        const std::size_t workers = std::min(jobs, count);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) guarded(i);
            });
        for (std::thread& t : pool) t.join();
    }
    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);
}

EvalOutcome loocv_evaluate(std::span<const Activity> activities, const SchemeConfig& config,
                           std::uint64_t seed, std::size_t jobs) {
    const std::size_t n = activities.size();
    if (n < 2) throw input_error("loocv_evaluate: need at least 2 activities");
    if (config.knn_k == 0 || config.knn_k >= n)
        throw input_error("loocv_evaluate: k must satisfy 1 <= k < rows");

    EvalOutcome outcome;
    outcome.truth = labels_of(activities);
    for (const Activity& a : activities) outcome.ids.push_back(a.id);

    // regex features are sampled once from the whole split
    std::vector<RegexFeature> features;
    if (config.regex_enabled()) {
        const FittedModels split_models = fit_models(activities, config);
        const std::vector<Document> base_docs = encode_all(activities, config, split_models);
        std::mt19937_64 regex_rng = named_stream(seed, "regex");
        features = build_regex_features(activities, config, split_models, base_docs, regex_rng).features;
    }
    outcome.regex_features_used = features.size();

    outcome.loocv.predictions.resize(n);
    outcome.loocv.top_similarity.resize(n);

    parallel_for(n, jobs, [&](std::size_t i) {
        // training fold = everything but row i; bins refit on it
        std::vector<Activity> train;
        train.reserve(n - 1);
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) train.push_back(activities[j]);

        const FittedModels fold_models = fit_models(train, config);
        std::vector<Document> train_docs = encode_all(train, config, fold_models);
        Document query_doc = encode_one(activities[i], config, fold_models);

        if (!features.empty()) {
            const std::vector<SymbolSequence> train_seqs =
                interspersed_sequences(train, fold_models.tau_model.value(), config.clamp);
            train_docs = augment_documents(std::move(train_docs), features, train_seqs);
            const SymbolSequence query_seq =
                interspersed_sequence(activities[i], fold_models.tau_model.value(), config.clamp);
            std::vector<Document> query_vec{std::move(query_doc)};
            query_vec = augment_documents(std::move(query_vec),
                                          features, std::vector<SymbolSequence>{query_seq});
            query_doc = std::move(query_vec[0]);
        }

        const WeightedMatrix matrix = tfidf_fit(train_docs);
        const SparseRow query = matrix.project(query_doc);

        std::vector<std::string> train_labels;
        train_labels.reserve(n - 1);
        for (const Activity& a : train) train_labels.push_back(a.label);

        const VoteResult vote = vote_knn(matrix.rows, train_labels, query, config.knn_k);
        outcome.loocv.predictions[i] = vote.label;
        outcome.loocv.top_similarity[i] = vote.top_similarity;
    });

    outcome.loocv.degenerate_labels = std::all_of(
        outcome.truth.begin(), outcome.truth.end(),
        [&](const std::string& l) { return l == outcome.truth[0]; });
    outcome.loocv.report = make_report(outcome.truth, outcome.loocv.predictions);
    return outcome;
}

double score_half_loocv(std::span<const Activity> activities, const SchemeConfig& config,
                        std::uint64_t seed) {
    const FittedModels models = fit_models(activities, config);
    std::vector<Document> docs = encode_all(activities, config, models);
    if (config.regex_enabled()) {
        std::mt19937_64 regex_rng = named_stream(seed, "regex");
        const GeneratedFeatures generated =
            build_regex_features(activities, config, models, docs, regex_rng);
        const std::vector<SymbolSequence> seqs =
            interspersed_sequences(activities, models.tau_model.value(), config.clamp);
        docs = augment_documents(std::move(docs), generated.features, seqs);
    }
    const WeightedMatrix matrix = tfidf_fit(docs);
    const std::vector<std::string> labels = labels_of(activities);
    return knn_loocv(matrix, labels, config.knn_k).report.accuracy;
}

SplitIds stratified_split(const Corpus& corpus, std::mt19937_64& rng) {
    std::map<std::string, std::vector<std::size_t>> by_label;
    for (std::size_t i = 0; i < corpus.activities.size(); ++i) {
        const Activity& a = corpus.activities[i];
        if (a.label.empty())
            throw input_error("activity '" + a.id + "' is unlabeled; cannot stratify");
        by_label[a.label].push_back(i);
    }

    std::vector<std::size_t> param_rows, eval_rows;
    for (auto& [label, rows] : by_label) {
        if (rows.size() < 2)
            throw input_error("class '" + label + "' has fewer than 2 members; cannot stratify");
        for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
            const std::size_t j = i + static_cast<std::size_t>(uniform_index(rng, rows.size() - i));
            std::swap(rows[i], rows[j]);
        }
        const std::size_t half = rows.size() / 2;
        param_rows.insert(param_rows.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(half));
        eval_rows.insert(eval_rows.end(), rows.begin() + static_cast<std::ptrdiff_t>(half), rows.end());
    }
    std::sort(param_rows.begin(), param_rows.end());
    std::sort(eval_rows.begin(), eval_rows.end());

    SplitIds split;
    for (const std::size_t i : param_rows) split.param_ids.push_back(corpus.activities[i].id);
    for (const std::size_t i : eval_rows) split.eval_ids.push_back(corpus.activities[i].id);
    return split;
}

std::vector<Activity> select_by_ids(const Corpus& corpus, std::span<const std::string> ids) {
    std::map<std::string, const Activity*> by_id;
    for (const Activity& a : corpus.activities) by_id[a.id] = &a;
    std::vector<Activity> out;
    out.reserve(ids.size());
    for (const std::string& id : ids) {
        const auto it = by_id.find(id);
        if (it == by_id.end()) throw input_error("split references unknown activity id '" + id + "'");
        out.push_back(*it->second);
    }
    return out;
}

GridPoint select_best(std::span<const GridPoint> table) {
    const GridPoint* best = nullptr;
    for (const GridPoint& point : table) {
        if (std::isnan(point.accuracy)) continue;
        if (best == nullptr || point.accuracy > best->accuracy ||
            (point.accuracy == best->accuracy &&
             (point.bins < best->bins || (point.bins == best->bins && point.gram < best->gram))))
            best = &point;
    }
    if (best == nullptr) throw input_error("grid search: every grid point was infeasible");
    return *best;
}

GridResult grid_search(const Corpus& corpus, const SchemeConfig& base_config,
                       std::span<const std::size_t> bin_choices,
                       std::span<const std::size_t> gram_choices, std::uint64_t seed,
                       std::size_t jobs) {
    if (bin_choices.empty() || gram_choices.empty())
        throw input_error("grid search: empty parameter range");

    GridResult result;
    std::mt19937_64 split_rng = named_stream(seed, "split");
    result.split = stratified_split(corpus, split_rng);
    const std::vector<Activity> param_half = select_by_ids(corpus, result.split.param_ids);
    const std::vector<Activity> eval_half = select_by_ids(corpus, result.split.eval_ids);

    result.table.resize(bin_choices.size() * gram_choices.size());
    for (std::size_t bi = 0; bi < bin_choices.size(); ++bi)
        for (std::size_t gi = 0; gi < gram_choices.size(); ++gi) {
            GridPoint& point = result.table[bi * gram_choices.size() + gi];
            point.bins = bin_choices[bi];
            point.gram = gram_choices[gi];
        }

    parallel_for(result.table.size(), jobs, [&](std::size_t idx) {
        GridPoint& point = result.table[idx];
        SchemeConfig config = base_config;
        config.bins = point.bins;
        config.gram = point.gram;
        const std::uint64_t point_seed =
            stream_seed(seed, "grid:" + std::to_string(point.bins) + ":" + std::to_string(point.gram));
        try {
            point.accuracy = score_half_loocv(param_half, config, point_seed);
        } catch (const input_error&) {
            point.accuracy = std::numeric_limits<double>::quiet_NaN();  // infeasible at this (N, n)
        }
    });

    const GridPoint best = select_best(result.table);
    result.best_bins = best.bins;
    result.best_gram = best.gram;

    SchemeConfig final_config = base_config;
    final_config.bins = best.bins;
    final_config.gram = best.gram;
    result.final_eval = loocv_evaluate(eval_half, final_config, stream_seed(seed, "final"), jobs);
    return result;
}

}  // namespace abow
