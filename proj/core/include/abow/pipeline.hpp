#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "abow/corpus.hpp"
#include "abow/encoding.hpp"
#include "abow/learn.hpp"
#include "abow/regexgen.hpp"
#include "abow/temporal.hpp"

namespace abow {

// Everything needed to turn activities into documents for one evaluated
// method: the encoding scheme, its (N, n) parameters and the optional
// regex augmentation policy.
struct SchemeConfig {
    Scheme scheme = Scheme::interspersed;
    std::size_t bins = 5;  // N, temporal bins
    std::size_t gram = 2;  // n, gram size
    Scheme pyramid_base = Scheme::interspersed;
    ClampPolicy clamp = ClampPolicy::clamp_to_zero;
    std::size_t knn_k = 1;

    // regex augmentation; count takes precedence, pct is percent of the
    // base vocabulary (the paper's "+20% words" policy), both 0 = off
    std::size_t regex_count = 0;
    double regex_pct = 0.0;
    std::size_t regex_max_attempts = 0;  // 0 = derived from the target

    bool regex_enabled() const { return regex_count > 0 || regex_pct > 0.0; }
    bool needs_tau_model() const;
};

// Binning models fitted on a training split. pi_by_window holds one model
// per cumulative window size (their duration distributions differ), the
// tau model covers the consecutive-gap stream shared by all levels.
struct FittedModels {
    std::optional<BinningModel> tau_model;
    std::map<std::size_t, BinningModel> pi_by_window;
};

// Fits every model the config requires from these activities only (no
// leakage from evaluation rows). Throws input_error when a stream has
// fewer samples than bins.
FittedModels fit_models(std::span<const Activity> activities, const SchemeConfig& config);

Document encode_one(const Activity& activity, const SchemeConfig& config, const FittedModels& models);
std::vector<Document> encode_all(std::span<const Activity> activities, const SchemeConfig& config,
                                 const FittedModels& models);

std::vector<SymbolSequence> interspersed_sequences(std::span<const Activity> activities,
                                                   const BinningModel& tau_model, ClampPolicy policy);

std::vector<std::string> observed_vocabulary(std::span<const Activity> activities);

// ceil(pct/100 * |distinct base terms|) unless an absolute count is given.
std::size_t resolve_regex_target(const SchemeConfig& config, std::span<const Document> base_docs);

// Samples the regex features for one training split: builds the
// interspersed sequences, the PPS statistics and runs accept/reject
// sampling. Features are fixed per split, not per LOOCV fold.
GeneratedFeatures build_regex_features(std::span<const Activity> activities,
                                       const SchemeConfig& config, const FittedModels& models,
                                       std::span<const Document> base_docs, std::mt19937_64& rng);

struct EvalOutcome {
    std::vector<std::string> ids;
    std::vector<std::string> truth;
    LoocvResult loocv;
    std::size_t regex_features_used = 0;
};

// Runs body(0..count-1) on up to `jobs` workers; slots are independent and
// the first raised exception (by index) is rethrown after completion.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& body);

// The careful evaluation path used for final numbers: leave-one-out where
// the binning models are refitted on every training fold; regex features
// are sampled once per split and matched against each fold's sequences.
EvalOutcome loocv_evaluate(std::span<const Activity> activities, const SchemeConfig& config,
                           std::uint64_t seed, std::size_t jobs = 1);

// The cheap scorer used on the parameter-optimization half of a grid
// search: models fitted once on the whole half, then matrix LOOCV.
double score_half_loocv(std::span<const Activity> activities, const SchemeConfig& config,
                        std::uint64_t seed);

struct SplitIds {
    std::vector<std::string> param_ids;  // parameter-optimization half
    std::vector<std::string> eval_ids;   // final-estimation half
};

// Stratified 50/50 split by label; errors on unlabeled activities and on
// classes with fewer than 2 members. Ids come out in corpus order.
SplitIds stratified_split(const Corpus& corpus, std::mt19937_64& rng);

std::vector<Activity> select_by_ids(const Corpus& corpus, std::span<const std::string> ids);

struct GridPoint {
    std::size_t bins = 0;
    std::size_t gram = 0;
    double accuracy = 0.0;  // NaN when the point was infeasible
};

// Highest accuracy; ties prefer smaller N, then smaller n.
GridPoint select_best(std::span<const GridPoint> table);

struct GridResult {
    std::vector<GridPoint> table;  // row-major over (N, n)
    std::size_t best_bins = 0;
    std::size_t best_gram = 0;
    SplitIds split;
    EvalOutcome final_eval;  // best config evaluated on the other half
};

// Tests every (N, n) grid point on the parameter half and evaluates the
// winner on the estimation half. Grid points run on up to `jobs` workers;
// the result is independent of scheduling.
GridResult grid_search(const Corpus& corpus, const SchemeConfig& base_config,
                       std::span<const std::size_t> bin_choices,
                       std::span<const std::size_t> gram_choices, std::uint64_t seed,
                       std::size_t jobs = 1);

}  // namespace abow
