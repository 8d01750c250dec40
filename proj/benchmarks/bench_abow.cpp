#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "abow/encoding.hpp"
#include "abow/learn.hpp"
#include "abow/pipeline.hpp"
#include "abow/regexgen.hpp"
#include "abow/rng.hpp"
#include "abow/synth.hpp"
#include "abow/temporal.hpp"

namespace {

abow::Corpus benchmark_corpus(std::size_t per_class) {
    std::mt19937_64 rng = abow::named_stream(97, "datagen");
    return abow::generate(abow::parking_preset(per_class), rng);
}

void BM_FitBins(benchmark::State& state) {
    std::mt19937_64 rng(11);
    std::vector<double> durations;
    for (std::size_t i = 0; i < static_cast<std::size_t>(state.range(0)); ++i)
        durations.push_back(abow::canonical(rng) * 100.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(abow::fit_bins(durations, 5));
    }
}
BENCHMARK(BM_FitBins)->Arg(1000)->Arg(100000);

void BM_ExtractNgrams(benchmark::State& state) {
    std::mt19937_64 rng(13);
    std::vector<std::string> symbols;
    for (std::size_t i = 0; i < static_cast<std::size_t>(state.range(0)); ++i)
        symbols.push_back("sym" + std::to_string(abow::uniform_index(rng, 12)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(abow::extract_ngrams(symbols, 3));
    }
}
BENCHMARK(BM_ExtractNgrams)->Arg(64)->Arg(1024);

void BM_EncodeInterspersed(benchmark::State& state) {
    const abow::Corpus corpus = benchmark_corpus(100);
    abow::SchemeConfig config;
    config.scheme = abow::Scheme::interspersed;
    config.bins = 5;
    config.gram = 3;
    const abow::FittedModels models = abow::fit_models(corpus.activities, config);
    for (auto _ : state) {
        benchmark::DoNotOptimize(abow::encode_all(corpus.activities, config, models));
    }
}
BENCHMARK(BM_EncodeInterspersed);

void BM_RegexMatch(benchmark::State& state) {
    std::mt19937_64 rng(17);
    abow::VocabularyStats stats;
    for (std::size_t i = 0; i < 12; ++i) {
        stats.gamma_set.push_back("sym" + std::to_string(i));
        stats.weights[stats.gamma_set.back()] = 1 + i;
    }
    std::vector<abow::RegexFeature> features;
    for (std::size_t i = 0; i < 64; ++i) features.push_back(abow::sample_regex(stats, rng));
    abow::SymbolSequence seq;
    for (std::size_t i = 0; i < static_cast<std::size_t>(state.range(0)); ++i)
        seq.symbols.push_back(stats.gamma_set[abow::uniform_index(rng, stats.gamma_set.size())]);
    for (auto _ : state) {
        std::size_t matched = 0;
        for (const auto& f : features) matched += f.matches(seq) ? 1 : 0;
        benchmark::DoNotOptimize(matched);
    }
}
BENCHMARK(BM_RegexMatch)->Arg(32)->Arg(256);

void BM_KnnLoocv(benchmark::State& state) {
    const abow::Corpus corpus = benchmark_corpus(static_cast<std::size_t>(state.range(0)));
    abow::SchemeConfig config;
    config.scheme = abow::Scheme::interspersed;
    config.bins = 2;
    config.gram = 2;
    const abow::FittedModels models = abow::fit_models(corpus.activities, config);
    const abow::WeightedMatrix matrix =
        abow::tfidf_fit(abow::encode_all(corpus.activities, config, models));
    std::vector<std::string> labels;
    for (const auto& a : corpus.activities) labels.push_back(a.label);
    for (auto _ : state) {
        benchmark::DoNotOptimize(abow::knn_loocv(matrix, labels, 1));
    }
}
BENCHMARK(BM_KnnLoocv)->Arg(50)->Arg(200);

void BM_Kmeans(benchmark::State& state) {
    const abow::Corpus corpus = benchmark_corpus(100);
    abow::SchemeConfig config;
    config.scheme = abow::Scheme::interspersed;
    config.bins = 3;
    config.gram = 2;
    const abow::FittedModels models = abow::fit_models(corpus.activities, config);
    const abow::WeightedMatrix matrix =
        abow::tfidf_fit(abow::encode_all(corpus.activities, config, models));
    for (auto _ : state) {
        std::mt19937_64 rng(23);
        benchmark::DoNotOptimize(abow::kmeans(matrix, 7, rng, 5));
    }
}
BENCHMARK(BM_Kmeans);

}  // namespace

BENCHMARK_MAIN();
