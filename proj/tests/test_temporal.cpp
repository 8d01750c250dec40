#include <cmath>
#include <set>

#include "abow/error.hpp"
#include "abow/temporal.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace abow;

namespace {

Activity make_activity(std::vector<std::pair<double, double>> times, std::string id = "a") {
    Activity a;
    a.id = std::move(id);
    for (std::size_t i = 0; i < times.size(); ++i)
        a.events.push_back({"e" + std::to_string(i + 1), times[i].first, times[i].second});
    a.sort_events();
    return a;
}

}  // namespace

TEST_SUITE_BEGIN("temporal");

TEST_CASE("tau is the gap between end and next start") {
    const Activity a = make_activity({{0, 10}, {14, 15}});
    CHECK(tau(a, 0, 1) == 4.0);
}

TEST_CASE("tau of adjacent events is zero") {
    const Activity a = make_activity({{0, 10}, {10, 11}});
    CHECK(tau(a, 0, 1) == 0.0);
}

TEST_CASE("tau of overlapping events is negative and clamped when collecting") {
    const Activity a = make_activity({{0, 10}, {8, 12}});
    CHECK(tau(a, 0, 1) == -2.0);

    Corpus corpus;
    corpus.activities = {a};
    const auto clamped = collect_durations(corpus, DurationFamily::tau_consecutive);
    REQUIRE(clamped.size() == 1);
    CHECK(clamped[0] == 0.0);
    CHECK_THROWS_AS(
        collect_durations(corpus, DurationFamily::tau_consecutive, 1, ClampPolicy::strict),
        input_error);
}

TEST_CASE("tau rejects bad indices") {
    const Activity a = make_activity({{0, 1}, {2, 3}});
    CHECK_THROWS_AS(tau(a, 0, 2), std::invalid_argument);
    CHECK_THROWS_AS(tau(a, 1, 1), std::invalid_argument);
}

TEST_CASE("pi of a single event is its own duration") {
    const Activity a = make_activity({{3, 7}});
    CHECK(pi(a, 0, 0) == 4.0);
}

TEST_CASE("pi spans start of first to end of last and the identity holds") {
    const Activity a = make_activity({{0, 1}, {5, 6}});
    CHECK(pi(a, 0, 1) == 6.0);
    CHECK(pi(a, 0, 1) == pi(a, 0, 0) + tau(a, 0, 1) + pi(a, 1, 1));
    CHECK(pi(a, 0, 0) == 1.0);
    CHECK(tau(a, 0, 1) == 4.0);
    CHECK(pi(a, 1, 1) == 1.0);
}

TEST_CASE("pi over three unit events with unit gaps") {
    const Activity a = make_activity({{0, 1}, {2, 3}, {4, 5}});
    CHECK(pi(a, 0, 2) == 5.0);
}

TEST_CASE("identity pi = pi + tau + pi holds exactly on random activities") {
    std::mt19937_64 rng(7);
    for (std::size_t trial = 0; trial < 200; ++trial) {
        const Activity a = oracles::random_activity(rng, trial, 2, 10);
        for (std::size_t j = 0; j < a.events.size(); ++j)
            for (std::size_t k = j + 1; k < a.events.size(); ++k) {
                const double gap = std::abs(pi(a, j, k) - (pi(a, j, j) + tau(a, j, k) + pi(a, k, k)));
                CHECK(gap <= 1e-12);
            }
    }
}

TEST_CASE("temporal event kinds validate their index ordering") {
    CHECK_THROWS_AS(TemporalEventKind(TemporalVariant::tau, 2, 2), std::invalid_argument);
    CHECK_THROWS_AS(TemporalEventKind(TemporalVariant::pi, 3, 2), std::invalid_argument);
    const Activity a = make_activity({{0, 1}, {2, 3}});
    CHECK(TemporalEventKind(TemporalVariant::tau, 0, 1).evaluate(a) == 1.0);
    CHECK(TemporalEventKind(TemporalVariant::pi, 1, 1).evaluate(a) == 1.0);
}

TEST_CASE("fit_bins on 1..10 with five bins gives edges 2,4,6,8") {
    const BinningModel model = fit_bins({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, 5);
    CHECK(model.edges == std::vector<double>{2, 4, 6, 8});
    CHECK(model.bin_count() == 5);
    CHECK(model.realized_counts == std::vector<std::size_t>{2, 2, 2, 2, 2});
}

TEST_CASE("durations 4 and 20 land in different bins of a fitted model") {
    // mirrors the worked example: psi(4) = D, psi(20) = E
    BinningModel model;
    model.edges = {0.5, 1.5, 3, 15};
    model.labels = {"A", "B", "C", "D", "E"};
    model.validate();
    CHECK(quantize(model, 4.0) == "D");
    CHECK(quantize(model, 20.0) == "E");
}

TEST_CASE("a single bin has no edges and absorbs everything") {
    const BinningModel model = fit_bins({5, 1, 9}, 1);
    CHECK(model.edges.empty());
    CHECK(quantize(model, 0.0) == model.labels[0]);
    CHECK(quantize(model, 1e9) == model.labels[0]);
}

TEST_CASE("fit_bins rejects bad input") {
    CHECK_THROWS_AS(fit_bins({1.0}, 2), input_error);             // S < N
    CHECK_THROWS_AS(fit_bins({}, 0), input_error);                // N = 0
    CHECK_THROWS_AS(fit_bins({1.0, -0.5, 2.0}, 2), input_error);  // negative duration
}

TEST_CASE("quantize counts edges strictly below the value") {
    BinningModel model;
    model.edges = {2, 4, 6, 8};
    model.labels = {"b0", "b1", "b2", "b3", "b4"};
    model.validate();

    // brute-force oracle: count edges < d
    const auto expected_index = [&](double d) {
        std::size_t n = 0;
        for (const double e : model.edges)
            if (e < d) ++n;
        return n;
    };
    for (const double d : {0.0, 1.0, 2.0, 3.9, 4.0, 4.1, 6.0, 8.0, 9.0, 1e9}) {
        CAPTURE(d);
        CHECK(bin_index(model, d) == expected_index(d));
    }
    CHECK(quantize(model, 4.0) == "b1");  // edge values fall into the lower bin
    CHECK(quantize(model, 0.0) == "b0");
    CHECK(quantize(model, 1e9) == "b4");
}

TEST_CASE("quantize is monotone and total") {
    std::mt19937_64 rng(13);
    for (std::size_t trial = 0; trial < 50; ++trial) {
        std::vector<double> durations;
        const std::size_t count = 5 + uniform_index(rng, 40);
        for (std::size_t i = 0; i < count; ++i)
            durations.push_back(static_cast<double>(uniform_index(rng, 1000)) / 4.0);
        const std::size_t bins = 1 + uniform_index(rng, 5);
        if (durations.size() < bins) continue;
        const BinningModel model = fit_bins(durations, bins);
        double previous = -1.0;
        for (double d = 0.0; d < 260.0; d += 0.5) {
            const double index = static_cast<double>(bin_index(model, d));
            CHECK(index >= previous);
            CHECK(index < static_cast<double>(model.bin_count()));
            previous = index;
        }
    }
}

TEST_CASE("equal-mass property: distinct values and N | S give exactly S/N per bin") {
    std::mt19937_64 rng(29);
    for (std::size_t trial = 0; trial < 50; ++trial) {
        const std::size_t bins = 1 + uniform_index(rng, 8);
        const std::size_t per_bin = 1 + uniform_index(rng, 12);
        const std::size_t total = bins * per_bin;
        std::set<double> values;
        while (values.size() < total)
            values.insert(static_cast<double>(uniform_index(rng, 100000)) / 8.0);
        const std::vector<double> durations(values.begin(), values.end());
        const BinningModel model = fit_bins(durations, bins);
        REQUIRE(model.bin_count() == bins);
        std::vector<std::size_t> mass(bins, 0);
        for (const double d : durations) ++mass[bin_index(model, d)];
        for (const std::size_t m : mass) CHECK(m == per_bin);
    }
}

TEST_CASE("heavy ties collapse duplicate cut points instead of breaking the model") {
    const BinningModel model = fit_bins({1, 1, 1, 1, 1, 1, 9, 9}, 4);
    model.validate();
    CHECK(model.bin_count() < 4);
    std::size_t total = 0;
    for (const std::size_t c : model.realized_counts) total += c;
    CHECK(total == 8);
}

TEST_CASE("collect_durations: one activity with three events gives two tau samples") {
    Corpus corpus;
    corpus.activities = {make_activity({{0, 1}, {2, 3}, {7, 8}})};
    const auto taus = collect_durations(corpus, DurationFamily::tau_consecutive);
    CHECK(taus == std::vector<double>{1.0, 4.0});
}

TEST_CASE("pi window of one is the per-event durations") {
    Corpus corpus;
    corpus.activities = {make_activity({{0, 2}, {3, 6}})};
    const auto durations = collect_durations(corpus, DurationFamily::pi_window, 1);
    CHECK(durations == std::vector<double>{2.0, 3.0});
}

TEST_CASE("pi window of three over five events gives three samples") {
    const Activity a = make_activity({{0, 1}, {2, 3}, {4, 5}, {6, 7}, {8, 9}});
    Corpus corpus;
    corpus.activities = {a};
    const auto durations = collect_durations(corpus, DurationFamily::pi_window, 3);
    REQUIRE(durations.size() == 3);
    CHECK(durations[0] == pi(a, 0, 2));
    CHECK(durations[1] == pi(a, 1, 3));
    CHECK(durations[2] == pi(a, 2, 4));
}

TEST_CASE("window larger than every activity collects nothing") {
    Corpus corpus;
    corpus.activities = {make_activity({{0, 1}, {2, 3}})};
    CHECK(collect_durations(corpus, DurationFamily::pi_window, 5).empty());
}

TEST_CASE("binning model serializes and reloads") {
    const BinningModel model = fit_bins({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, 5);
    const BinningModel back = BinningModel::from_json_string(model.to_json_string());
    CHECK(back == model);
}

TEST_CASE("bin aliases run A..Z, AA..") {
    CHECK(bin_alias(0) == "A");
    CHECK(bin_alias(4) == "E");
    CHECK(bin_alias(25) == "Z");
    CHECK(bin_alias(26) == "AA");
}

TEST_SUITE_END();
