#include <algorithm>
#include <cmath>
#include <set>

#include "abow/error.hpp"
#include "abow/learn.hpp"
#include "abow/pipeline.hpp"
#include "abow/synth.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace abow;

namespace {

Document doc_of(std::string id, std::map<std::string, std::size_t> terms) {
    Document d;
    d.activity_id = std::move(id);
    d.terms = std::move(terms);
    return d;
}

}  // namespace

TEST_SUITE_BEGIN("learn");

TEST_CASE("a term present in every document keeps idf ln(2)") {
    const std::vector<Document> docs = {doc_of("d1", {{"a", 1}}), doc_of("d2", {{"a", 3}})};
    const WeightedMatrix matrix = tfidf_fit(docs);
    REQUIRE(matrix.terms == std::vector<std::string>{"a"});
    CHECK(matrix.idf[0] == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(matrix.idf[0] > 0.0);
}

TEST_CASE("a single document weights proportionally to tf") {
    const std::vector<Document> docs = {doc_of("d1", {{"a", 2}, {"b", 6}})};
    const WeightedMatrix matrix = tfidf_fit(docs);
    const double wa = matrix.rows[0][0].second;
    const double wb = matrix.rows[0][1].second;
    CHECK(wb == doctest::Approx(3.0 * wa).epsilon(1e-12));
}

TEST_CASE("two disjoint singleton docs weight each term tf * ln(3)") {
    const std::vector<Document> docs = {doc_of("d1", {{"a", 1}}), doc_of("d2", {{"b", 1}})};
    const WeightedMatrix matrix = tfidf_fit(docs);
    // df(a) = 1, D = 2 -> ln(1 + 2/1) = ln 3
    CHECK(matrix.rows[0][0].second == doctest::Approx(std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("projection applies stored idf and drops unseen terms") {
    const std::vector<Document> docs = {doc_of("d1", {{"a", 1}}), doc_of("d2", {{"a", 2}, {"b", 1}})};
    const WeightedMatrix matrix = tfidf_fit(docs);
    const SparseRow row = matrix.project(doc_of("q", {{"a", 4}, {"zzz", 7}}));
    REQUIRE(row.size() == 1);
    CHECK(row[0].second == doctest::Approx(4.0 * std::log(1.0 + 2.0 / 2.0)));
}

TEST_CASE("cosine basics") {
    const SparseRow u = {{0, 1.0}, {1, 1.0}};
    const SparseRow v = {{0, 1.0}, {2, 1.0}};
    CHECK(cosine(u, u) == doctest::Approx(1.0));
    CHECK(cosine(u, v) == doctest::Approx(0.5));
    const SparseRow disjoint = {{5, 2.0}};
    CHECK(cosine(u, disjoint) == 0.0);
    CHECK(cosine(u, {}) == 0.0);  // zero-vector convention
}

TEST_CASE("cosine is scale-invariant and symmetric") {
    std::mt19937_64 rng(19);
    for (std::size_t trial = 0; trial < 50; ++trial) {
        SparseRow u, v;
        for (std::size_t col = 0; col < 8; ++col) {
            if (canonical(rng) < 0.6) u.emplace_back(col, canonical(rng) + 0.1);
            if (canonical(rng) < 0.6) v.emplace_back(col, canonical(rng) + 0.1);
        }
        SparseRow scaled = u;
        const double c = 0.25 + canonical(rng) * 8.0;
        for (auto& [col, w] : scaled) w *= c;
        CHECK(cosine(u, v) == doctest::Approx(cosine(v, u)).epsilon(1e-12));
        CHECK(cosine(scaled, v) == doctest::Approx(cosine(u, v)).epsilon(1e-9));
    }
}

TEST_CASE("well-separated clusters classify perfectly at k=1") {
    std::vector<Document> docs;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < 3; ++i) {
        docs.push_back(doc_of("p" + std::to_string(i), {{"park", 5}, {"wait", i + 1}}));
        labels.push_back("P");
        docs.push_back(doc_of("t" + std::to_string(i), {{"drive", 5}, {"go", i + 1}}));
        labels.push_back("T");
    }
    const LoocvResult result = knn_loocv(tfidf_fit(docs), labels, 1);
    CHECK(result.report.accuracy == 1.0);
    CHECK_FALSE(result.degenerate_labels);
}

TEST_CASE("a duplicate row with the opposite label forces a k=1 miss") {
    const std::vector<Document> docs = {
        doc_of("d1", {{"a", 1}}),
        doc_of("d2", {{"a", 1}}),  // identical to d1
        doc_of("d3", {{"b", 1}}),
        doc_of("d4", {{"b", 1}, {"c", 1}}),
    };
    const std::vector<std::string> labels = {"X", "Y", "Y", "Y"};
    const LoocvResult result = knn_loocv(tfidf_fit(docs), labels, 1);
    CHECK(result.predictions[0] == "Y");  // nearest neighbor is its duplicate
    CHECK(result.predictions[1] == "X");
}

TEST_CASE("one-hot documents fall to the deterministic tie-break") {
    const std::vector<Document> docs = {
        doc_of("d1", {{"a", 1}}),
        doc_of("d2", {{"b", 1}}),
        doc_of("d3", {{"c", 1}}),
        doc_of("d4", {{"d", 1}}),
    };
    const std::vector<std::string> labels = {"X", "X", "Y", "Y"};
    const LoocvResult first = knn_loocv(tfidf_fit(docs), labels, 1);
    const LoocvResult second = knn_loocv(tfidf_fit(docs), labels, 1);
    CHECK(first.predictions == second.predictions);
    // all similarities are zero; the first other row wins, which is row 0
    // (row 1 for row 0), so every prediction is "X"
    CHECK(first.predictions == std::vector<std::string>{"X", "X", "X", "X"});
    CHECK(first.report.accuracy == 0.5);
}

TEST_CASE("knn predictions survive per-row positive rescaling") {
    std::mt19937_64 gen(29);
    std::vector<Document> docs;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < 20; ++i) {
        std::map<std::string, std::size_t> terms;
        for (std::size_t t = 0; t < 5; ++t)
            if (canonical(gen) < 0.6) terms["t" + std::to_string(t)] = 1 + uniform_index(gen, 3);
        if (terms.empty()) terms["t0"] = 1;
        docs.push_back(doc_of("d" + std::to_string(i), terms));
        labels.push_back(uniform_index(gen, 2) == 0 ? "A" : "B");
    }
    WeightedMatrix matrix = tfidf_fit(docs);
    const auto before = knn_loocv(matrix, labels, 3).predictions;
    for (std::size_t i = 0; i < matrix.rows.size(); ++i) {
        const double scale = 0.5 + static_cast<double>(i % 4);
        for (auto& [col, w] : matrix.rows[i]) w *= scale;
    }
    CHECK(knn_loocv(matrix, labels, 3).predictions == before);
}

TEST_CASE("knn_loocv validates its inputs") {
    const std::vector<Document> docs = {doc_of("d1", {{"a", 1}}), doc_of("d2", {{"a", 1}})};
    const WeightedMatrix matrix = tfidf_fit(docs);
    const std::vector<std::string> labels = {"X", "Y"};
    CHECK_THROWS_AS(knn_loocv(matrix, labels, 2), input_error);  // k >= rows
    CHECK_THROWS_AS(knn_loocv(matrix, labels, 0), input_error);
    const std::vector<std::string> same = {"X", "X"};
    CHECK(knn_loocv(matrix, same, 1).degenerate_labels);
}

TEST_CASE("accuracy equals the confusion trace over the total") {
    std::mt19937_64 rng(23);
    std::vector<std::string> truth, preds;
    const std::vector<std::string> classes = {"u", "v", "w"};
    for (std::size_t i = 0; i < 200; ++i) {
        truth.push_back(classes[uniform_index(rng, 3)]);
        preds.push_back(classes[uniform_index(rng, 3)]);
    }
    const EvalReport report = make_report(truth, preds);
    std::size_t trace = 0, total = 0;
    for (std::size_t i = 0; i < report.classes.size(); ++i) {
        trace += report.confusion[i][i];
        for (std::size_t j = 0; j < report.classes.size(); ++j) total += report.confusion[i][j];
    }
    CHECK(report.accuracy == static_cast<double>(trace) / static_cast<double>(total));
    // row sums equal per-class support
    for (std::size_t i = 0; i < report.classes.size(); ++i) {
        std::size_t row_sum = 0;
        for (std::size_t j = 0; j < report.classes.size(); ++j) row_sum += report.confusion[i][j];
        const std::size_t support = static_cast<std::size_t>(
            std::count(truth.begin(), truth.end(), report.classes[i]));
        CHECK(row_sum == support);
    }
}

TEST_CASE("kmeans with k = rows separates distinct rows into singletons") {
    const std::vector<Document> docs = {
        doc_of("d1", {{"a", 1}}),
        doc_of("d2", {{"b", 1}}),
        doc_of("d3", {{"c", 1}}),
    };
    std::mt19937_64 rng(31);
    const auto assignment = kmeans(tfidf_fit(docs), 3, rng, 5);
    const std::set<std::size_t> clusters(assignment.begin(), assignment.end());
    CHECK(clusters.size() == 3);
}

TEST_CASE("kmeans recovers two duplicate groups exactly") {
    std::vector<Document> docs;
    for (std::size_t i = 0; i < 5; ++i) docs.push_back(doc_of("a" + std::to_string(i), {{"x", 2}}));
    for (std::size_t i = 0; i < 5; ++i) docs.push_back(doc_of("b" + std::to_string(i), {{"y", 3}}));
    std::mt19937_64 rng(33);
    const auto assignment = kmeans(tfidf_fit(docs), 2, rng, 5);
    for (std::size_t i = 1; i < 5; ++i) CHECK(assignment[i] == assignment[0]);
    for (std::size_t i = 6; i < 10; ++i) CHECK(assignment[i] == assignment[5]);
    CHECK(assignment[0] != assignment[5]);
}

TEST_CASE("kmeans is deterministic under a fixed seed") {
    std::mt19937_64 gen(35);
    std::vector<Document> docs;
    for (std::size_t i = 0; i < 30; ++i) {
        std::map<std::string, std::size_t> terms;
        for (std::size_t t = 0; t < 6; ++t)
            if (canonical(gen) < 0.5) terms["t" + std::to_string(t)] = 1 + uniform_index(gen, 4);
        if (terms.empty()) terms["t0"] = 1;
        docs.push_back(doc_of("d" + std::to_string(i), terms));
    }
    const WeightedMatrix matrix = tfidf_fit(docs);
    std::mt19937_64 rng_a(7), rng_b(7);
    CHECK(kmeans(matrix, 4, rng_a, 10) == kmeans(matrix, 4, rng_b, 10));
}

TEST_CASE("cluster metrics: perfect agreement scores (1,1,1)") {
    const std::vector<std::size_t> assign = {0, 0, 1, 1, 2};
    const std::vector<std::string> truth = {"a", "a", "b", "b", "c"};
    const ClusterQuality q = cluster_quality(assign, truth);
    CHECK(q.ri == doctest::Approx(1.0));
    CHECK(q.ari == doctest::Approx(1.0));
    CHECK(q.nmi == doctest::Approx(1.0));
}

TEST_CASE("the worked RI example: truth AABB vs assignment 1212") {
    const std::vector<std::size_t> assign = {1, 2, 1, 2};
    const std::vector<std::string> truth = {"A", "A", "B", "B"};
    const ClusterQuality q = cluster_quality(assign, truth);
    CHECK(q.ri == doctest::Approx(2.0 / 6.0));
    CHECK(q.ri == doctest::Approx(oracles::rand_index(assign, truth)));
}

TEST_CASE("single class and single cluster degenerate to (1,1,1)") {
    const std::vector<std::size_t> assign = {0, 0, 0};
    const std::vector<std::string> truth = {"a", "a", "a"};
    const ClusterQuality q = cluster_quality(assign, truth);
    CHECK(q.ri == 1.0);
    CHECK(q.ari == 1.0);
    CHECK(q.nmi == 1.0);
}

TEST_CASE("cluster metrics agree with the pair-enumeration oracle on random labelings") {
    std::mt19937_64 rng(43);
    for (std::size_t trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + uniform_index(rng, 11);
        std::vector<std::size_t> assign;
        std::vector<std::string> truth;
        for (std::size_t i = 0; i < n; ++i) {
            assign.push_back(uniform_index(rng, 4));
            truth.push_back("c" + std::to_string(uniform_index(rng, 3)));
        }
        const ClusterQuality q = cluster_quality(assign, truth);
        CHECK(q.ri == doctest::Approx(oracles::rand_index(assign, truth)).epsilon(1e-9));
        CHECK(q.ari == doctest::Approx(oracles::adjusted_rand_index(assign, truth)).epsilon(1e-9));
        CHECK(q.nmi ==
              doctest::Approx(oracles::normalized_mutual_information(assign, truth)).epsilon(1e-9));
        CHECK(q.ri >= 0.0);
        CHECK(q.ri <= 1.0);
        CHECK(q.ari <= 1.0);
    }
}

TEST_CASE("random balanced assignments have mean ARI near zero") {
    std::mt19937_64 rng(47);
    double sum = 0.0;
    const std::size_t trials = 100;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        const std::size_t n = 60;
        std::vector<std::size_t> assign(n);
        std::vector<std::string> truth(n);
        for (std::size_t i = 0; i < n; ++i) {
            truth[i] = i < n / 2 ? "a" : "b";
            assign[i] = uniform_index(rng, 2);
        }
        sum += cluster_quality(assign, truth).ari;
    }
    const double mean = sum / static_cast<double>(trials);
    CHECK(mean > -0.1);
    CHECK(mean < 0.1);
}

TEST_CASE("mcnemar: b=10, c=2 gives chi2 = 49/12 and p < 0.05") {
    // truth all "t"; method A wrong on 2+3 rows, B wrong on 10+3, overlap 3
    std::vector<std::string> truth, a, b;
    for (std::size_t i = 0; i < 10; ++i) {  // A right, B wrong
        truth.push_back("t");
        a.push_back("t");
        b.push_back("f");
    }
    for (std::size_t i = 0; i < 2; ++i) {  // A wrong, B right
        truth.push_back("t");
        a.push_back("f");
        b.push_back("t");
    }
    for (std::size_t i = 0; i < 5; ++i) {  // both right
        truth.push_back("t");
        a.push_back("t");
        b.push_back("t");
    }
    const McNemarResult result = mcnemar(a, b, truth);
    CHECK(result.b == 10);
    CHECK(result.c == 2);
    CHECK(result.chi2 == doctest::Approx(49.0 / 12.0).epsilon(1e-12));
    CHECK(result.p < 0.05);
    CHECK(result.p == doctest::Approx(oracles::chi2_survival_1df(49.0 / 12.0)).epsilon(1e-6));
}

TEST_CASE("mcnemar: b = c clamps chi2 to zero with p = 1") {
    std::vector<std::string> truth = {"t", "t"}, a = {"t", "f"}, b = {"f", "t"};
    const McNemarResult result = mcnemar(a, b, truth);
    CHECK(result.b == 1);
    CHECK(result.c == 1);
    CHECK(result.chi2 == 0.0);
    CHECK(result.p == 1.0);
}

TEST_CASE("mcnemar: no discordant pairs gives chi2 = 0, p = 1") {
    const std::vector<std::string> truth = {"t", "f"}, same = {"t", "f"};
    const McNemarResult result = mcnemar(same, same, truth);
    CHECK(result.b == 0);
    CHECK(result.c == 0);
    CHECK(result.chi2 == 0.0);
    CHECK(result.p == 1.0);
}

TEST_CASE("mcnemar is symmetric in its two methods") {
    std::mt19937_64 rng(53);
    std::vector<std::string> truth, a, b;
    for (std::size_t i = 0; i < 100; ++i) {
        truth.push_back("c" + std::to_string(uniform_index(rng, 3)));
        a.push_back("c" + std::to_string(uniform_index(rng, 3)));
        b.push_back("c" + std::to_string(uniform_index(rng, 3)));
    }
    const McNemarResult ab = mcnemar(a, b, truth);
    const McNemarResult ba = mcnemar(b, a, truth);
    CHECK(ab.b == ba.c);
    CHECK(ab.chi2 == ba.chi2);
    CHECK(ab.p == ba.p);
}

TEST_CASE("chi-square survival matches the quadrature oracle to 6+ digits") {
    for (const double chi2 : {0.5, 1.0, 3.84, 4.0833333, 10.0}) {
        CAPTURE(chi2);
        CHECK(chi2_sf_1df(chi2) == doctest::Approx(oracles::chi2_survival_1df(chi2)).epsilon(1e-7));
    }
    CHECK(chi2_sf_1df(3.8415) < 0.05);  // the 95% critical value
    CHECK(chi2_sf_1df(3.84) == doctest::Approx(0.05).epsilon(2e-3));
}

TEST_SUITE_END();
