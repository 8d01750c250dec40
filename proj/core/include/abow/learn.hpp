#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "abow/encoding.hpp"

namespace abow {

using SparseRow = std::vector<std::pair<std::size_t, double>>;  // (term index, weight), sorted

// tf-idf weighted document-term matrix. Weight = tf * ln(1 + D/df); the
// smoothing keeps ubiquitous terms at positive weight instead of zeroing
// them. Per-term idf is kept so unseen documents can be projected into the
// same space.
struct WeightedMatrix {
    std::vector<std::string> row_ids;
    std::vector<std::string> terms;  // sorted; column order
    std::vector<double> idf;         // aligned with terms
    std::vector<SparseRow> rows;

    // tf * stored idf; terms outside the fitted vocabulary are dropped.
    SparseRow project(const Document& doc) const;
};

WeightedMatrix tfidf_fit(std::span<const Document> docs);

// dot(u,v) / (|u||v|); 0 when either vector is zero.
double cosine(const SparseRow& u, const SparseRow& v);

struct EvalReport {
    double accuracy = 0.0;
    std::vector<std::string> classes;                 // sorted
    std::vector<std::vector<std::size_t>> confusion;  // [true][predicted]
    struct ClassStats {
        double precision = 0.0;
        double recall = 0.0;
    };
    std::vector<ClassStats> per_class;  // aligned with classes
};

EvalReport make_report(std::span<const std::string> truth, std::span<const std::string> predictions);

struct LoocvResult {
    EvalReport report;
    std::vector<std::string> predictions;
    std::vector<double> top_similarity;  // best-neighbor cosine, for threshold sweeps
    bool degenerate_labels = false;      // all rows share one label
};

// Leave-one-out: each row is classified by majority vote of its k most
// cosine-similar other rows; ties break by summed similarity, then by the
// smallest class token. Neighbor order is (similarity desc, row index asc),
// so results are deterministic.
LoocvResult knn_loocv(const WeightedMatrix& matrix, std::span<const std::string> labels, std::size_t k);

// Spherical k-means on L2-normalized rows (cosine objective, consistent
// with the classifier's geometry). Lloyd iterations to convergence or 100
// rounds; best of `restarts` seedings; an emptied cluster is re-seeded from
// the point farthest from its centroid. Deterministic under a fixed rng.
std::vector<std::size_t> kmeans(const WeightedMatrix& matrix, std::size_t k, std::mt19937_64& rng,
                                std::size_t restarts = 10);

struct ClusterQuality {
    double ri = 0.0;
    double ari = 0.0;
    double nmi = 0.0;
};

// Rand index, adjusted Rand index (contingency-table form) and normalized
// mutual information I(U;V)/sqrt(H(U)H(V)). Degenerate single-class /
// single-cluster agreement is defined as 1; NMI with exactly one trivial
// side is 0.
ClusterQuality cluster_quality(std::span<const std::size_t> assignment,
                               std::span<const std::string> truth);

struct McNemarResult {
    std::size_t b = 0;  // A correct, B wrong
    std::size_t c = 0;  // A wrong, B correct
    double chi2 = 0.0;
    double p = 1.0;
};

// Chi-square survival function with 1 degree of freedom.
double chi2_sf_1df(double chi2);

// McNemar's test with Yates' continuity correction:
// chi2 = (max(|b-c|-1, 0))^2 / (b+c), 0 when there are no discordant pairs.
McNemarResult mcnemar(std::span<const std::string> preds_a, std::span<const std::string> preds_b,
                      std::span<const std::string> truth);

}  // namespace abow
