#include "abow/learn.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "abow/error.hpp"
#include "abow/rng.hpp"

namespace abow {

SparseRow WeightedMatrix::project(const Document& doc) const {
    SparseRow row;
    for (const auto& [term, count] : doc.terms) {
        const auto it = std::lower_bound(terms.begin(), terms.end(), term);
        if (it == terms.end() || *it != term) continue;
        const std::size_t col = static_cast<std::size_t>(it - terms.begin());
        row.emplace_back(col, static_cast<double>(count) * idf[col]);
    }
    return row;
}

WeightedMatrix tfidf_fit(std::span<const Document> docs) {
    if (docs.empty()) throw input_error("tfidf_fit: no documents");
    WeightedMatrix matrix;

    std::map<std::string, std::size_t> df;
    for (const Document& doc : docs)
        for (const auto& [term, count] : doc.terms) ++df[term];

    matrix.terms.reserve(df.size());
    matrix.idf.reserve(df.size());
    const double doc_count = static_cast<double>(docs.size());
    for (const auto& [term, f] : df) {
        matrix.terms.push_back(term);
        matrix.idf.push_back(std::log(1.0 + doc_count / static_cast<double>(f)));
    }

    matrix.row_ids.reserve(docs.size());
    matrix.rows.reserve(docs.size());
    for (const Document& doc : docs) {
        matrix.row_ids.push_back(doc.activity_id);
        matrix.rows.push_back(matrix.project(doc));
    }
    return matrix;
}

namespace {

double norm(const SparseRow& u) {
    double sq = 0.0;
    for (const auto& [col, w] : u) sq += w * w;
    return std::sqrt(sq);
}

double dot(const SparseRow& u, const SparseRow& v) {
    double sum = 0.0;
    std::size_t i = 0, j = 0;
    while (i < u.size() && j < v.size()) {
        if (u[i].first < v[j].first)
            ++i;
        else if (u[i].first > v[j].first)
            ++j;
        else
            sum += u[i++].second * v[j++].second;
    }
    return sum;
}

}  // namespace

double cosine(const SparseRow& u, const SparseRow& v) {
    const double nu = norm(u);
    const double nv = norm(v);
    if (nu == 0.0 || nv == 0.0) return 0.0;
    return dot(u, v) / (nu * nv);
}

EvalReport make_report(std::span<const std::string> truth, std::span<const std::string> predictions) {
    if (truth.size() != predictions.size() || truth.empty())
        throw input_error("make_report: truth and predictions must be equally sized and non-empty");
    EvalReport report;
    std::set<std::string> classes(truth.begin(), truth.end());
    classes.insert(predictions.begin(), predictions.end());
    report.classes.assign(classes.begin(), classes.end());

    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < report.classes.size(); ++i) index[report.classes[i]] = i;

    report.confusion.assign(report.classes.size(), std::vector<std::size_t>(report.classes.size(), 0));
    std::size_t correct = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        ++report.confusion[index[truth[i]]][index[predictions[i]]];
        if (truth[i] == predictions[i]) ++correct;
    }
    report.accuracy = static_cast<double>(correct) / static_cast<double>(truth.size());

    report.per_class.resize(report.classes.size());
    for (std::size_t c = 0; c < report.classes.size(); ++c) {
        std::size_t row_sum = 0, col_sum = 0;
        for (std::size_t j = 0; j < report.classes.size(); ++j) {
            row_sum += report.confusion[c][j];
            col_sum += report.confusion[j][c];
        }
        const double hits = static_cast<double>(report.confusion[c][c]);
        report.per_class[c].precision = col_sum == 0 ? 0.0 : hits / static_cast<double>(col_sum);
        report.per_class[c].recall = row_sum == 0 ? 0.0 : hits / static_cast<double>(row_sum);
    }
    return report;
}

LoocvResult knn_loocv(const WeightedMatrix& matrix, std::span<const std::string> labels, std::size_t k) {
    const std::size_t n = matrix.rows.size();
    if (n < 2) throw input_error("knn_loocv: need at least 2 rows");
    if (labels.size() != n) throw input_error("knn_loocv: labels must match rows");
    if (k == 0 || k >= n) throw input_error("knn_loocv: k must satisfy 1 <= k < rows");

    std::vector<double> norms(n);
    for (std::size_t i = 0; i < n; ++i) norms[i] = norm(matrix.rows[i]);

    LoocvResult result;
    result.predictions.resize(n);
    result.top_similarity.resize(n);
    result.degenerate_labels =
        std::all_of(labels.begin(), labels.end(), [&](const std::string& l) { return l == labels[0]; });

    std::vector<std::pair<double, std::size_t>> sims;
    sims.reserve(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        sims.clear();
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            double sim = 0.0;
            if (norms[i] != 0.0 && norms[j] != 0.0)
                sim = dot(matrix.rows[i], matrix.rows[j]) / (norms[i] * norms[j]);
            sims.emplace_back(sim, j);
        }
        std::partial_sort(sims.begin(), sims.begin() + static_cast<std::ptrdiff_t>(k), sims.end(),
                          [](const auto& a, const auto& b) {
                              if (a.first != b.first) return a.first > b.first;
                              return a.second < b.second;
                          });
        result.top_similarity[i] = sims.front().first;

        // majority vote; ties by summed similarity, then smallest class token
        std::map<std::string, std::pair<std::size_t, double>> votes;  // label -> (count, sum sim)
        for (std::size_t v = 0; v < k; ++v) {
            auto& entry = votes[labels[sims[v].second]];
            ++entry.first;
            entry.second += sims[v].first;
        }
        const auto best = std::max_element(votes.begin(), votes.end(), [](const auto& a, const auto& b) {
            if (a.second.first != b.second.first) return a.second.first < b.second.first;
            if (a.second.second != b.second.second) return a.second.second < b.second.second;
            return a.first > b.first;  // prefer the smaller token
        });
        result.predictions[i] = best->first;
    }
    result.report = make_report(labels, result.predictions);
    return result;
}

namespace {

std::vector<double> unit_dense(const SparseRow& row, std::size_t width) {
    std::vector<double> dense(width, 0.0);
    double sq = 0.0;
    for (const auto& [col, w] : row) {
        dense[col] = w;
        sq += w * w;
    }
    if (sq > 0.0) {
        const double inv = 1.0 / std::sqrt(sq);
        for (const auto& [col, w] : row) dense[col] = w * inv;
    }
    return dense;
}

double dot_dense(const SparseRow& row, const std::vector<double>& centroid, double row_norm) {
    if (row_norm == 0.0) return 0.0;
    double sum = 0.0;
    for (const auto& [col, w] : row) sum += w * centroid[col];
    return sum / row_norm;
}

void normalize(std::vector<double>& v) {
    double sq = 0.0;
    for (const double x : v) sq += x * x;
    if (sq == 0.0) return;
    const double inv = 1.0 / std::sqrt(sq);
    for (double& x : v) x *= inv;
}

struct KmeansRun {
    std::vector<std::size_t> assignment;
    double objective = 0.0;
};

KmeansRun kmeans_once(const WeightedMatrix& matrix, std::size_t k, std::mt19937_64& rng) {
    const std::size_t n = matrix.rows.size();
    const std::size_t width = matrix.terms.size();

    std::vector<double> norms(n);
    for (std::size_t i = 0; i < n; ++i) norms[i] = norm(matrix.rows[i]);

    // distinct random rows as initial centroids
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(uniform_index(rng, n - i));
        std::swap(order[i], order[j]);
    }
    std::vector<std::vector<double>> centroids;
    centroids.reserve(k);
    for (std::size_t c = 0; c < k; ++c) centroids.push_back(unit_dense(matrix.rows[order[c]], width));

    std::vector<std::size_t> assignment(n, 0);
    for (std::size_t iter = 0; iter < 100; ++iter) {
        bool changed = iter == 0;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = 0;
            double best_sim = -2.0;
            for (std::size_t c = 0; c < k; ++c) {
                const double sim = dot_dense(matrix.rows[i], centroids[c], norms[i]);
                if (sim > best_sim) {
                    best_sim = sim;
                    best = c;
                }
            }
            if (assignment[i] != best) {
                assignment[i] = best;
                changed = true;
            }
        }

        std::vector<std::size_t> sizes(k, 0);
        for (const std::size_t a : assignment) ++sizes[a];

        // re-seed an emptied cluster from the point farthest from its
        // centroid; k <= n guarantees some cluster still holds >= 2 points
        for (std::size_t c = 0; c < k; ++c) {
            if (sizes[c] > 0) continue;
            std::size_t farthest = n;
            double worst = 2.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (sizes[assignment[i]] <= 1) continue;
                const double sim = dot_dense(matrix.rows[i], centroids[assignment[i]], norms[i]);
                if (sim < worst) {
                    worst = sim;
                    farthest = i;
                }
            }
            if (farthest == n) continue;
            --sizes[assignment[farthest]];
            ++sizes[c];
            assignment[farthest] = c;
            changed = true;
        }

        if (!changed) break;

        for (auto& c : centroids) std::fill(c.begin(), c.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            if (norms[i] == 0.0) continue;
            auto& c = centroids[assignment[i]];
            for (const auto& [col, w] : matrix.rows[i]) c[col] += w / norms[i];
        }
        for (auto& c : centroids) normalize(c);
    }

    KmeansRun run;
    run.assignment = std::move(assignment);
    for (std::size_t i = 0; i < n; ++i)
        run.objective += dot_dense(matrix.rows[i], centroids[run.assignment[i]], norms[i]);
    return run;
}

}  // namespace

std::vector<std::size_t> kmeans(const WeightedMatrix& matrix, std::size_t k, std::mt19937_64& rng,
                                std::size_t restarts) {
    const std::size_t n = matrix.rows.size();
    if (k == 0 || k > n) throw input_error("kmeans: k must satisfy 1 <= k <= rows");
    if (restarts == 0) throw input_error("kmeans: need at least one restart");

    // seeds drawn up front so results do not depend on scheduling
    std::vector<std::uint64_t> seeds(restarts);
    for (auto& s : seeds) s = rng();

    KmeansRun best;
    best.objective = -1.0;
    for (std::size_t r = 0; r < restarts; ++r) {
        std::mt19937_64 sub(seeds[r]);
        KmeansRun run = kmeans_once(matrix, k, sub);
        if (run.objective > best.objective) best = std::move(run);
    }
    return best.assignment;
}

namespace {

double comb2(double x) { return x * (x - 1.0) / 2.0; }

}  // namespace

ClusterQuality cluster_quality(std::span<const std::size_t> assignment,
                               std::span<const std::string> truth) {
    const std::size_t n = assignment.size();
    if (n != truth.size() || n < 2)
        throw input_error("cluster_quality: assignment and truth must be equally sized, length >= 2");

    std::map<std::pair<std::size_t, std::string>, std::size_t> joint;
    std::map<std::size_t, std::size_t> cluster_sizes;
    std::map<std::string, std::size_t> class_sizes;
    for (std::size_t i = 0; i < n; ++i) {
        ++joint[{assignment[i], truth[i]}];
        ++cluster_sizes[assignment[i]];
        ++class_sizes[truth[i]];
    }

    double s_joint = 0.0, s_cluster = 0.0, s_class = 0.0;
    for (const auto& [key, count] : joint) s_joint += comb2(static_cast<double>(count));
    for (const auto& [key, count] : cluster_sizes) s_cluster += comb2(static_cast<double>(count));
    for (const auto& [key, count] : class_sizes) s_class += comb2(static_cast<double>(count));
    const double pairs = comb2(static_cast<double>(n));

    ClusterQuality q;
    q.ri = (pairs - s_cluster - s_class + 2.0 * s_joint) / pairs;

    const double expected = s_cluster * s_class / pairs;
    const double maximum = 0.5 * (s_cluster + s_class);
    q.ari = maximum == expected ? 1.0 : (s_joint - expected) / (maximum - expected);

    const double dn = static_cast<double>(n);
    double h_cluster = 0.0, h_class = 0.0, mutual = 0.0;
    for (const auto& [key, count] : cluster_sizes) {
        const double p = static_cast<double>(count) / dn;
        h_cluster -= p * std::log(p);
    }
    for (const auto& [key, count] : class_sizes) {
        const double p = static_cast<double>(count) / dn;
        h_class -= p * std::log(p);
    }
    for (const auto& [key, count] : joint) {
        const double p = static_cast<double>(count) / dn;
        const double pu = static_cast<double>(cluster_sizes[key.first]) / dn;
        const double pv = static_cast<double>(class_sizes[key.second]) / dn;
        mutual += p * std::log(p / (pu * pv));
    }
    if (h_cluster == 0.0 && h_class == 0.0)
        q.nmi = 1.0;
    else if (h_cluster == 0.0 || h_class == 0.0)
        q.nmi = 0.0;
    else
        q.nmi = mutual / std::sqrt(h_cluster * h_class);
    return q;
}

double chi2_sf_1df(double chi2) {
    if (chi2 <= 0.0) return 1.0;
    return std::erfc(std::sqrt(chi2 / 2.0));
}

McNemarResult mcnemar(std::span<const std::string> preds_a, std::span<const std::string> preds_b,
                      std::span<const std::string> truth) {
    if (preds_a.size() != truth.size() || preds_b.size() != truth.size() || truth.empty())
        throw input_error("mcnemar: prediction and truth vectors must be equally sized and non-empty");
    McNemarResult result;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool a_right = preds_a[i] == truth[i];
        const bool b_right = preds_b[i] == truth[i];
        if (a_right && !b_right) ++result.b;
        if (!a_right && b_right) ++result.c;
    }
    const double discordant = static_cast<double>(result.b + result.c);
    if (discordant == 0.0) {
        result.chi2 = 0.0;
        result.p = 1.0;
        return result;
    }
    const double diff = std::abs(static_cast<double>(result.b) - static_cast<double>(result.c));
    const double corrected = std::max(diff - 1.0, 0.0);  // Yates, clamped so b=c gives 0
    result.chi2 = corrected * corrected / discordant;
    result.p = chi2_sf_1df(result.chi2);
    return result;
}

}  // namespace abow
