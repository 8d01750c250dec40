// Test-only reference implementations, kept deliberately naive and
// independent of the library code paths they are used to verify.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "abow/corpus.hpp"
#include "abow/regexgen.hpp"
#include "abow/rng.hpp"

namespace oracles {

// Brute-force matcher for the restricted template ^ .* (a) (b|..)q (g) .* $:
// enumerate every split position for alpha and every middle length allowed
// by the quantifier.
inline bool regex_matches(const abow::RegexFeature& f, const std::vector<std::string>& s) {
    const std::size_t len = s.size();
    const auto in_betas = [&](const std::string& x) {
        return std::find(f.betas.begin(), f.betas.end(), x) != f.betas.end();
    };
    std::size_t m_min = 0;
    std::size_t m_cap = len;
    if (f.quantifier == abow::Quantifier::plus) m_min = 1;
    if (f.quantifier == abow::Quantifier::opt) m_cap = 1;
    for (std::size_t i = 0; i < len; ++i) {
        if (s[i] != f.alpha) continue;
        for (std::size_t m = m_min; m <= m_cap; ++m) {
            const std::size_t g = i + 1 + m;
            if (g >= len) break;
            bool middle_ok = true;
            for (std::size_t t = i + 1; t < g && middle_ok; ++t) middle_ok = in_betas(s[t]);
            if (middle_ok && s[g] == f.gamma) return true;
        }
    }
    return false;
}

struct PairCounts {
    double same_same = 0;  // same cluster, same class
    double same_diff = 0;
    double diff_same = 0;
    double diff_diff = 0;
    double total() const { return same_same + same_diff + diff_same + diff_diff; }
};

inline PairCounts enumerate_pairs(std::span<const std::size_t> assign,
                                  std::span<const std::string> truth) {
    PairCounts counts;
    for (std::size_t i = 0; i < assign.size(); ++i)
        for (std::size_t j = i + 1; j < assign.size(); ++j) {
            const bool same_cluster = assign[i] == assign[j];
            const bool same_class = truth[i] == truth[j];
            if (same_cluster && same_class) ++counts.same_same;
            else if (same_cluster) ++counts.same_diff;
            else if (same_class) ++counts.diff_same;
            else ++counts.diff_diff;
        }
    return counts;
}

inline double rand_index(std::span<const std::size_t> assign, std::span<const std::string> truth) {
    const PairCounts c = enumerate_pairs(assign, truth);
    return (c.same_same + c.diff_diff) / c.total();
}

inline double adjusted_rand_index(std::span<const std::size_t> assign,
                                  std::span<const std::string> truth) {
    const PairCounts c = enumerate_pairs(assign, truth);
    const double same_cluster = c.same_same + c.same_diff;
    const double same_class = c.same_same + c.diff_same;
    const double expected = same_cluster * same_class / c.total();
    const double maximum = 0.5 * (same_cluster + same_class);
    if (maximum == expected) return 1.0;
    return (c.same_same - expected) / (maximum - expected);
}

inline double normalized_mutual_information(std::span<const std::size_t> assign,
                                            std::span<const std::string> truth) {
    const double n = static_cast<double>(assign.size());
    std::map<std::pair<std::size_t, std::string>, double> joint;
    std::map<std::size_t, double> clusters;
    std::map<std::string, double> classes;
    for (std::size_t i = 0; i < assign.size(); ++i) {
        joint[{assign[i], truth[i]}] += 1.0;
        clusters[assign[i]] += 1.0;
        classes[truth[i]] += 1.0;
    }
    double hu = 0.0, hv = 0.0, mi = 0.0;
    for (const auto& [k, c] : clusters) hu -= c / n * std::log(c / n);
    for (const auto& [k, c] : classes) hv -= c / n * std::log(c / n);
    for (const auto& [k, c] : joint)
        mi += c / n * std::log((c / n) / (clusters[k.first] / n * classes[k.second] / n));
    if (hu == 0.0 && hv == 0.0) return 1.0;
    if (hu == 0.0 || hv == 0.0) return 0.0;
    return mi / std::sqrt(hu * hv);
}

// Chi-square (1 df) survival function by Simpson quadrature over the
// equivalent standard-normal tail, independent of the erfc identity.
inline double chi2_survival_1df(double chi2) {
    if (chi2 <= 0.0) return 1.0;
    const auto density = [](double t) { return std::exp(-t * t / 2.0) / std::sqrt(2.0 * M_PI); };
    const double lo = std::sqrt(chi2);
    const double hi = lo + 50.0;
    const std::size_t steps = 100000;  // even
    const double h = (hi - lo) / static_cast<double>(steps);
    double sum = density(lo) + density(hi);
    for (std::size_t i = 1; i < steps; ++i)
        sum += density(lo + static_cast<double>(i) * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return 2.0 * sum * h / 3.0;
}

// Random activities on a quarter-second grid so that shifted/scaled
// timestamps and the tau/pi identity stay exact in floating point.
// Gaps may be negative (overlapping events).
inline abow::Activity random_activity(std::mt19937_64& rng, std::size_t index,
                                      std::size_t min_events, std::size_t max_events,
                                      bool allow_overlap = true) {
    abow::Activity a;
    a.id = "r-" + std::to_string(index);
    a.label = "x";
    const std::size_t count =
        min_events + abow::uniform_index(rng, max_events - min_events + 1);
    double t = static_cast<double>(abow::uniform_index(rng, 8)) * 0.25;
    for (std::size_t j = 0; j < count; ++j) {
        if (j > 0) {
            const long gap_steps = allow_overlap
                                       ? static_cast<long>(abow::uniform_index(rng, 49)) - 8
                                       : static_cast<long>(abow::uniform_index(rng, 41));
            t += static_cast<double>(gap_steps) * 0.25;
            if (t < 0.0) t = 0.0;
        }
        const double duration = static_cast<double>(abow::uniform_index(rng, 17)) * 0.25;
        abow::Event e;
        e.kind = "ev" + std::to_string(abow::uniform_index(rng, 5));
        e.start = t;
        e.end = t + duration;
        t = e.end;
        a.events.push_back(std::move(e));
    }
    a.sort_events();
    return a;
}

}  // namespace oracles
