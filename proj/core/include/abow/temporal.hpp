#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "abow/corpus.hpp"

namespace abow {

// Overlapping events make the gap between two events negative. The default
// clamps such gaps to 0 before binning, keeping the modeled quantity
// non-negative; strict mode errors out instead.
enum class ClampPolicy { clamp_to_zero, strict };

// Time elapsed between the end of events[j] and the start of events[k],
// k > j. May be negative when events overlap; see ClampPolicy.
double tau(const Activity& activity, std::size_t j, std::size_t k);

// Time elapsed between the start of events[j] and the end of events[k],
// k >= j. pi(a, j, j) is the event's own duration.
double pi(const Activity& activity, std::size_t j, std::size_t k);

enum class TemporalVariant { tau, pi };

// Index pair naming one temporal event of an activity. Tau requires k > j,
// Pi requires k >= j.
struct TemporalEventKind {
    TemporalVariant variant;
    std::size_t j = 0;
    std::size_t k = 0;

    TemporalEventKind(TemporalVariant variant, std::size_t j, std::size_t k);
    double evaluate(const Activity& activity) const;
};

// The data-driven quantization function: N-1 cut points, N bin symbols.
// A duration maps to labels[#edges strictly below it], so a value equal to
// a cut point falls into the lower bin and everything past the last edge
// lands in the last bin.
struct BinningModel {
    std::vector<double> edges;                  // strictly ascending
    std::vector<std::string> labels;            // size = edges.size() + 1
    std::vector<std::size_t> realized_counts;   // per-bin training mass; empty for hand-built models

    std::size_t bin_count() const { return labels.size(); }
    void validate() const;

    std::string to_json_string() const;
    static BinningModel from_json_string(const std::string& text);
    static BinningModel load(const std::string& path);
    void save(const std::string& path) const;

    friend bool operator==(const BinningModel&, const BinningModel&) = default;
};

// Internal bin labels, namespaced to stay disjoint from event kinds.
std::string bin_label(std::size_t index);
// Presentation aliases A, B, C, ... for reports.
std::string bin_alias(std::size_t index);

// Fits equal-frequency bins: edges are the empirical quantiles at ranks
// ceil(i*S/N), i = 1..N-1, of the sorted durations. Heavy ties can collapse
// cut points; duplicates are merged (fewer effective bins) and the realized
// per-bin masses are recorded in the model.
BinningModel fit_bins(std::vector<double> durations, std::size_t bins);

std::size_t bin_index(const BinningModel& model, double duration);
const std::string& quantize(const BinningModel& model, double duration);

enum class DurationFamily {
    tau_consecutive,  // gaps between consecutive events
    pi_window,        // total time spanned by `window` consecutive events
};

// Gathers the duration samples a BinningModel is fitted on. Activities
// shorter than the window contribute nothing; negative gaps are clamped
// (or rejected, under strict).
std::vector<double> collect_durations(std::span<const Activity> activities, DurationFamily family,
                                      std::size_t window = 1,
                                      ClampPolicy policy = ClampPolicy::clamp_to_zero);
std::vector<double> collect_durations(const Corpus& corpus, DurationFamily family,
                                      std::size_t window = 1,
                                      ClampPolicy policy = ClampPolicy::clamp_to_zero);

}  // namespace abow
