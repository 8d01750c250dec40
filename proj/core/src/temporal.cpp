#include "abow/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "abow/error.hpp"
#include "json.hpp"

namespace abow {

double tau(const Activity& activity, std::size_t j, std::size_t k) {
    if (k >= activity.events.size()) throw std::invalid_argument("tau: index out of range");
    if (k <= j) throw std::invalid_argument("tau: requires k > j");
    return activity.events[k].start - activity.events[j].end;
}

double pi(const Activity& activity, std::size_t j, std::size_t k) {
    if (k >= activity.events.size()) throw std::invalid_argument("pi: index out of range");
    if (k < j) throw std::invalid_argument("pi: requires k >= j");
    return activity.events[k].end - activity.events[j].start;
}

TemporalEventKind::TemporalEventKind(TemporalVariant variant, std::size_t j, std::size_t k)
    : variant(variant), j(j), k(k) {
    if (variant == TemporalVariant::tau && k <= j)
        throw std::invalid_argument("temporal event tau requires k > j");
    if (variant == TemporalVariant::pi && k < j)
        throw std::invalid_argument("temporal event pi requires k >= j");
}

double TemporalEventKind::evaluate(const Activity& activity) const {
    return variant == TemporalVariant::tau ? tau(activity, j, k) : pi(activity, j, k);
}

std::string bin_label(std::size_t index) {
    return "T:" + std::to_string(index);
}

std::string bin_alias(std::size_t index) {
    std::string alias;
    do {
        alias.insert(alias.begin(), static_cast<char>('A' + index % 26));
        index = index / 26;
    } while (index-- > 0);
    return alias;
}

void BinningModel::validate() const {
    if (labels.empty()) throw input_error("binning model needs at least one bin");
    if (edges.size() + 1 != labels.size())
        throw input_error("binning model: labels must number edges + 1");
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (!(edges[i - 1] < edges[i])) throw input_error("binning model: edges not strictly ascending");
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (!valid_symbol(labels[i])) throw input_error("binning model: invalid bin label '" + labels[i] + "'");
        for (std::size_t j = i + 1; j < labels.size(); ++j)
            if (labels[i] == labels[j]) throw input_error("binning model: duplicate bin label '" + labels[i] + "'");
    }
    if (!realized_counts.empty() && realized_counts.size() != labels.size())
        throw input_error("binning model: realized_counts must match bin count");
}

BinningModel fit_bins(std::vector<double> durations, std::size_t bins) {
    if (bins == 0) throw input_error("fit_bins: bin count must be >= 1");
    const std::size_t sample_count = durations.size();
    if (sample_count < bins)
        throw input_error("fit_bins: need at least " + std::to_string(bins) + " durations, got " +
                          std::to_string(sample_count));
    for (const double d : durations)
        if (d < 0.0 || std::isnan(d)) throw input_error("fit_bins: negative or NaN duration");

    std::sort(durations.begin(), durations.end());

    BinningModel model;
    for (std::size_t i = 1; i < bins; ++i) {
        // rank ceil(i*S/N), 1-based
        const std::size_t rank = (i * sample_count + bins - 1) / bins;
        const double cut = durations[rank - 1];
        if (model.edges.empty() || model.edges.back() < cut) model.edges.push_back(cut);
    }
    const std::size_t effective = model.edges.size() + 1;
    for (std::size_t i = 0; i < effective; ++i) model.labels.push_back(bin_label(i));

    model.realized_counts.assign(effective, 0);
    for (const double d : durations) ++model.realized_counts[bin_index(model, d)];
    return model;
}

std::size_t bin_index(const BinningModel& model, double duration) {
    // number of edges strictly below the value; total on all reals
    const auto it = std::lower_bound(model.edges.begin(), model.edges.end(), duration);
    return static_cast<std::size_t>(it - model.edges.begin());
}

const std::string& quantize(const BinningModel& model, double duration) {
    return model.labels[bin_index(model, duration)];
}

std::string BinningModel::to_json_string() const {
    nlohmann::json j;
    j["n"] = labels.size();
    j["edges"] = edges;
    j["labels"] = labels;
    j["realized_counts"] = realized_counts;
    return j.dump();
}

BinningModel BinningModel::from_json_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw input_error(std::string("binning model: malformed JSON: ") + e.what());
    }
    BinningModel model;
    try {
        model.edges = j.at("edges").get<std::vector<double>>();
        model.labels = j.at("labels").get<std::vector<std::string>>();
        if (j.contains("realized_counts"))
            model.realized_counts = j.at("realized_counts").get<std::vector<std::size_t>>();
        if (j.contains("n") && j.at("n").get<std::size_t>() != model.labels.size())
            throw input_error("binning model: field n disagrees with labels");
    } catch (const nlohmann::json::exception& e) {
        throw input_error(std::string("binning model: ") + e.what());
    }
    model.validate();
    return model;
}

BinningModel BinningModel::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open binning model '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json_string(text);
}

void BinningModel::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw input_error("cannot write binning model '" + path + "'");
    out << to_json_string() << '\n';
}

namespace {

double clamp_gap(double gap, ClampPolicy policy, const std::string& activity_id) {
    if (gap >= 0.0) return gap;
    if (policy == ClampPolicy::strict)
        throw input_error("activity '" + activity_id + "': negative gap between overlapping events (strict mode)");
    return 0.0;
}

}  // namespace

std::vector<double> collect_durations(const Corpus& corpus, DurationFamily family,
                                      std::size_t window, ClampPolicy policy) {
    return collect_durations(std::span<const Activity>(corpus.activities), family, window, policy);
}

std::vector<double> collect_durations(std::span<const Activity> activities, DurationFamily family,
                                      std::size_t window, ClampPolicy policy) {
    if (window == 0) throw std::invalid_argument("collect_durations: window must be >= 1");
    std::vector<double> out;
    for (const Activity& a : activities) {
        const std::size_t d = a.events.size();
        switch (family) {
            case DurationFamily::tau_consecutive:
                for (std::size_t j = 0; j + 1 < d; ++j)
                    out.push_back(clamp_gap(tau(a, j, j + 1), policy, a.id));
                break;
            case DurationFamily::pi_window:
                if (d < window) break;
                for (std::size_t j = 0; j + window <= d; ++j)
                    out.push_back(pi(a, j, j + window - 1));
                break;
        }
    }
    return out;
}

}  // namespace abow
