#include "abow/synth.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <set>

#include "abow/error.hpp"
#include "abow/rng.hpp"
#include "json.hpp"

namespace abow {

double DistributionSpec::sample(std::mt19937_64& rng) const {
    double value = 0.0;
    switch (kind) {
        case Kind::uniform:
            value = a + canonical(rng) * (b - a);
            break;
        case Kind::log_normal:
            value = std::exp(a + b * standard_normal(rng));
            break;
    }
    return std::max(value, 0.0);
}

void DistributionSpec::validate() const {
    switch (kind) {
        case Kind::uniform:
            if (b < a) throw input_error("uniform distribution: high < low");
            break;
        case Kind::log_normal:
            if (b < 0.0 || !std::isfinite(a) || !std::isfinite(b))
                throw input_error("log-normal distribution: sigma must be finite and >= 0");
            break;
    }
}

DistributionSpec DistributionSpec::uniform(double low, double high) {
    DistributionSpec d;
    d.kind = Kind::uniform;
    d.a = low;
    d.b = high;
    d.validate();
    return d;
}

DistributionSpec DistributionSpec::log_normal(double mu, double sigma) {
    DistributionSpec d;
    d.kind = Kind::log_normal;
    d.a = mu;
    d.b = sigma;
    d.validate();
    return d;
}

DistributionSpec DistributionSpec::log_normal_mean(double mean, double sigma) {
    if (mean <= 0.0) throw input_error("log-normal distribution: mean must be positive");
    return log_normal(std::log(mean) - sigma * sigma / 2.0, sigma);
}

void ClassSpec::validate() const {
    if (!valid_symbol(name)) throw input_error("class spec: invalid class name '" + name + "'");
    if (count == 0) throw input_error("class '" + name + "': count must be >= 1");
    if (noise < 0.0 || noise > 1.0) throw input_error("class '" + name + "': noise must be in [0,1]");
    if (event_grammar.empty()) throw input_error("class '" + name + "': empty grammar");
    for (const GrammarSequence& seq : event_grammar) {
        if (seq.empty()) throw input_error("class '" + name + "': empty grammar sequence");
        for (const GrammarPosition& pos : seq) {
            if (pos.empty()) throw input_error("class '" + name + "': grammar position with no alternatives");
            for (const std::string& kind : pos)
                if (!valid_symbol(kind))
                    throw input_error("class '" + name + "': invalid event kind '" + kind + "'");
        }
    }
    gap_distribution.validate();
    duration_distribution.validate();
}

namespace {

std::vector<std::string> class_kinds(const ClassSpec& spec) {
    std::set<std::string> kinds;
    for (const GrammarSequence& seq : spec.event_grammar)
        for (const GrammarPosition& pos : seq)
            for (const std::string& kind : pos) kinds.insert(kind);
    return {kinds.begin(), kinds.end()};
}

std::vector<std::string> sample_symbols(const ClassSpec& spec, const std::vector<std::string>& kinds,
                                        std::mt19937_64& rng) {
    const GrammarSequence& seq =
        spec.event_grammar[uniform_index(rng, spec.event_grammar.size())];
    std::vector<std::string> symbols;
    symbols.reserve(seq.size());
    for (const GrammarPosition& pos : seq) {
        std::string kind = pos[uniform_index(rng, pos.size())];
        if (spec.noise > 0.0 && canonical(rng) < spec.noise) {
            switch (uniform_index(rng, 3)) {
                case 0:  // substitute
                    kind = kinds[uniform_index(rng, kinds.size())];
                    break;
                case 1:  // insert an extra event after this one
                    symbols.push_back(kind);
                    kind = kinds[uniform_index(rng, kinds.size())];
                    break;
                default:  // delete
                    continue;
            }
        }
        symbols.push_back(kind);
    }
    if (symbols.empty()) symbols.push_back(seq.front()[0]);  // deletion may not empty an activity
    return symbols;
}

std::string padded(std::size_t value, std::size_t width) {
    std::string s = std::to_string(value);
    while (s.size() < width) s.insert(s.begin(), '0');
    return s;
}

}  // namespace

Corpus generate(std::span<const ClassSpec> specs, std::mt19937_64& rng) {
    if (specs.empty()) throw input_error("generate: no class specs");
    for (const ClassSpec& spec : specs) spec.validate();

    std::vector<Activity> activities;
    for (const ClassSpec& spec : specs) {
        const std::vector<std::string> kinds = class_kinds(spec);
        for (std::size_t i = 0; i < spec.count; ++i) {
            Activity a;
            a.id = spec.name + "-" + padded(i, 4);
            a.label = spec.name;
            const std::vector<std::string> symbols = sample_symbols(spec, kinds, rng);
            double t = 0.0;
            for (std::size_t j = 0; j < symbols.size(); ++j) {
                if (j > 0) t += spec.gap_distribution.sample(rng);
                const double duration = spec.duration_distribution.sample(rng);
                a.events.push_back({symbols[j], t, t + duration});
                t += duration;
            }
            activities.push_back(std::move(a));
        }
    }
    return Corpus::build(std::move(activities));
}

std::vector<ClassSpec> parking_preset(std::size_t per_class) {
    const GrammarSequence route = {
        {"start"}, {"turn", "u-turn"}, {"stop"}, {"start"}, {"turn", "u-turn"}, {"stop"},
    };
    ClassSpec through;
    through.name = "through";
    through.event_grammar = {route};
    through.gap_distribution = DistributionSpec::log_normal_mean(2.0, 0.5);
    through.duration_distribution = DistributionSpec::log_normal_mean(1.0, 0.25);
    through.count = per_class;
    through.noise = 0.05;

    ClassSpec parking = through;
    parking.name = "parking";
    parking.gap_distribution = DistributionSpec::log_normal_mean(20.0, 0.5);
    return {through, parking};
}

std::vector<ClassSpec> anomaly_preset(std::size_t common, std::size_t rare) {
    const GrammarSequence routine = {{"enter"}, {"move"}, {"wait"}, {"move"}, {"exit"}};
    ClassSpec normal;
    normal.name = "routine";
    normal.event_grammar = {routine};
    normal.gap_distribution = DistributionSpec::log_normal_mean(5.0, 0.5);
    normal.duration_distribution = DistributionSpec::log_normal_mean(2.0, 0.25);
    normal.count = common;
    normal.noise = 0.02;

    ClassSpec suspect = normal;  // imitates the routine event sequence
    suspect.name = "suspect";
    suspect.gap_distribution = DistributionSpec::log_normal_mean(50.0, 0.5);
    suspect.count = rare;
    return {normal, suspect};
}

std::vector<ClassSpec> preset_by_name(const std::string& name, std::size_t per_class) {
    if (name == "parking") return parking_preset(per_class == 0 ? 100 : per_class);
    if (name == "anomaly") {
        if (per_class == 0) return anomaly_preset();
        return anomaly_preset(per_class, std::max<std::size_t>(per_class / 20, 1));
    }
    throw input_error("unknown preset '" + name + "' (expected parking or anomaly)");
}

namespace {

DistributionSpec distribution_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "uniform")
        return DistributionSpec::uniform(j.at("low").get<double>(), j.at("high").get<double>());
    if (kind == "log_normal") {
        if (j.contains("mean"))
            return DistributionSpec::log_normal_mean(j.at("mean").get<double>(),
                                                     j.at("sigma").get<double>());
        return DistributionSpec::log_normal(j.at("mu").get<double>(), j.at("sigma").get<double>());
    }
    throw input_error("unknown distribution kind '" + kind + "'");
}

}  // namespace

std::vector<ClassSpec> load_class_specs(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw input_error(std::string("class specs: malformed JSON: ") + e.what());
    }
    std::vector<ClassSpec> specs;
    try {
        for (const auto& jc : j.at("classes")) {
            ClassSpec spec;
            spec.name = jc.at("name").get<std::string>();
            spec.count = jc.at("count").get<std::size_t>();
            if (jc.contains("noise")) spec.noise = jc.at("noise").get<double>();
            for (const auto& jseq : jc.at("grammar")) {
                GrammarSequence seq;
                for (const auto& jpos : jseq) seq.push_back(jpos.get<std::vector<std::string>>());
                spec.event_grammar.push_back(std::move(seq));
            }
            spec.gap_distribution = distribution_from_json(jc.at("gap"));
            spec.duration_distribution = distribution_from_json(jc.at("duration"));
            spec.validate();
            specs.push_back(std::move(spec));
        }
    } catch (const nlohmann::json::exception& e) {
        throw input_error(std::string("class specs: ") + e.what());
    }
    if (specs.empty()) throw input_error("class specs: no classes defined");
    return specs;
}

}  // namespace abow
