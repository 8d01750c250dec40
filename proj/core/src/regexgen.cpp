#include "abow/regexgen.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>

#include "abow/error.hpp"
#include "abow/rng.hpp"
#include "json.hpp"

namespace abow {

char quantifier_char(Quantifier q) {
    switch (q) {
        case Quantifier::star: return '*';
        case Quantifier::plus: return '+';
        case Quantifier::opt: return '?';
    }
    throw std::logic_error("unknown quantifier");
}

Quantifier quantifier_from_char(char c) {
    switch (c) {
        case '*': return Quantifier::star;
        case '+': return Quantifier::plus;
        case '?': return Quantifier::opt;
    }
    throw input_error(std::string("unknown quantifier '") + c + "'");
}

std::string RegexFeature::canonical_name() const {
    std::string name = "^ .* (" + alpha + ") (";
    for (std::size_t i = 0; i < betas.size(); ++i) {
        if (i > 0) name.push_back('|');
        name += betas[i];
    }
    name.push_back(')');
    name.push_back(quantifier_char(quantifier));
    name += " (" + gamma + ") .* $";
    return name;
}

bool RegexFeature::matches(const SymbolSequence& seq) const {
    const auto& s = seq.symbols;
    const std::size_t len = s.size();
    const std::size_t min_run = quantifier == Quantifier::plus ? 1 : 0;
    // Retry over alpha positions left to right; the beta-run after alpha is
    // a contiguous interval, so feasible middle lengths form a range and
    // gamma can be probed at each length from the maximal run downwards.
    for (std::size_t i = 0; i + 1 < len; ++i) {
        if (s[i] != alpha) continue;
        std::size_t run = 0;
        const std::size_t cap = quantifier == Quantifier::opt ? 1 : len;
        while (run < cap && i + 1 + run < len &&
               std::binary_search(betas.begin(), betas.end(), s[i + 1 + run]))
            ++run;
        const std::size_t m_hi = std::min(run, len - i - 2);  // gamma needs one slot
        for (std::size_t m = m_hi + 1; m-- > min_run;)
            if (s[i + 1 + m] == gamma) return true;
    }
    return false;
}

bool matches(const RegexFeature& feature, const SymbolSequence& seq) {
    return feature.matches(seq);
}

VocabularyStats VocabularyStats::build(std::span<const SymbolSequence> seqs,
                                       std::span<const std::string> observable_vocab,
                                       std::span<const std::string> bin_labels) {
    VocabularyStats stats;
    std::set<std::string> gamma(observable_vocab.begin(), observable_vocab.end());
    for (const std::string& label : bin_labels) {
        if (!gamma.insert(label).second)
            throw input_error("bin label '" + label + "' collides with an observable event kind");
    }
    stats.gamma_set.assign(gamma.begin(), gamma.end());
    for (const std::string& symbol : stats.gamma_set) stats.weights[symbol] = 0;
    for (const SymbolSequence& seq : seqs) {
        for (const std::string& symbol : seq.symbols) {
            const auto it = stats.weights.find(symbol);
            if (it == stats.weights.end())
                throw input_error("sequence symbol '" + symbol + "' not in the augmented alphabet");
            ++it->second;
        }
    }
    return stats;
}

namespace {

const std::string& pps_draw(const VocabularyStats& stats, double total, std::mt19937_64& rng) {
    double target = canonical(rng) * total;
    for (const std::string& symbol : stats.gamma_set) {
        target -= static_cast<double>(stats.weights.at(symbol));
        if (target < 0.0) return symbol;
    }
    return stats.gamma_set.back();  // guards against accumulated rounding
}

}  // namespace

RegexFeature sample_regex(const VocabularyStats& stats, std::mt19937_64& rng) {
    if (stats.gamma_set.empty()) throw input_error("sample_regex: empty alphabet");
    double total = 0.0;
    for (const auto& [symbol, weight] : stats.weights) total += static_cast<double>(weight);
    if (total <= 0.0) throw input_error("sample_regex: all PPS weights are zero");

    RegexFeature feature;
    feature.alpha = pps_draw(stats, total, rng);
    feature.gamma = pps_draw(stats, total, rng);

    const std::size_t size = stats.gamma_set.size();
    const std::size_t r = 1 + static_cast<std::size_t>(uniform_index(rng, size));

    // SRS without replacement: partial Fisher-Yates over the alphabet.
    std::vector<std::size_t> indices(size);
    for (std::size_t i = 0; i < size; ++i) indices[i] = i;
    for (std::size_t i = 0; i < r; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(uniform_index(rng, size - i));
        std::swap(indices[i], indices[j]);
        feature.betas.push_back(stats.gamma_set[indices[i]]);
    }
    std::sort(feature.betas.begin(), feature.betas.end());

    switch (uniform_index(rng, 3)) {
        case 0: feature.quantifier = Quantifier::star; break;
        case 1: feature.quantifier = Quantifier::plus; break;
        default: feature.quantifier = Quantifier::opt; break;
    }
    return feature;
}

GeneratedFeatures generate_accepted(std::span<const SymbolSequence> seqs, std::size_t target_count,
                                    const VocabularyStats& stats, std::mt19937_64& rng,
                                    std::size_t max_attempts) {
    if (seqs.empty()) throw input_error("generate_accepted: no sequences to match against");
    GeneratedFeatures out;
    std::set<std::string> seen;
    while (out.features.size() < target_count && out.attempts < max_attempts) {
        ++out.attempts;
        RegexFeature candidate = sample_regex(stats, rng);
        if (!seen.insert(candidate.canonical_name()).second) continue;
        const bool accepted = std::any_of(seqs.begin(), seqs.end(), [&](const SymbolSequence& seq) {
            return candidate.matches(seq);
        });
        if (accepted) out.features.push_back(std::move(candidate));
    }
    return out;
}

std::vector<Document> augment_documents(std::vector<Document> docs,
                                        std::span<const RegexFeature> features,
                                        std::span<const SymbolSequence> seqs) {
    if (docs.size() != seqs.size())
        throw input_error("augment_documents: documents and sequences differ in length");
    for (std::size_t i = 0; i < docs.size(); ++i) {
        if (docs[i].activity_id != seqs[i].activity_id)
            throw input_error("augment_documents: id mismatch at row " + std::to_string(i) + " ('" +
                              docs[i].activity_id + "' vs '" + seqs[i].activity_id + "')");
        for (const RegexFeature& feature : features)
            if (feature.matches(seqs[i])) docs[i].terms[feature.canonical_name()] = 1;
    }
    return docs;
}

void write_features(std::span<const RegexFeature> features, std::ostream& out) {
    nlohmann::json list = nlohmann::json::array();
    for (const RegexFeature& f : features) {
        nlohmann::json j;
        j["alpha"] = f.alpha;
        j["betas"] = f.betas;
        j["quantifier"] = std::string(1, quantifier_char(f.quantifier));
        j["gamma"] = f.gamma;
        j["name"] = f.canonical_name();
        list.push_back(std::move(j));
    }
    out << nlohmann::json{{"features", std::move(list)}}.dump(2) << '\n';
}

std::vector<RegexFeature> read_features(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw input_error(std::string("features file: malformed JSON: ") + e.what());
    }
    std::vector<RegexFeature> features;
    try {
        for (const auto& jf : j.at("features")) {
            RegexFeature f;
            f.alpha = jf.at("alpha").get<std::string>();
            f.betas = jf.at("betas").get<std::vector<std::string>>();
            const std::string q = jf.at("quantifier").get<std::string>();
            if (q.size() != 1) throw input_error("quantifier must be one character");
            f.quantifier = quantifier_from_char(q[0]);
            f.gamma = jf.at("gamma").get<std::string>();
            if (f.betas.empty()) throw input_error("feature with empty alternation");
            std::sort(f.betas.begin(), f.betas.end());
            features.push_back(std::move(f));
        }
    } catch (const nlohmann::json::exception& e) {
        throw input_error(std::string("features file: ") + e.what());
    }
    return features;
}

}  // namespace abow
