#include "abow/encoding.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>

#include "abow/error.hpp"
#include "json.hpp"

namespace abow {

std::string join_symbols(std::span<const std::string> symbols) {
    std::string term;
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        if (i > 0) term.push_back(kTermJoiner);
        term += symbols[i];
    }
    return term;
}

std::string to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::bow: return "bow";
        case Scheme::bow_time: return "bow_time";
        case Scheme::interspersed: return "interspersed";
        case Scheme::cumulative: return "cumulative";
        case Scheme::pyramid: return "pyramid";
    }
    throw std::logic_error("unknown scheme");
}

Scheme scheme_from_string(std::string_view name) {
    if (name == "bow") return Scheme::bow;
    if (name == "bow_time" || name == "bow+time") return Scheme::bow_time;
    if (name == "interspersed") return Scheme::interspersed;
    if (name == "cumulative") return Scheme::cumulative;
    if (name == "pyramid") return Scheme::pyramid;
    throw input_error("unknown scheme '" + std::string(name) +
                      "' (expected bow, bow_time, interspersed, cumulative or pyramid)");
}

std::size_t Document::total_count() const {
    std::size_t total = 0;
    for (const auto& [term, count] : terms) total += count;
    return total;
}

std::map<std::string, std::size_t> extract_ngrams(std::span<const std::string> symbols, std::size_t n) {
    if (n == 0) throw std::invalid_argument("extract_ngrams: gram size must be >= 1");
    if (symbols.size() < n) throw input_error("sequence shorter than gram size");
    std::map<std::string, std::size_t> grams;
    for (std::size_t i = 0; i + n <= symbols.size(); ++i)
        ++grams[join_symbols(symbols.subspan(i, n))];
    return grams;
}

namespace {

// Whole sequence as one gram when it is shorter than n; dropping short
// activities would bias the evaluation.
std::map<std::string, std::size_t> ngrams_with_fallback(std::span<const std::string> symbols,
                                                        std::size_t n) {
    if (symbols.size() < n) return {{join_symbols(symbols), 1}};
    return extract_ngrams(symbols, n);
}

double consecutive_gap(const Activity& activity, std::size_t j, ClampPolicy policy) {
    const double gap = tau(activity, j, j + 1);
    if (gap >= 0.0) return gap;
    if (policy == ClampPolicy::strict)
        throw input_error("activity '" + activity.id + "': negative gap between overlapping events (strict mode)");
    return 0.0;
}

}  // namespace

SymbolSequence interspersed_sequence(const Activity& activity, const BinningModel& tau_model,
                                     ClampPolicy policy) {
    SymbolSequence seq;
    seq.activity_id = activity.id;
    const std::size_t d = activity.events.size();
    seq.symbols.reserve(2 * d - 1);
    for (std::size_t j = 0; j < d; ++j) {
        if (j > 0) seq.symbols.push_back(quantize(tau_model, consecutive_gap(activity, j - 1, policy)));
        seq.symbols.push_back(activity.events[j].kind);
    }
    return seq;
}

Document encode_bow(const Activity& activity) {
    Document doc;
    doc.activity_id = activity.id;
    doc.scheme = Scheme::bow;
    for (const Event& e : activity.events) ++doc.terms[e.kind];
    return doc;
}

Document encode_bow_time(const Activity& activity, const BinningModel& tau_model, ClampPolicy policy) {
    Document doc = encode_bow(activity);
    doc.scheme = Scheme::bow_time;
    for (std::size_t j = 0; j + 1 < activity.events.size(); ++j)
        ++doc.terms[quantize(tau_model, consecutive_gap(activity, j, policy))];
    return doc;
}

Document encode_interspersed(const Activity& activity, const BinningModel& tau_model,
                             std::size_t gram, ClampPolicy policy) {
    const SymbolSequence seq = interspersed_sequence(activity, tau_model, policy);
    Document doc;
    doc.activity_id = activity.id;
    doc.scheme = Scheme::interspersed;
    doc.terms = ngrams_with_fallback(seq.symbols, gram);
    return doc;
}

Document encode_cumulative(const Activity& activity, const BinningModel& pi_model, std::size_t gram) {
    if (gram == 0) throw std::invalid_argument("encode_cumulative: gram size must be >= 1");
    Document doc;
    doc.activity_id = activity.id;
    doc.scheme = Scheme::cumulative;
    const std::size_t d = activity.events.size();
    const std::size_t window = std::min(gram, d);  // short activity: one whole-sequence window
    for (std::size_t j = 0; j + window <= d; ++j) {
        std::vector<std::string> symbols;
        symbols.reserve(window + 1);
        for (std::size_t i = 0; i < window; ++i) symbols.push_back(activity.events[j + i].kind);
        symbols.push_back(quantize(pi_model, pi(activity, j, j + window - 1)));
        ++doc.terms[join_symbols(symbols)];
    }
    return doc;
}

Document encode_pyramid(const Activity& activity, std::span<const BinningModel> models,
                        std::size_t gram, Scheme base, ClampPolicy policy) {
    if (gram == 0) throw std::invalid_argument("encode_pyramid: gram size must be >= 1");
    if (base != Scheme::interspersed && base != Scheme::cumulative)
        throw input_error("pyramid base must be interspersed or cumulative");
    if (models.size() < gram)
        throw input_error("pyramid encoding needs one binning model per level");
    Document doc;
    doc.activity_id = activity.id;
    doc.scheme = Scheme::pyramid;
    for (std::size_t level = 1; level <= gram; ++level) {
        const Document part = base == Scheme::interspersed
                                  ? encode_interspersed(activity, models[level - 1], level, policy)
                                  : encode_cumulative(activity, models[level - 1], level);
        const std::string prefix = "L" + std::to_string(level) + ":";
        for (const auto& [term, count] : part.terms) doc.terms[prefix + term] += count;
    }
    return doc;
}

void write_documents(std::span<const Document> docs, std::ostream& out) {
    for (const Document& doc : docs) {
        nlohmann::json j;
        j["id"] = doc.activity_id;
        j["scheme"] = to_string(doc.scheme);
        nlohmann::json terms = nlohmann::json::object();
        for (const auto& [term, count] : doc.terms) terms[term] = count;
        j["terms"] = std::move(terms);
        out << j.dump() << '\n';
    }
}

std::vector<Document> read_documents(std::istream& in) {
    std::vector<Document> docs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            const nlohmann::json j = nlohmann::json::parse(line);
            Document doc;
            doc.activity_id = j.at("id").get<std::string>();
            doc.scheme = scheme_from_string(j.at("scheme").get<std::string>());
            for (const auto& [term, count] : j.at("terms").items()) {
                const std::size_t c = count.get<std::size_t>();
                if (c == 0) throw input_error("zero term count");
                doc.terms[term] = c;
            }
            if (doc.terms.empty()) throw input_error("document with no terms");
            docs.push_back(std::move(doc));
        } catch (const nlohmann::json::exception& e) {
            throw input_error("documents line " + std::to_string(line_no) + ": " + e.what());
        } catch (const input_error& e) {
            throw input_error("documents line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return docs;
}

}  // namespace abow
