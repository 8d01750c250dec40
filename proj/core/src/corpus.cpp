#include "abow/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <tuple>

#include "abow/error.hpp"
#include "json.hpp"

namespace abow {

namespace {

constexpr std::string_view kReserved = "^$.*+?()|";

std::string describe(const nlohmann::json::exception& e) {
    std::string msg = e.what();
    // nlohmann prefixes messages with "[json.exception.type_error.302]"; keep the tail.
    const auto pos = msg.find("] ");
    return pos == std::string::npos ? msg : msg.substr(pos + 2);
}

}  // namespace

bool valid_symbol(std::string_view kind) {
    if (kind.empty()) return false;
    for (const char c : kind) {
        if (std::isspace(static_cast<unsigned char>(c))) return false;
        if (kReserved.find(c) != std::string_view::npos) return false;
    }
    return true;
}

void Activity::sort_events() {
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
        return std::tie(a.start, a.end, a.kind) < std::tie(b.start, b.end, b.kind);
    });
}

void Activity::validate() const {
    if (id.empty()) throw input_error("activity with empty id");
    if (events.empty()) throw input_error("activity '" + id + "': empty events list");
    for (const Event& e : events) {
        if (!valid_symbol(e.kind))
            throw input_error("activity '" + id + "': invalid event kind '" + e.kind +
                              "' (empty, whitespace or reserved character ^$.*+?()| )");
        if (e.end < e.start)
            throw input_error("activity '" + id + "': event '" + e.kind + "' has end before start");
    }
    for (std::size_t i = 1; i < events.size(); ++i) {
        const Event& a = events[i - 1];
        const Event& b = events[i];
        if (std::tie(b.start, b.end, b.kind) < std::tie(a.start, a.end, a.kind))
            throw input_error("activity '" + id + "': events not sorted");
    }
}

Corpus Corpus::build(std::vector<Activity> activities) {
    Corpus corpus;
    corpus.activities = std::move(activities);
    std::set<std::string> ids;
    std::set<std::string> kinds;
    for (Activity& a : corpus.activities) {
        a.sort_events();
        a.validate();
        if (!ids.insert(a.id).second) throw input_error("duplicate activity id '" + a.id + "'");
        for (const Event& e : a.events) kinds.insert(e.kind);
    }
    corpus.vocabulary.assign(kinds.begin(), kinds.end());
    return corpus;
}

Corpus parse_corpus(std::istream& in, double time_scale) {
    if (time_scale <= 0.0) throw input_error("time scale must be positive");
    std::vector<Activity> activities;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw input_error("line " + std::to_string(line_no) + ": malformed JSON: " + describe(e));
        }
        Activity a;
        try {
            a.id = j.at("id").get<std::string>();
            if (j.contains("label") && !j.at("label").is_null())
                a.label = j.at("label").get<std::string>();
            for (const auto& je : j.at("events")) {
                Event e;
                e.kind = je.at("kind").get<std::string>();
                e.start = je.at("start").get<double>() * time_scale;
                e.end = je.at("end").get<double>() * time_scale;
                a.events.push_back(std::move(e));
            }
        } catch (const nlohmann::json::exception& e) {
            throw input_error("line " + std::to_string(line_no) + ": " + describe(e));
        }
        try {
            a.sort_events();
            a.validate();
        } catch (const input_error& e) {
            throw input_error("line " + std::to_string(line_no) + ": " + e.what());
        }
        activities.push_back(std::move(a));
    }
    if (activities.empty()) throw input_error("corpus contains no activities");
    return Corpus::build(std::move(activities));
}

Corpus parse_corpus_file(const std::string& path, double time_scale) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open corpus file '" + path + "'");
    return parse_corpus(in, time_scale);
}

void write_corpus(const Corpus& corpus, std::ostream& out) {
    for (const Activity& a : corpus.activities) {
        nlohmann::json j;
        j["id"] = a.id;
        if (a.label.empty())
            j["label"] = nullptr;
        else
            j["label"] = a.label;
        nlohmann::json events = nlohmann::json::array();
        for (const Event& e : a.events)
            events.push_back({{"kind", e.kind}, {"start", e.start}, {"end", e.end}});
        j["events"] = std::move(events);
        out << j.dump() << '\n';
    }
}

std::map<std::string, std::size_t> symbol_frequencies(const Corpus& corpus) {
    std::map<std::string, std::size_t> freq;
    for (const Activity& a : corpus.activities)
        for (const Event& e : a.events) ++freq[e.kind];
    return freq;
}

}  // namespace abow
