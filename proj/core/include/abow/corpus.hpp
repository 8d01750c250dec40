#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace abow {

// One detected occurrence inside a track/session. Kinds are whole symbols;
// the characters ^ $ . * + ? ( ) | and whitespace are reserved so that
// regex features print unambiguously.
struct Event {
    std::string kind;
    double start = 0.0;  // seconds
    double end = 0.0;    // seconds, end >= start

    friend bool operator==(const Event&, const Event&) = default;
};

// True iff `kind` is usable as an event or bin symbol.
bool valid_symbol(std::string_view kind);

// A labeled, time-ordered event sequence. Events are kept sorted by
// (start, end, kind); the tie-break is our convention, simultaneous
// events are legal.
struct Activity {
    std::string id;
    std::string label;  // empty = unlabeled
    std::vector<Event> events;

    void sort_events();
    // Throws input_error on any invariant violation, naming the activity.
    void validate() const;

    friend bool operator==(const Activity&, const Activity&) = default;
};

struct Corpus {
    std::vector<Activity> activities;
    std::vector<std::string> vocabulary;  // sorted distinct event kinds

    // Sorts events, validates every activity, rejects duplicate ids and
    // computes the vocabulary.
    static Corpus build(std::vector<Activity> activities);

    friend bool operator==(const Corpus&, const Corpus&) = default;
};

// JSON Lines, one activity per line:
//   {"id": str, "label": str|null, "events": [{"kind": str, "start": f, "end": f}, ...]}
// time_scale multiplies every timestamp at load (datasets mix frame counts,
// seconds and minutes).
Corpus parse_corpus(std::istream& in, double time_scale = 1.0);
Corpus parse_corpus_file(const std::string& path, double time_scale = 1.0);
void write_corpus(const Corpus& corpus, std::ostream& out);

// Count of every observable-event kind across all activities. Values sum
// to the total event count; supplies the size measure for PPS sampling.
std::map<std::string, std::size_t> symbol_frequencies(const Corpus& corpus);

}  // namespace abow
