#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "abow/corpus.hpp"
#include "abow/temporal.hpp"

namespace abow {

// Separator between symbols inside a term string. Symbols cannot contain
// control characters (whitespace is banned), so joined terms are bit-exact
// across runs and safe to share through vocabulary files.
inline constexpr char kTermJoiner = '\x1f';

std::string join_symbols(std::span<const std::string> symbols);

// An activity rendered as a plain token sequence over the augmented
// alphabet (observable kinds plus temporal-bin labels).
struct SymbolSequence {
    std::string activity_id;
    std::vector<std::string> symbols;
};

enum class Scheme { bow, bow_time, interspersed, cumulative, pyramid };

std::string to_string(Scheme scheme);
Scheme scheme_from_string(std::string_view name);

// Sparse term histogram for one activity; the unit fed to the classifier.
struct Document {
    std::string activity_id;
    Scheme scheme = Scheme::bow;
    std::map<std::string, std::size_t> terms;  // counts strictly positive

    std::size_t total_count() const;

    friend bool operator==(const Document&, const Document&) = default;
};

// Counts of all |seq|-n+1 contiguous n-grams. Throws input_error
// "sequence shorter than gram size" when |seq| < n; encoders fall back to
// a single whole-sequence gram instead of dropping the activity.
std::map<std::string, std::size_t> extract_ngrams(std::span<const std::string> symbols, std::size_t n);

// The interspersed event stream T_i: quantized consecutive gaps inserted
// between the original events, length exactly 2d-1.
SymbolSequence interspersed_sequence(const Activity& activity, const BinningModel& tau_model,
                                     ClampPolicy policy = ClampPolicy::clamp_to_zero);

Document encode_bow(const Activity& activity);

// Plain BoW plus the quantized consecutive-gap symbols as standalone terms:
// d observable counts plus d-1 temporal counts.
Document encode_bow_time(const Activity& activity, const BinningModel& tau_model,
                         ClampPolicy policy = ClampPolicy::clamp_to_zero);

Document encode_interspersed(const Activity& activity, const BinningModel& tau_model,
                             std::size_t gram, ClampPolicy policy = ClampPolicy::clamp_to_zero);

// Each window of `gram` consecutive events becomes one term: the window's
// kinds plus the quantized total time the window spans. The model must be
// fitted on pi-window durations for this gram size.
Document encode_cumulative(const Activity& activity, const BinningModel& pi_model, std::size_t gram);

// Union of the base encoding at every gram size l in [1, gram]; terms are
// prefixed "L<l>:" so equal strings from different levels stay distinct.
// models[l-1] is the BinningModel used at level l (for an interspersed
// base the same tau model is simply repeated per level).
Document encode_pyramid(const Activity& activity, std::span<const BinningModel> models,
                        std::size_t gram, Scheme base,
                        ClampPolicy policy = ClampPolicy::clamp_to_zero);

// Document JSONL: {"id": str, "scheme": str, "terms": {term: count}}
void write_documents(std::span<const Document> docs, std::ostream& out);
std::vector<Document> read_documents(std::istream& in);

}  // namespace abow
