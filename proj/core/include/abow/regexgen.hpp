#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "abow/encoding.hpp"

namespace abow {

enum class Quantifier { star, plus, opt };

char quantifier_char(Quantifier q);
Quantifier quantifier_from_char(char c);

// One sampled expression of the restricted template
//   ^ .* (alpha) (b1|..|br)<q> (gamma) .* $
// matched against whole symbol sequences, never characters.
struct RegexFeature {
    std::string alpha;
    std::vector<std::string> betas;  // sorted, distinct; alternation is order-insensitive
    Quantifier quantifier = Quantifier::star;
    std::string gamma;

    // Printed form with the top-level elements space-joined, e.g.
    //   ^ .* (start) (stop|turn)* (go) .* $
    // Unique per (alpha, betas-as-set, quantifier, gamma).
    std::string canonical_name() const;

    // True iff the sequence splits as P [alpha] M [gamma] S with every
    // symbol of M in betas and |M| constrained by the quantifier
    // (* any, + at least one, ? at most one). P and S are arbitrary.
    bool matches(const SymbolSequence& seq) const;
};

bool matches(const RegexFeature& feature, const SymbolSequence& seq);

// The augmented alphabet and the PPS size measure: symbol frequencies
// over the interspersed sequences of the training split.
struct VocabularyStats {
    std::vector<std::string> gamma_set;           // sorted, |Gamma| = |phi| + N
    std::map<std::string, std::size_t> weights;   // occurrence counts over the sequences

    // Throws input_error if a bin label collides with an observable kind.
    static VocabularyStats build(std::span<const SymbolSequence> seqs,
                                 std::span<const std::string> observable_vocab,
                                 std::span<const std::string> bin_labels);
};

// alpha and gamma by probability-proportional-to-size over the corpus
// frequencies; r uniform in [1, |Gamma|]; betas by simple random sampling
// without replacement; quantifier uniform over {*, +, ?}.
RegexFeature sample_regex(const VocabularyStats& stats, std::mt19937_64& rng);

struct GeneratedFeatures {
    std::vector<RegexFeature> features;
    std::size_t attempts = 0;  // candidates drawn, including rejected ones
};

// Rejection sampling: a candidate is kept iff it matches at least one
// sequence and its canonical name is new. Stops at max_attempts and
// returns a partial result rather than failing.
GeneratedFeatures generate_accepted(std::span<const SymbolSequence> seqs, std::size_t target_count,
                                    const VocabularyStats& stats, std::mt19937_64& rng,
                                    std::size_t max_attempts);

// Adds each matching feature to the aligned document as a binary term
// (the pattern is whole-sequence anchored, so a match is a property of
// the activity, not a countable sub-occurrence).
std::vector<Document> augment_documents(std::vector<Document> docs,
                                        std::span<const RegexFeature> features,
                                        std::span<const SymbolSequence> seqs);

// {"features": [{"alpha":.., "betas":[..], "quantifier":"*", "gamma":.., "name":..}, ...]}
void write_features(std::span<const RegexFeature> features, std::ostream& out);
std::vector<RegexFeature> read_features(std::istream& in);

}  // namespace abow
