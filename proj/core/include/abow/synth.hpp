#pragma once

#include <cstddef>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "abow/corpus.hpp"

namespace abow {

// Gap and duration sampler. Log-normal is the default shape (short gaps
// dominate real event streams); uniform supports tests that need disjoint
// supports. Samples are truncated at 0.
struct DistributionSpec {
    enum class Kind { uniform, log_normal };
    Kind kind = Kind::log_normal;
    double a = 0.0;  // uniform: low;  log_normal: log-space mu
    double b = 0.0;  // uniform: high; log_normal: log-space sigma

    double sample(std::mt19937_64& rng) const;
    void validate() const;

    static DistributionSpec uniform(double low, double high);
    static DistributionSpec log_normal(double mu, double sigma);
    // parameterized by the distribution mean: mu = ln(mean) - sigma^2/2
    static DistributionSpec log_normal_mean(double mean, double sigma);
};

using GrammarPosition = std::vector<std::string>;   // alternative kinds for one slot
using GrammarSequence = std::vector<GrammarPosition>;

struct ClassSpec {
    std::string name;
    std::vector<GrammarSequence> event_grammar;  // candidate sequences, chosen uniformly
    DistributionSpec gap_distribution;
    DistributionSpec duration_distribution;
    std::size_t count = 1;
    double noise = 0.0;  // per-position probability of substitution/insertion/deletion

    void validate() const;
};

// Emits count activities per spec, labeled with the class name, with
// strictly ordered timestamps laid out from the sampled durations and
// gaps. Deterministic under a fixed rng.
Corpus generate(std::span<const ClassSpec> specs, std::mt19937_64& rng);

// Two classes with identical event grammars over the vehicle vocabulary
// (start, stop, turn, u-turn) whose gap distributions differ by 10x in the
// mean: through-traffic vs parking. BoW cannot separate them, temporal
// encodings can.
std::vector<ClassSpec> parking_preset(std::size_t per_class = 100);

// A common class plus a rare one that imitates its event sequence with a
// shifted gap distribution.
std::vector<ClassSpec> anomaly_preset(std::size_t common = 95, std::size_t rare = 5);

std::vector<ClassSpec> preset_by_name(const std::string& name, std::size_t per_class = 0);

// {"classes": [{"name":.., "count":.., "noise":.., "grammar":[[[kind,..],..],..],
//               "gap":{"kind":"log_normal","mu":..,"sigma":..} | {"kind":"uniform","low":..,"high":..},
//               "duration":{..}}]}
std::vector<ClassSpec> load_class_specs(std::istream& in);

}  // namespace abow
