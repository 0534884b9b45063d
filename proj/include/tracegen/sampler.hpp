#ifndef TRACEGEN_SAMPLER_HPP
#define TRACEGEN_SAMPLER_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tracegen/moebius.hpp"
#include "tracegen/network.hpp"
#include "tracegen/random.hpp"
#include "tracegen/sync.hpp"

namespace tracegen {

enum class DistKind { Probability, SubProbability };

// A positive probability or sub-probability vector over one alphabet.
class LocalDistribution {
public:
    // Kind inferred from the weight sum: Probability within 1e-12 of 1,
    // SubProbability below; sums above 1 + 1e-12 are rejected.
    static LocalDistribution make(std::vector<std::pair<LetterId, double>> weights);
    static LocalDistribution from_names(const AlphabetNetwork& net,
                                        const std::map<std::string, double>& weights);

    DistKind kind() const { return kind_; }
    double weight_sum() const { return sum_; }
    // 1 - sum of weights; the chance of the stopping symbol per draw.
    double stop_weight() const { return kind_ == DistKind::Probability ? 0.0 : 1.0 - sum_; }

    const std::vector<std::pair<LetterId, double>>& weights() const { return weights_; }
    double weight(LetterId a) const;
    bool supports(LetterId a) const;
    CliqueMask support_mask() const { return support_; }

    // One draw; nullopt is the stopping symbol (sub-probability kind only).
    std::optional<LetterId> sample(RandomStream& rng) const;

private:
    std::vector<std::pair<LetterId, double>> weights_; // ascending letter id
    CliqueMask support_ = 0;
    double sum_ = 0.0;
    DistKind kind_ = DistKind::Probability;
};

// Finite Bernoulli word: i.i.d. letters until the stopping symbol, whose
// weight is 1 - sum. Requires a sub-probability distribution.
std::vector<LetterId> finite_bernoulli_word(const LocalDistribution& dist, RandomStream& rng,
                                            std::size_t max_length = 1'000'000);

struct PsaOutcome {
    enum class Status { Terminated, BudgetExhausted };

    Trace trace;
    Status status = Status::Terminated;
    SyncTag tag = SyncTag::Waiting; // Deadlock or EndOfInput when Terminated

    bool terminated() const { return status == Status::Terminated; }
};

// Probabilistic Synchronization Algorithm: synchronizes independently drawn
// local Bernoulli sequences (one stream per alphabet, derived from the
// master seed) into one random trace. Probability-kind components supply
// unbounded streams; sub-probability components stop at their stopping
// symbol. When the synchronization trace is infinite the run stops once
// `budget` pieces have accumulated and reports the length-budget prefix.
// The outcome depends only on rng.seed() and the configuration, not on
// `chunk_size`.
PsaOutcome psa_run(const AlphabetNetwork& net, const std::vector<LocalDistribution>& dists,
                   const RandomStream& rng, std::size_t budget = 1'000'000,
                   std::size_t chunk_size = 64);

// Valuation of the PSA's multiplicative output measure:
// f(a) = product over i in R(a) of p_i(a).
Valuation psa_valuation(const AlphabetNetwork& net, const std::vector<LocalDistribution>& dists);

enum class PsaClass { Finite, Infinite };

// Infinite iff the PSA valuation is Moebius, finite iff sub-Moebius. When
// every distribution is probability-kind, the monoid is irreducible and all
// alphabets are pairs, the result is cross-checked against the structural
// criterion.
PsaClass classify_psa(const AlphabetNetwork& net, const std::vector<LocalDistribution>& dists);

// Mean output length -p mu'(p) / mu(p) of the uniform sub-Bernoulli measure
// with parameter p < p0.
double expected_length_uniform(const TraceMonoid& m, double p);

} // namespace tracegen

#endif
