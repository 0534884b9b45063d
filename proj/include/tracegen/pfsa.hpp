#ifndef TRACEGEN_PFSA_HPP
#define TRACEGEN_PFSA_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "tracegen/sampler.hpp"

namespace tracegen {

// Configuration of the full synchronization sampler: a distinguished letter
// of an irreducible synchronization monoid plus local parameters for the
// network with that letter removed, under which the reduced sampler
// terminates almost surely.
class PfsaConfig {
public:
    PfsaConfig(AlphabetNetwork network, LetterId letter,
               std::vector<LocalDistribution> reduced_dists,
               std::size_t rejection_budget = 1'000'000, std::size_t psa_budget = 1'000'000);

    const AlphabetNetwork& network() const { return network_; }
    const TraceMonoid& monoid() const { return monoid_; }
    LetterId letter() const { return letter_; }
    const AlphabetNetwork& reduced_network() const { return reduced_; }
    const std::vector<LocalDistribution>& reduced_dists() const { return dists_; }
    std::size_t rejection_budget() const { return rejection_budget_; }
    std::size_t psa_budget() const { return psa_budget_; }

    // Full-monoid letter ids of the reduced network's letters.
    const std::vector<LetterId>& reduced_to_full() const { return reduced_to_full_; }

private:
    AlphabetNetwork network_;
    TraceMonoid monoid_;
    LetterId letter_;
    AlphabetNetwork reduced_;
    std::vector<LocalDistribution> dists_;
    std::vector<LetterId> reduced_to_full_;
    std::size_t rejection_budget_;
    std::size_t psa_budget_;
};

struct PyramidSample {
    Trace trace; // in the full monoid, member of the hitting set of the letter
    std::size_t rejections = 0;
};

// Trial-and-reject sampling of a pyramidal trace: run the reduced sampler,
// stack the distinguished letter on top, accept when the heap is pyramidal.
// The accepted trace is distributed like the first hitting time of the
// letter under the Moebius extension of the reduced valuation.
PyramidSample sample_pyramidal(const PfsaConfig& config, RandomStream& rng);

struct WalkState {
    Trace x;
    std::size_t increments = 0;
    std::size_t rejections = 0;
};

// Probabilistic Full Synchronization Algorithm: concatenates pyramidal
// increments until the accumulated trace reaches `target_length` pieces.
// The prefix distribution converges to the Bernoulli measure of the
// extended valuation.
WalkState pfsa_generate(const PfsaConfig& config, RandomStream rng, std::size_t target_length);

// First hitting time of `a` within a prefix: the downward closure of the
// lowest occurrence of `a`, absent when the prefix has no occurrence.
std::optional<Trace> first_hitting(const TraceMonoid& m, const Trace& prefix, LetterId a);

// Concatenation of raw terminated sampler outputs with no rejection step;
// its limit distribution is not Bernoulli. Requires a Finite configuration.
Trace naive_walk(const AlphabetNetwork& net, const std::vector<LocalDistribution>& dists,
                 RandomStream rng, std::size_t target_length);

} // namespace tracegen

#endif
