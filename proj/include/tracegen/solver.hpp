#ifndef TRACEGEN_SOLVER_HPP
#define TRACEGEN_SOLVER_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "tracegen/moebius.hpp"
#include "tracegen/network.hpp"
#include "tracegen/sampler.hpp"

namespace tracegen {

// Target cylinder probabilities t_i = P(up a_i) on the path model with
// N+1 generators a_0..a_N.
struct PathTargets {
    std::vector<double> t;

    std::size_t letter_count() const { return t.size(); }
};

// Local distributions realizing a target measure, together with the network
// they are meant for and the prefix Moebius values used by the solver.
struct SolvedParams {
    AlphabetNetwork network;
    std::vector<LocalDistribution> dists;
    std::vector<double> prefix_mu; // mu_{0,-1}..mu_{0,N}, index shifted by one
};

// Prefix multivariate Moebius values of the path model:
// mu_{0,-1} = 1, mu_{0,0} = 1 - t_0, mu_{0,i+1} = mu_{0,i} - t_{i+1} mu_{0,i-1}.
std::vector<double> prefix_moebius(const PathTargets& targets);

// Probability distributions whose PSA realizes the Bernoulli measure with
// cylinder values `targets` on the path model. Requires a Moebius target
// vector: mu_{0,N} = 0 within 1e-9 and positive prefix values.
SolvedParams solve_path_bernoulli(const PathTargets& targets);

// Sub-Bernoulli variant: the last distribution may be sub-probability-kind;
// the PSA with these parameters outputs finite traces with probability 1.
SolvedParams solve_path_sub_bernoulli(const PathTargets& targets);

// Bernoulli measures on the ring model with n >= 4 generators, realized by
// the PFSA: removes one letter (a_0 unless overridden), restricts the
// targets to the induced path, and solves the sub-Bernoulli path problem.
// The returned network is the reduced ring network; alphabets reduced to a
// single letter carry the weight-1 probability distribution.
std::pair<LetterId, SolvedParams> solve_ring(const std::vector<double>& targets,
                                             LetterId removed = 0);

// Sub-probability distributions whose PSA valuation equals epsilon * t
// exactly: p_i(a) = (epsilon t(a))^(1/|R(a)|).
SolvedParams scale_small_values(const AlphabetNetwork& net, const Valuation& t, double epsilon);

// The uniform Moebius valuation f = p0 = smallest_root(m).
Valuation uniform_targets(const TraceMonoid& m);

} // namespace tracegen

#endif
