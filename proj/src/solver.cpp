#include "tracegen/solver.hpp"

#include <cmath>
#include <string>

namespace tracegen {

namespace {

constexpr double kMoebiusTolerance = 1e-9;
constexpr double kRecurrenceTolerance = 1e-10;

void check_targets(const PathTargets& targets) {
    if (targets.t.empty())
        throw InputError("path targets must not be empty");
    for (std::size_t i = 0; i < targets.t.size(); ++i)
        if (!(targets.t[i] > 0.0))
            throw InputError("path target t_" + std::to_string(i) + " must be positive");
}

// mu_{0,i} with the index shift: mu[i + 1] = mu_{0,i}.
double mu_at(const std::vector<double>& mu, long i) {
    return mu[static_cast<std::size_t>(i + 1)];
}

// Verifies the closed-form distributions against the forward recurrence
// p_i(a_{i-1}) = t_{i-1} / p_{i-1}(a_{i-1}), p_i(a_i) = 1 - p_i(a_{i-1}).
void check_recurrence(const PathTargets& targets, const std::vector<LocalDistribution>& dists,
                      bool sub_kind) {
    const std::size_t n_alpha = dists.size();
    double prev_right = 0.0; // p_{i-1}(a_{i-1})
    for (std::size_t i = 1; i <= n_alpha; ++i) {
        const auto& w = dists[i - 1].weights();
        double left = w.front().second;
        double right = w.back().second;
        double expect_left = (i == 1) ? targets.t[0] : targets.t[i - 1] / prev_right;
        if (std::abs(left - expect_left) > kRecurrenceTolerance)
            throw InternalError("closed-form solution disagrees with the recurrence at line " +
                                std::to_string(i));
        bool last_sub_line = sub_kind && i == n_alpha;
        if (!last_sub_line && std::abs(left + right - 1.0) > kRecurrenceTolerance)
            throw InternalError("solved distribution line " + std::to_string(i) +
                                " does not sum to 1");
        prev_right = right;
    }
}

SolvedParams solve_path(const PathTargets& targets, bool sub_kind) {
    check_targets(targets);
    const std::size_t n_letters = targets.t.size();
    const long n = static_cast<long>(n_letters) - 1; // path model a_0..a_N

    std::vector<double> mu = prefix_moebius(targets);
    for (long i = -1; i < n; ++i)
        if (!(mu_at(mu, i) > 0.0))
            throw InputError("targets are not " + std::string(sub_kind ? "sub-Moebius" : "Moebius") +
                             " on the path model: mu_{0," + std::to_string(i) +
                             "} = " + std::to_string(mu_at(mu, i)) + " is not positive");
    double mu_full = mu_at(mu, n);
    if (sub_kind) {
        if (!(mu_full > 0.0))
            throw InputError("targets are not sub-Moebius on the path model: mu_M(t) = " +
                             std::to_string(mu_full) + " is not positive");
    } else {
        if (std::abs(mu_full) > kMoebiusTolerance)
            throw InputError("targets are not Moebius on the path model: mu_M(t) = " +
                             std::to_string(mu_full) + " is not 0");
    }

    SolvedParams out;
    out.prefix_mu = mu;
    if (n == 0) {
        // Single letter, single degenerate alphabet {a_0}.
        out.network = AlphabetNetwork::make({{"a0"}});
        out.dists.push_back(LocalDistribution::make({{0, sub_kind ? targets.t[0] : 1.0}}));
        return out;
    }
    out.network = AlphabetNetwork::path(n_letters);

    const auto& t = targets.t;
    for (long i = 1; i <= n; ++i) {
        double left, right; // weights of a_{i-1} and a_i on alphabet i
        if (sub_kind && i == n) {
            // Last line of the sub-Bernoulli solution; may sum below 1.
            if (n == 1) {
                left = t[0];
            } else {
                double prev_right = mu_at(mu, n - 2) / mu_at(mu, n - 3); // p_{N-1}(a_{N-1})
                left = t[static_cast<std::size_t>(n - 1)] / prev_right;
            }
            right = t[static_cast<std::size_t>(n)];
        } else if (i == 1) {
            left = t[0];
            right = 1.0 - t[0];
        } else if (i < n) {
            left = t[static_cast<std::size_t>(i - 1)] * mu_at(mu, i - 3) / mu_at(mu, i - 2);
            right = mu_at(mu, i - 1) / mu_at(mu, i - 2);
        } else {
            left = 1.0 - t[static_cast<std::size_t>(n)];
            right = t[static_cast<std::size_t>(n)];
        }
        if (!(left > 0.0) || !(right > 0.0) || left >= 1.0 || right >= 1.0)
            throw InputError("solved weight out of (0,1) on alphabet " + std::to_string(i));
        out.dists.push_back(LocalDistribution::make(
            {{static_cast<LetterId>(i - 1), left}, {static_cast<LetterId>(i), right}}));
    }
    check_recurrence(targets, out.dists, sub_kind);
    return out;
}

} // namespace

std::vector<double> prefix_moebius(const PathTargets& targets) {
    check_targets(targets);
    const std::size_t n_letters = targets.t.size();
    std::vector<double> mu;
    mu.reserve(n_letters + 1);
    mu.push_back(1.0);                 // mu_{0,-1}
    mu.push_back(1.0 - targets.t[0]);  // mu_{0,0}
    for (std::size_t i = 1; i < n_letters; ++i)
        mu.push_back(mu[i] - targets.t[i] * mu[i - 1]);
    return mu;
}

SolvedParams solve_path_bernoulli(const PathTargets& targets) {
    return solve_path(targets, false);
}

SolvedParams solve_path_sub_bernoulli(const PathTargets& targets) {
    return solve_path(targets, true);
}

std::pair<LetterId, SolvedParams> solve_ring(const std::vector<double>& targets, LetterId removed) {
    const std::size_t n = targets.size();
    if (n < 4)
        throw InputError("ring solving needs at least four generators");
    if (removed >= n)
        throw InputError("removed letter id out of range");
    for (double v : targets)
        if (!(v > 0.0))
            throw InputError("ring targets must be positive");

    TraceMonoid ring = TraceMonoid::ring(n);
    Valuation f = Valuation(ring, std::vector<double>(targets));
    Classification cls = classify_valuation(ring, f);
    if (cls.kind != ValuationClass::Moebius)
        throw InputError("ring targets must form a Moebius valuation (epsilon = " +
                         std::to_string(cls.epsilon) + ")");

    // Restriction to the path a_{removed+1}, ..., a_{removed+n-1} (mod n);
    // sub-Moebius by the restriction theorem, revalidated by the path solver.
    PathTargets path_targets;
    for (std::size_t k = 1; k < n; ++k)
        path_targets.t.push_back(targets[(removed + k) % n]);
    SolvedParams path = solve_path_sub_bernoulli(path_targets);

    // Rebuild the solution over the reduced ring network, whose letters keep
    // their ring names. Alphabets reduced to one letter always produce it.
    AlphabetNetwork ring_net = AlphabetNetwork::ring(n);
    AlphabetNetwork reduced = ring_net.reduce(ring_net.letter("a" + std::to_string(removed)));

    SolvedParams out;
    out.prefix_mu = path.prefix_mu;
    out.network = reduced;
    for (std::size_t i = 0; i < reduced.component_count(); ++i) {
        const auto& alphabet = reduced.alphabet(i);
        if (alphabet.size() == 1) {
            out.dists.push_back(LocalDistribution::make({{alphabet[0], 1.0}}));
            continue;
        }
        // Ring letter a_{removed+k} is path letter k-1; a two-letter reduced
        // alphabet has path coordinates {m, m+1} and belongs to the m-th
        // path distribution.
        std::vector<std::pair<LetterId, double>> weights;
        std::size_t m = n; // min path coordinate over the alphabet
        std::vector<std::pair<LetterId, std::size_t>> coords;
        for (LetterId a : alphabet) {
            std::size_t j = ring.letter(reduced.letter_name(a));
            std::size_t k = (j + n - removed) % n; // 1..n-1
            coords.emplace_back(a, k);
            m = std::min(m, k);
        }
        const LocalDistribution& solved = path.dists[m - 1];
        for (auto [a, k] : coords)
            weights.emplace_back(a, solved.weight(static_cast<LetterId>(k - 1)));
        out.dists.push_back(LocalDistribution::make(std::move(weights)));
    }
    return {removed, out};
}

SolvedParams scale_small_values(const AlphabetNetwork& net, const Valuation& t, double epsilon) {
    if (!(epsilon > 0.0))
        throw InputError("epsilon must be positive");
    if (t.domain() != net.build_monoid().universe())
        throw InputError("target valuation must cover every letter of the network");

    SolvedParams out;
    out.network = net;
    for (std::size_t i = 0; i < net.component_count(); ++i) {
        std::vector<std::pair<LetterId, double>> weights;
        double sum = 0.0;
        for (LetterId a : net.alphabet(i)) {
            int r = clique_size(net.resources(a));
            double w = std::pow(epsilon * t.weight(a), 1.0 / r);
            weights.emplace_back(a, w);
            sum += w;
        }
        if (sum >= 1.0)
            throw InputError("epsilon too large: alphabet " + std::to_string(i + 1) +
                             " gets weight sum " + std::to_string(sum));
        out.dists.push_back(LocalDistribution::make(std::move(weights)));
    }
    return out;
}

Valuation uniform_targets(const TraceMonoid& m) {
    return Valuation::uniform(m, smallest_root(m));
}

} // namespace tracegen
