#include "tracegen/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "tracegen/pfsa.hpp"
#include "tracegen/scenarios.hpp"
#include "tracegen/solver.hpp"
#include "tracegen/stats.hpp"

namespace tracegen {

namespace {

TraceMonoid config_monoid(const RunConfig& config) {
    if (config.network)
        return config.network->build_monoid();
    if (config.monoid)
        return *config.monoid;
    throw InputError("config needs a [network] or [monoid] section");
}

std::uint64_t run_u64(const RunConfig& config, const std::string& key, std::uint64_t fallback) {
    auto it = config.run.find(key);
    if (it == config.run.end())
        return fallback;
    try {
        return std::stoull(it->second);
    } catch (const std::logic_error&) {
        throw InputError("run key '" + key + "' is not a number: " + it->second);
    }
}

// Chain coordinates of a monoid whose dependence graph is a simple path or
// cycle; empty result when it is neither.
struct ChainShape {
    enum class Kind { Path, Cycle, Other } kind = Kind::Other;
    std::vector<LetterId> order; // letters along the chain
};

ChainShape chain_shape(const TraceMonoid& m) {
    ChainShape shape;
    const std::size_t n = m.letter_count();
    if (!is_irreducible(m))
        return shape;
    std::vector<std::vector<LetterId>> adj(n);
    for (LetterId a = 0; a < n; ++a)
        for (LetterId b : clique_letters(m.dep_mask(a) & ~letter_bit(a)))
            adj[a].push_back(b);
    std::size_t deg1 = 0, deg2 = 0;
    for (LetterId a = 0; a < n; ++a) {
        if (adj[a].size() == 1)
            ++deg1;
        else if (adj[a].size() == 2)
            ++deg2;
        else if (adj[a].size() != 0)
            return shape;
    }
    auto walk = [&](LetterId start) {
        std::vector<LetterId> order{start};
        CliqueMask seen = letter_bit(start);
        LetterId cur = start;
        for (;;) {
            LetterId next = n; // sentinel
            for (LetterId b : adj[cur])
                if (!(seen & letter_bit(b)) && b < next)
                    next = b;
            if (next == n)
                break;
            seen |= letter_bit(next);
            order.push_back(next);
            cur = next;
        }
        return order;
    };
    if (n == 1) {
        shape.kind = ChainShape::Kind::Path;
        shape.order = {0};
    } else if (deg1 == 2 && deg1 + deg2 == n) {
        LetterId start = 0;
        while (adj[start].size() != 1)
            ++start;
        shape.order = walk(start);
        if (shape.order.size() == n)
            shape.kind = ChainShape::Kind::Path;
    } else if (deg2 == n && n >= 3) {
        shape.order = walk(0);
        if (shape.order.size() == n)
            shape.kind = ChainShape::Kind::Cycle;
    }
    return shape;
}

// Checks that the network's alphabets are exactly the adjacent pairs of the
// chain; returns for each chain edge k (letters order[k], order[k+1], wrap
// for cycles) the 1-based alphabet index carrying it.
std::vector<std::size_t> match_chain_network(const AlphabetNetwork& net,
                                             const std::vector<LetterId>& order, bool cycle) {
    std::size_t edges = cycle ? order.size() : order.size() - 1;
    if (net.component_count() != edges)
        throw InputError("the network is not the canonical one for its topology: expected " +
                         std::to_string(edges) + " alphabets");
    std::vector<std::size_t> alphabet_of_edge(edges, 0);
    for (std::size_t k = 0; k < edges; ++k) {
        CliqueMask want = letter_bit(order[k]) | letter_bit(order[(k + 1) % order.size()]);
        bool found = false;
        for (std::size_t i = 0; i < net.component_count(); ++i)
            if (net.alphabet_mask(i) == want) {
                alphabet_of_edge[k] = i + 1;
                found = true;
                break;
            }
        if (!found)
            throw InputError("the network is not the canonical one for its topology: no alphabet {" +
                             net.letter_name(order[k]) + ", " +
                             net.letter_name(order[(k + 1) % order.size()]) + "}");
    }
    return alphabet_of_edge;
}

std::vector<double> targets_for(const RunConfig& config, const TraceMonoid& m,
                                const std::vector<LetterId>& order) {
    std::vector<double> t;
    if (config.targets_uniform) {
        double p0 = smallest_root(m);
        t.assign(order.size(), p0);
        return t;
    }
    for (LetterId a : order) {
        auto it = config.targets.find(m.name(a));
        if (it == config.targets.end())
            throw InputError("missing target for letter " + m.name(a));
        t.push_back(it->second);
    }
    return t;
}

} // namespace

int cmd_analyze(const RunConfig& config, std::ostream& os) {
    TraceMonoid m = config_monoid(config);
    if (config.network) {
        os << "network:\n";
        std::ostringstream tmp;
        print_network(tmp, *config.network);
        std::istringstream lines(tmp.str());
        std::string line;
        while (std::getline(lines, line))
            os << "  " << line << "\n";
    }
    os << "letters: " << m.letter_count() << "\n";
    os << "independence pairs:";
    bool any = false;
    for (LetterId a = 0; a < m.letter_count(); ++a)
        for (LetterId b = a + 1; b < m.letter_count(); ++b)
            if (m.independent(a, b)) {
                os << " (" << m.name(a) << "," << m.name(b) << ")";
                any = true;
            }
    if (!any)
        os << " none (traces are plain words)";
    os << "\n";
    os << "cliques: " << enumerate_cliques(m).size() << "\n";
    Polynomial mu = moebius_polynomial(m);
    os << "moebius polynomial: " << mu.to_string() << "\n";
    os << "smallest root p0: " << smallest_root(mu) << "\n";
    os << "irreducible: " << (is_irreducible(m) ? "yes" : "no") << "\n";
    if (config.network)
        os << "structural criterion (probability-kind locals): "
           << (structurally_infinite(*config.network) ? "Infinite" : "Finite") << "\n";
    return kExitPass;
}

int cmd_solve(const RunConfig& config, const CommonOptions& opts,
              const std::optional<std::string>& remove_letter, std::ostream& os) {
    if (!config.network)
        throw InputError("solve needs a [network] section");
    if (!config.has_targets)
        throw InputError("solve needs a [targets] section (explicit letters or 'uniform')");
    const AlphabetNetwork& net = *config.network;
    TraceMonoid m = net.build_monoid();
    ChainShape shape = chain_shape(m);
    if (shape.kind == ChainShape::Kind::Other)
        throw InputError("general topology unsolved: only path and ring networks have solvers");

    std::vector<double> targets = targets_for(config, m, shape.order);

    std::ostringstream body;
    body.precision(17);
    const double check_tol = 1e-10;
    double worst = 0.0;
    if (shape.kind == ChainShape::Kind::Path) {
        std::vector<std::size_t> edge_alphabet =
            match_chain_network(net, shape.order, /*cycle=*/false);
        Valuation target_val(m, [&] {
            std::vector<double> w(m.letter_count(), 0.0);
            for (std::size_t k = 0; k < shape.order.size(); ++k)
                w[shape.order[k]] = targets[k];
            return w;
        }());
        double mu_value = multivariate_eval(m, target_val);
        bool bernoulli = std::abs(mu_value) <= 1e-9;
        SolvedParams solved = bernoulli ? solve_path_bernoulli(PathTargets{targets})
                                        : solve_path_sub_bernoulli(PathTargets{targets});
        os << "topology: path, " << (bernoulli ? "Bernoulli" : "sub-Bernoulli")
           << " targets (mu = " << mu_value << ")\n";
        // Re-emit per the user's alphabet numbering.
        std::vector<std::string> lines(net.component_count());
        for (std::size_t k = 0; k + 1 < shape.order.size(); ++k) {
            const auto& w = solved.dists[k].weights();
            std::ostringstream line;
            line.precision(17);
            line << edge_alphabet[k] << ": " << m.name(shape.order[k]) << "=" << w[0].second << " "
                 << m.name(shape.order[k + 1]) << "=" << w[1].second << " "
                 << (solved.dists[k].kind() == DistKind::Probability ? "(prob)" : "(sub)");
            lines[edge_alphabet[k] - 1] = line.str();
        }
        if (shape.order.size() == 1) {
            const auto& w = solved.dists[0].weights();
            lines[0] = "1: " + m.name(shape.order[0]) + "=" + std::to_string(w[0].second) +
                       (solved.dists[0].kind() == DistKind::Probability ? " (prob)" : " (sub)");
        }
        body << "[dists]\n";
        for (const auto& line : lines)
            body << line << "\n";
        // Verification: realized valuation against the targets.
        Valuation realized = psa_valuation(solved.network, solved.dists);
        for (std::size_t k = 0; k < shape.order.size(); ++k)
            worst = std::max(worst,
                             std::abs(realized.weight(static_cast<LetterId>(k)) - targets[k]));
    } else {
        if (shape.order.size() < 4)
            throw InputError("ring solving needs at least four generators");
        match_chain_network(net, shape.order, /*cycle=*/true);
        // Rotate the cycle so the removed letter sits at position 0.
        LetterId removed_letter = remove_letter ? m.letter(*remove_letter) : shape.order.front();
        std::size_t pivot = 0;
        while (shape.order[pivot] != removed_letter)
            ++pivot;
        std::rotate(shape.order.begin(), shape.order.begin() + pivot, shape.order.end());
        std::vector<double> rotated = targets_for(config, m, shape.order);

        auto solved = solve_ring(rotated, 0).second;
        os << "topology: ring, removed letter " << m.name(removed_letter) << "\n";

        // Cycle coordinate of a user letter name: a_k in solver terms.
        auto cycle_index = [&](const std::string& name) {
            std::size_t k = 0;
            while (m.name(shape.order[k]) != name)
                ++k;
            return k;
        };
        // The solver's reduced network uses canonical names a0..aN-1 along
        // the rotated cycle; translate back to the user's letters, indexing
        // over the user's reduced network.
        AlphabetNetwork user_reduced = net.reduce(net.letter(m.name(removed_letter)));
        body << "[dists]\n";
        for (std::size_t i = 0; i < user_reduced.component_count(); ++i) {
            CliqueMask mask = user_reduced.alphabet_mask(i);
            CliqueMask translated = 0;
            for (LetterId a : clique_letters(mask))
                translated |= letter_bit(solved.network.letter(
                    "a" + std::to_string(cycle_index(user_reduced.letter_name(a)))));
            std::size_t j = 0;
            while (j < solved.network.component_count() &&
                   solved.network.alphabet_mask(j) != translated)
                ++j;
            if (j == solved.network.component_count())
                throw InternalError("reduced alphabets of the user and solver networks disagree");
            body << (i + 1) << ":";
            for (LetterId a : clique_letters(mask)) {
                const std::string& name = user_reduced.letter_name(a);
                LetterId solver_letter =
                    solved.network.letter("a" + std::to_string(cycle_index(name)));
                body << " " << name << "=" << solved.dists[j].weight(solver_letter);
            }
            body << (solved.dists[j].kind() == DistKind::Probability ? " (prob)" : " (sub)") << "\n";
        }

        // Verification: the reduced sampler realizes the restricted targets,
        // and the Moebius extension recovers the removed weight.
        Valuation realized = psa_valuation(solved.network, solved.dists);
        TraceMonoid canonical_ring = TraceMonoid::ring(shape.order.size());
        std::vector<double> restricted(canonical_ring.letter_count(), 0.0);
        for (std::size_t k = 1; k < shape.order.size(); ++k) {
            double got = realized.weight(solved.network.letter("a" + std::to_string(k)));
            worst = std::max(worst, std::abs(got - rotated[k]));
            restricted[k] = got;
        }
        Valuation extended =
            extend_valuation(canonical_ring, 0, Valuation(canonical_ring, restricted));
        worst = std::max(worst, std::abs(extended.weight(0) - rotated[0]));
    }
    os << body.str();
    os << "verification: max |psa_valuation - target| = " << worst << "\n";
    if (worst > check_tol) {
        os << "FAIL: realized valuation is off target\n";
        return kExitFail;
    }
    if (opts.out_path) {
        std::ofstream out(*opts.out_path);
        if (!out)
            throw InputError("cannot write " + *opts.out_path);
        out << body.str();
    }
    return kExitPass;
}

int cmd_generate(const RunConfig& config, const CommonOptions& opts,
                 const std::optional<std::string>& increments_path, std::ostream& os) {
    if (!config.network)
        throw InputError("generate needs a [network] section");
    const AlphabetNetwork& net = *config.network;
    auto algo_it = config.run.find("algorithm");
    std::string algorithm = algo_it != config.run.end() ? algo_it->second : "psa";
    std::uint64_t seed = opts.seed.value_or(run_u64(config, "seed", 0));
    std::size_t budget = opts.budget.value_or(run_u64(config, "budget", 1'000'000));
    std::size_t target = static_cast<std::size_t>(run_u64(config, "target-length", 100));

    auto t0 = std::chrono::steady_clock::now();
    auto elapsed_ms = [&t0] {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - t0)
            .count();
    };

    if (algorithm == "psa") {
        TraceMonoid m = net.build_monoid();
        std::vector<LocalDistribution> dists = bind_dists(net, config.dists);
        PsaOutcome out = psa_run(net, dists, RandomStream(seed), budget,
                                 static_cast<std::size_t>(run_u64(config, "chunk", 64)));
        print_trace(os, m, out.trace);
        os << "# algorithm=psa seed=" << seed << "\n";
        os << "# length=" << out.trace.length() << "\n";
        os << "# status=" << (out.terminated() ? "Terminated(" + to_string(out.tag) + ")"
                                               : "BudgetExhausted")
           << "\n";
        os << "# wall_ms=" << elapsed_ms() << "\n";
        return kExitPass;
    }
    if (algorithm == "pfsa") {
        auto letter_it = config.run.find("letter");
        std::string letter_name = letter_it != config.run.end() ? letter_it->second
                                                                : net.letter_name(0);
        LetterId letter = net.letter(letter_name);
        AlphabetNetwork reduced = net.reduce(letter);
        std::vector<LocalDistribution> dists = bind_dists(reduced, config.dists);
        PfsaConfig pfsa(net, letter, std::move(dists));

        std::ofstream log;
        if (increments_path) {
            log.open(*increments_path);
            if (!log)
                throw InputError("cannot write " + *increments_path);
        }
        RandomStream rng(seed);
        WalkState walk;
        std::size_t len = 0;
        while (len < target) {
            PyramidSample inc = sample_pyramidal(pfsa, rng);
            if (log.is_open()) {
                log << "# rejected: " << inc.rejections << "\n";
                print_trace(log, pfsa.monoid(), inc.trace);
            }
            len += inc.trace.length();
            concat_into(pfsa.monoid(), walk.x, inc.trace);
            walk.increments += 1;
            walk.rejections += inc.rejections;
        }
        print_trace(os, pfsa.monoid(), walk.x);
        os << "# algorithm=pfsa seed=" << seed << " letter=" << letter_name << "\n";
        os << "# length=" << len << "\n";
        os << "# increments=" << walk.increments << " rejections=" << walk.rejections << "\n";
        os << "# wall_ms=" << elapsed_ms() << "\n";
        return kExitPass;
    }
    if (algorithm == "naive") {
        TraceMonoid m = net.build_monoid();
        std::vector<LocalDistribution> dists = bind_dists(net, config.dists);
        Trace x = naive_walk(net, dists, RandomStream(seed), target);
        print_trace(os, m, x);
        os << "# algorithm=naive seed=" << seed << "\n";
        os << "# length=" << x.length() << "\n";
        os << "# wall_ms=" << elapsed_ms() << "\n";
        return kExitPass;
    }
    throw InputError("unknown algorithm '" + algorithm + "' (expected psa, pfsa or naive)");
}

int cmd_verify(const std::optional<std::string>& scenario, const CommonOptions& opts,
               std::ostream& os) {
    bool all_pass = true;
    auto run_one = [&](const std::string& name) {
        ScenarioResult r = run_scenario(name, opts.seed);
        os << (r.pass ? "PASS " : "FAIL ") << r.name << "\n" << r.detail;
        all_pass = all_pass && r.pass;
    };
    if (scenario) {
        run_one(*scenario);
    } else {
        for (const ScenarioInfo& info : scenario_list())
            if (info.acceptance)
                run_one(info.name);
    }
    os << (all_pass ? "all checks passed\n" : "some checks FAILED\n");
    return all_pass ? kExitPass : kExitFail;
}

int cmd_oracle(const RunConfig& config, const CommonOptions& opts, std::size_t depth,
               std::ostream& os) {
    TraceMonoid m = config_monoid(config);
    bool ok = true;

    std::vector<std::size_t> counts = trace_counts(m, depth);
    std::vector<long long> growth = growth_coefficients(m, depth);
    os << "length:      ";
    for (std::size_t k = 0; k <= depth; ++k)
        os << k << " ";
    os << "\nenumerated:  ";
    for (std::size_t k = 0; k <= depth; ++k)
        os << counts[k] << " ";
    os << "\ngrowth:      ";
    for (std::size_t k = 0; k <= depth; ++k)
        os << growth[k] << " ";
    bool counts_ok = true;
    for (std::size_t k = 0; k <= depth; ++k)
        counts_ok = counts_ok && static_cast<long long>(counts[k]) == growth[k];
    os << "\ncounts " << (counts_ok ? "agree" : "DISAGREE") << "\n";
    ok = ok && counts_ok;

    // Both Moebius transform routes on random positive valuations.
    std::size_t rounds = opts.samples.value_or(20);
    RandomStream rng(opts.seed.value_or(12345));
    double worst = 0.0;
    for (std::size_t r = 0; r < rounds; ++r) {
        std::vector<double> w(m.letter_count());
        for (auto& x : w)
            x = 0.05 + 0.9 * rng.next_unit();
        Valuation f(m, std::move(w));
        MoebiusTransform h = moebius_transform(m, f);
        for (const auto& [c, direct] : h.values) {
            double factored = f.of_clique(c) * multivariate_eval(m, f, c);
            worst = std::max(worst, std::abs(direct - factored));
        }
    }
    os << "moebius transform routes: max deviation " << worst << " over " << rounds
       << " random valuations " << (worst <= 1e-10 ? "(agree)" : "(DISAGREE)") << "\n";
    ok = ok && worst <= 1e-10;

    // Closed-form solver vs forward recurrence on a path chain.
    ChainShape shape = chain_shape(m);
    if (shape.kind == ChainShape::Kind::Path && m.letter_count() >= 2) {
        double p0 = smallest_root(m);
        // Reorder uniform targets along the chain (uniform, so trivial) and
        // compare the closed forms against the forward recurrence.
        SolvedParams solved = solve_path_bernoulli(PathTargets{std::vector<double>(
            m.letter_count(), p0)});
        double dev = 0.0;
        double prev_left = 0.0;
        for (std::size_t i = 0; i < solved.dists.size(); ++i) {
            const auto& w = solved.dists[i].weights();
            double expect = i == 0 ? p0 : p0 / (1.0 - prev_left);
            dev = std::max(dev, std::abs(w[0].second - expect));
            prev_left = w[0].second;
        }
        os << "path solver closed form vs recurrence: max deviation " << dev << " "
           << (dev <= 1e-10 ? "(agree)" : "(DISAGREE)") << "\n";
        ok = ok && dev <= 1e-10;
    } else {
        os << "path solver cross-check: n/a for this monoid\n";
    }
    return ok ? kExitPass : kExitFail;
}

} // namespace tracegen
