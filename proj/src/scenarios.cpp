#include "tracegen/scenarios.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>

#include "tracegen/parallel.hpp"
#include "tracegen/pfsa.hpp"
#include "tracegen/solver.hpp"
#include "tracegen/stats.hpp"

namespace tracegen {

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// Collects sub-check results into a pass/fail line list.
class Checks {
public:
    void expect(bool cond, const std::string& what) {
        pass_ = pass_ && cond;
        detail_ += std::string(cond ? "    ok   " : "    FAIL ") + what + "\n";
    }

    void expect_near(double actual, double want, double tol, const std::string& what) {
        expect(std::abs(actual - want) <= tol,
               what + ": " + num(actual) + " vs " + num(want) + " (tol " + num(tol) + ")");
    }

    ScenarioResult result(const std::string& name) const { return {name, pass_, detail_}; }

private:
    bool pass_ = true;
    std::string detail_;
};

std::vector<LocalDistribution> uniform_pair_dists(const AlphabetNetwork& net) {
    std::vector<LocalDistribution> dists;
    for (std::size_t i = 0; i < net.component_count(); ++i) {
        std::vector<std::pair<LetterId, double>> w;
        for (LetterId a : net.alphabet(i))
            w.emplace_back(a, 1.0 / static_cast<double>(net.alphabet(i).size()));
        dists.push_back(LocalDistribution::make(std::move(w)));
    }
    return dists;
}

// Fig. "congruent words" monoid <a,b,c,d | ac=ca, ad=da, bd=db>.
TraceMonoid diamond_monoid() {
    return TraceMonoid::make({"a", "b", "c", "d"}, {{0, 2}, {0, 3}, {1, 3}});
}

PfsaConfig ring_pfsa_config(std::size_t n) {
    AlphabetNetwork net = AlphabetNetwork::ring(n);
    TraceMonoid m = net.build_monoid();
    Valuation targets = uniform_targets(m);
    std::vector<double> t;
    for (LetterId a = 0; a < m.letter_count(); ++a)
        t.push_back(targets.weight(a));
    auto [removed, solved] = solve_ring(t);
    return PfsaConfig(net, removed, solved.dists);
}

// ---------------------------------------------------------------------------
// 1. Exact combinatorics
// ---------------------------------------------------------------------------

ScenarioResult scenario_polynomials(std::uint64_t) {
    Checks ck;
    auto expect_poly = [&](const TraceMonoid& m, const std::vector<double>& coeffs,
                           const std::string& what) {
        Polynomial mu = moebius_polynomial(m);
        bool same = mu.coefficients() == coeffs;
        ck.expect(same, what + " Moebius polynomial is " + mu.to_string());
    };
    expect_poly(TraceMonoid::path(5), {1, -5, 6, -1}, "path-5");
    expect_poly(TraceMonoid::ring(4), {1, -4, 2}, "ring-4");
    expect_poly(TraceMonoid::ring(5), {1, -5, 5}, "ring-5");

    ck.expect_near(smallest_root(TraceMonoid::ring(4)), 1.0 - std::sqrt(2.0) / 2.0, 1e-9,
                   "ring-4 smallest root");
    ck.expect_near(smallest_root(TraceMonoid::ring(5)), 0.5 - std::sqrt(5.0) / 10.0, 1e-9,
                   "ring-5 smallest root");
    ck.expect_near(smallest_root(TraceMonoid::path(5)), 0.308, 5e-4, "path-5 smallest root");
    return ck.result("polynomials");
}

// ---------------------------------------------------------------------------
// 2. Oracle equivalence: enumeration vs growth series
// ---------------------------------------------------------------------------

ScenarioResult scenario_oracle_counts(std::uint64_t) {
    Checks ck;
    auto check = [&](const TraceMonoid& m, const std::string& what) {
        const std::size_t n = 8;
        std::vector<std::size_t> counts = trace_counts(m, n);
        std::vector<long long> growth = growth_coefficients(m, n);
        bool same = true;
        for (std::size_t k = 0; k <= n; ++k)
            same = same && static_cast<long long>(counts[k]) == growth[k];
        std::string tail = what + " counts";
        for (std::size_t k = 0; k <= n; ++k)
            tail += " " + std::to_string(counts[k]);
        ck.expect(same, tail);
    };
    check(TraceMonoid::path(5), "path-5");
    check(TraceMonoid::ring(4), "ring-4");
    check(TraceMonoid::ring(5), "ring-5");
    check(diamond_monoid(), "diamond");
    return ck.result("oracle-counts");
}

// ---------------------------------------------------------------------------
// 3. Solver tables
// ---------------------------------------------------------------------------

ScenarioResult scenario_solver_tables(std::uint64_t) {
    Checks ck;

    // Path model with five generators at the uniform root.
    double q0 = smallest_root(TraceMonoid::path(5));
    SolvedParams path = solve_path_bernoulli(PathTargets{std::vector<double>(5, q0)});
    const double printed[4][2] = {{0.308, 0.692}, {0.445, 0.555}, {0.555, 0.445}, {0.692, 0.308}};
    for (std::size_t i = 0; i < 4; ++i) {
        const auto& w = path.dists[i].weights();
        ck.expect_near(w[0].second, printed[i][0], 1e-3, "path-5 line " + std::to_string(i + 1) + " left");
        ck.expect_near(w[1].second, printed[i][1], 1e-3, "path-5 line " + std::to_string(i + 1) + " right");
        ck.expect(std::abs(w[0].second + w[1].second - 1.0) <= 1e-10,
                  "path-5 line " + std::to_string(i + 1) + " sums to 1");
    }
    Valuation realized = psa_valuation(path.network, path.dists);
    for (LetterId a = 0; a < 5; ++a)
        ck.expect(std::abs(realized.weight(a) - q0) <= 1e-10,
                  "path-5 diagonal product for a" + std::to_string(a) + " equals q0");

    // Ring with four generators: (sqrt2 - 1, 1 - sqrt2/2, sqrt2/2) exactly.
    {
        auto [removed, solved] = solve_ring(std::vector<double>(4, smallest_root(TraceMonoid::ring(4))));
        ck.expect(removed == 0, "ring-4 removes a0");
        const AlphabetNetwork& net = solved.network;
        std::map<std::string, double> by_name;
        for (std::size_t i = 0; i < solved.dists.size(); ++i)
            if (net.alphabet(i).size() == 2)
                for (auto [a, w] : solved.dists[i].weights())
                    by_name[std::to_string(i) + ":" + net.letter_name(a)] = w;
        double q1 = 1.0 - std::sqrt(2.0) / 2.0;
        ck.expect_near(by_name["1:a1"], q1, 1e-9, "ring-4 p'1(a1)");
        ck.expect_near(by_name["1:a2"], std::sqrt(2.0) / 2.0, 1e-9, "ring-4 p'1(a2)");
        ck.expect_near(by_name["2:a2"], std::sqrt(2.0) - 1.0, 1e-9, "ring-4 p'2(a2)");
        ck.expect_near(by_name["2:a3"], q1, 1e-9, "ring-4 p'2(a3)");
    }

    // Ring with five generators: the printed 0.276/0.724/0.382/0.618/0.447 table.
    {
        auto [removed, solved] = solve_ring(std::vector<double>(5, smallest_root(TraceMonoid::ring(5))));
        (void)removed;
        const AlphabetNetwork& net = solved.network;
        std::map<std::string, double> by_name;
        for (std::size_t i = 0; i < solved.dists.size(); ++i)
            if (net.alphabet(i).size() == 2)
                for (auto [a, w] : solved.dists[i].weights())
                    by_name[net.letter_name(a) + "@" + std::to_string(i)] = w;
        ck.expect_near(by_name["a1@1"], 0.276, 1e-3, "ring-5 p2(a1)");
        ck.expect_near(by_name["a2@1"], 0.724, 1e-3, "ring-5 p2(a2)");
        ck.expect_near(by_name["a2@2"], 0.382, 1e-3, "ring-5 p3(a2)");
        ck.expect_near(by_name["a3@2"], 0.618, 1e-3, "ring-5 p3(a3)");
        ck.expect_near(by_name["a3@3"], 0.447, 1e-3, "ring-5 p4(a3)");
        ck.expect_near(by_name["a4@3"], 0.276, 1e-3, "ring-5 p4(a4)");
    }
    return ck.result("solver-tables");
}

// ---------------------------------------------------------------------------
// 4. Ring-4 uniform PSA statistics
// ---------------------------------------------------------------------------

ScenarioResult scenario_ring4_mean_length(std::uint64_t seed) {
    Checks ck;
    AlphabetNetwork net = AlphabetNetwork::ring(4);
    std::vector<LocalDistribution> dists = uniform_pair_dists(net);

    const std::size_t samples = 1'000'000;
    std::vector<double> shard_sum(kShards, 0.0);
    std::vector<std::size_t> shard_empty(kShards, 0);
    run_sharded(samples, [&](std::size_t shard, std::size_t begin, std::size_t end) {
        for (std::uint64_t i = begin; i < end; ++i) {
            RandomStream rng(mix64(seed ^ (i + 1) * RandomStream::kGolden));
            PsaOutcome out = psa_run(net, dists, rng, 1'000'000, 16);
            if (!out.terminated())
                throw InternalError("finite configuration exhausted its budget");
            shard_sum[shard] += static_cast<double>(out.trace.length());
            if (out.trace.empty())
                ++shard_empty[shard];
        }
    });
    double sum = 0.0;
    std::size_t empties = 0;
    for (std::size_t s = 0; s < kShards; ++s) {
        sum += shard_sum[s];
        empties += shard_empty[s];
    }
    double n = static_cast<double>(samples);
    ck.expect_near(sum / n, 6.0, 0.05, "mean output length over 1e6 runs");
    ck.expect_near(static_cast<double>(empties) / n, 0.125, 0.002, "P(output = e) over 1e6 runs");
    return ck.result("ring4-mean-length");
}

// ---------------------------------------------------------------------------
// 5. PFSA correctness on ring-4
// ---------------------------------------------------------------------------

ScenarioResult scenario_pfsa_fit(std::uint64_t seed) {
    Checks ck;
    PfsaConfig config = ring_pfsa_config(4);
    const TraceMonoid& m = config.monoid();
    double q1 = smallest_root(m);

    // 1e5 pyramidal increments against the uniform q1 valuation.
    const std::size_t n_fit = 100'000;
    std::vector<Trace> increments(n_fit);
    run_sharded(n_fit, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            RandomStream rng(mix64(seed ^ (i + 1) * RandomStream::kGolden));
            increments[i] = sample_pyramidal(config, rng).trace;
        }
    });

    FitReport fit = fit_first_hitting(m, increments, Valuation::uniform(m, q1), config.letter());
    ck.expect(fit.p_value > 0.01,
              "first-hitting fit against uniform q1: p = " + num(fit.p_value));

    FitReport control = fit_first_hitting(m, increments, Valuation::uniform(m, 0.25), config.letter());
    ck.expect(control.p_value < 1e-6,
              "perturbed-valuation control fails: p = " + num(control.p_value));

    // Letter frequencies along one long walk.
    WalkState walk = pfsa_generate(config, RandomStream(mix64(seed + 1)), 100'000);
    double total = static_cast<double>(walk.x.length());
    double lo = 1.0, hi = 0.0;
    for (LetterId a = 0; a < 4; ++a) {
        double freq = static_cast<double>(walk.x.count(a)) / total;
        lo = std::min(lo, freq);
        hi = std::max(hi, freq);
    }
    ck.expect(hi - lo <= 0.01, "letter frequencies within 1%: spread = " + num(hi - lo));

    // Cylinder estimates for each generator from 1e5 seeded prefixes.
    const std::size_t n_cyl = 100'000;
    const std::size_t prefix_len = 1 + 64;
    std::vector<Trace> prefixes(n_cyl);
    std::uint64_t cyl_seed = mix64(seed + 2);
    run_sharded(n_cyl, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            RandomStream rng(mix64(cyl_seed ^ (i + 1) * RandomStream::kGolden));
            prefixes[i] = pfsa_generate(config, std::move(rng), prefix_len).x;
        }
    });
    TraceSource source = [&](std::uint64_t i) { return SampleTrace{prefixes[i], false}; };
    for (LetterId a = 0; a < 4; ++a) {
        Trace x = normalize(m, {a});
        EstimateReport est = estimate_cylinder(m, source, x, n_cyl);
        ck.expect_near(est.estimate, 0.2929, 0.01, "cylinder up-a" + std::to_string(a));
    }
    return ck.result("pfsa-fit");
}

// ---------------------------------------------------------------------------
// 6. Negative result: the naive walk is not Bernoulli
// ---------------------------------------------------------------------------

ScenarioResult scenario_naive_not_bernoulli(std::uint64_t seed) {
    Checks ck;
    AlphabetNetwork net = AlphabetNetwork::ring(4);
    TraceMonoid m = net.build_monoid();
    std::vector<LocalDistribution> dists = uniform_pair_dists(net);
    double p0 = smallest_root(m);

    const std::size_t samples = 1'000'000;
    const std::size_t prefix_len = 1 + 64;
    Trace x = normalize(m, {0});
    TraceSource source = [&](std::uint64_t i) {
        RandomStream rng(mix64(seed ^ (i + 1) * RandomStream::kGolden));
        return SampleTrace{naive_walk(net, dists, std::move(rng), prefix_len), false};
    };
    EstimateReport est = estimate_cylinder(m, source, x, samples);
    double deviation = std::abs(est.estimate - p0) / est.stderror;
    ck.expect(deviation > 5.0, "naive-walk cylinder up-a0 = " + num(est.estimate) + " deviates from p0 = " +
                                   num(p0) + " by " + num(deviation) + " standard errors");
    return ck.result("naive-not-bernoulli");
}

// ---------------------------------------------------------------------------
// 7. Finite/infinite dichotomy
// ---------------------------------------------------------------------------

ScenarioResult scenario_dichotomy(std::uint64_t seed) {
    Checks ck;
    AlphabetNetwork path5 = AlphabetNetwork::path(5);
    AlphabetNetwork ring4 = AlphabetNetwork::ring(4);
    AlphabetNetwork ring5 = AlphabetNetwork::ring(5);
    auto path_dists = uniform_pair_dists(path5);
    auto ring4_dists = uniform_pair_dists(ring4);
    auto ring5_dists = uniform_pair_dists(ring5);

    ck.expect(classify_psa(path5, path_dists) == PsaClass::Infinite, "path-5 classifies infinite");
    ck.expect(classify_psa(ring4, ring4_dists) == PsaClass::Finite, "ring-4 classifies finite");
    ck.expect(classify_psa(ring5, ring5_dists) == PsaClass::Finite, "ring-5 classifies finite");
    ck.expect(structurally_infinite(path5), "path-5 structural criterion agrees");
    ck.expect(!structurally_infinite(ring4), "ring-4 structural criterion agrees");
    ck.expect(!structurally_infinite(ring5), "ring-5 structural criterion agrees");

    bool all_reach = true;
    for (std::uint64_t i = 0; i < 100; ++i) {
        PsaOutcome out = psa_run(path5, path_dists, RandomStream(mix64(seed + i)), 10'000);
        all_reach = all_reach && !out.terminated() && out.trace.length() == 10'000;
    }
    ck.expect(all_reach, "path-5 prefixes reach length 1e4 for 100 seeds");

    bool all_stop = true;
    for (std::uint64_t i = 0; i < 10'000; ++i) {
        PsaOutcome out = psa_run(ring4, ring4_dists, RandomStream(mix64(seed ^ (i + 77))));
        all_stop = all_stop && out.terminated() && out.tag == SyncTag::Deadlock;
    }
    ck.expect(all_stop, "ring-4 terminates with a deadlock for 1e4 seeds");
    return ck.result("dichotomy");
}

// ---------------------------------------------------------------------------
// 8. Chunk invariance of the streaming synchronization
// ---------------------------------------------------------------------------

WordVector random_vector(const AlphabetNetwork& net, RandomStream& rng) {
    WordVector v(net.component_count());
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::size_t len = rng.next_u64() % 13;
        const auto& alphabet = net.alphabet(i);
        for (std::size_t k = 0; k < len; ++k)
            v[i].letters.push_back(alphabet[rng.next_u64() % alphabet.size()]);
        v[i].tag = (rng.next_u64() % 2 == 0) ? FeedTag::Waiting : FeedTag::EndOfInput;
    }
    return v;
}

bool streamed_matches(const AlphabetNetwork& net, const WordVector& input, RandomStream& rng) {
    auto [want_trace, want_tag] = synchronize(net, input);
    std::size_t rounds = 1 + rng.next_u64() % 5;
    // Split every component into `rounds` segments.
    std::vector<std::vector<std::size_t>> cuts(input.size());
    for (std::size_t i = 0; i < input.size(); ++i) {
        std::vector<std::size_t> c;
        for (std::size_t r = 0; r + 1 < rounds; ++r)
            c.push_back(input[i].letters.empty() ? 0 : rng.next_u64() % (input[i].letters.size() + 1));
        c.push_back(input[i].letters.size());
        std::sort(c.begin(), c.end());
        cuts[i] = std::move(c);
    }
    SyncState state(net);
    for (std::size_t r = 0; r < rounds && !state.terminal(); ++r) {
        WordVector chunk(input.size());
        for (std::size_t i = 0; i < input.size(); ++i) {
            std::size_t from = r == 0 ? 0 : cuts[i][r - 1];
            std::size_t to = cuts[i][r];
            chunk[i].letters.assign(input[i].letters.begin() + from, input[i].letters.begin() + to);
            chunk[i].tag = (r + 1 == rounds) ? input[i].tag : FeedTag::Waiting;
        }
        stream_synchronize(state, chunk);
    }
    return state.trace() == want_trace && state.tag() == want_tag;
}

ScenarioResult scenario_chunk_invariance(std::uint64_t seed) {
    Checks ck;
    RandomStream rng(seed);
    bool all_ok = true;
    for (const AlphabetNetwork& net : {AlphabetNetwork::ring(4), AlphabetNetwork::path(5)}) {
        for (int v = 0; v < 50; ++v) {
            WordVector input = random_vector(net, rng);
            for (int c = 0; c < 10; ++c)
                all_ok = all_ok && streamed_matches(net, input, rng);
        }
    }
    ck.expect(all_ok, "100 random vectors x 10 chunkings match the one-shot synchronization");

    // The worked ring-4 vector: (a0 a1 a1 a0, a1 a2 a2 a1, a3 a2 a3 a2, a0 a3 a0 a3).
    AlphabetNetwork ring4 = AlphabetNetwork::ring(4);
    TraceMonoid m = ring4.build_monoid();
    auto word = [&](const std::vector<std::string>& names) {
        std::vector<LetterId> w;
        for (const auto& n : names)
            w.push_back(ring4.letter(n));
        return w;
    };
    WordVector y(4);
    y[0].letters = word({"a0", "a1", "a1", "a0"});
    y[1].letters = word({"a1", "a2", "a2", "a1"});
    y[2].letters = word({"a3", "a2", "a3", "a2"});
    y[3].letters = word({"a0", "a3", "a0", "a3"});
    auto [trace, tag] = synchronize(ring4, y);
    Trace want = normalize(m, word({"a0", "a1", "a3", "a2"}));
    ck.expect(trace == want && tag == SyncTag::Deadlock,
              "worked vector synchronizes to a0.a1.a3.a2 with tag DL (got " +
                  trace_to_string(m, trace) + ", " + to_string(tag) + ")");
    return ck.result("chunk-invariance");
}

// ---------------------------------------------------------------------------
// 9. Extension round trip
// ---------------------------------------------------------------------------

ScenarioResult scenario_extension_roundtrip(std::uint64_t) {
    Checks ck;
    for (std::size_t n : {std::size_t{4}, std::size_t{5}}) {
        TraceMonoid ring = TraceMonoid::ring(n);
        Valuation f = uniform_targets(ring);
        for (LetterId a = 0; a < n; ++a) {
            Valuation restricted = f.without(a);
            Classification cls = classify_valuation(ring, restricted);
            ck.expect(cls.kind == ValuationClass::SubMoebius,
                      "ring-" + std::to_string(n) + " minus a" + std::to_string(a) +
                          " classifies sub-Moebius");
            Valuation back = extend_valuation(ring, a, restricted);
            ck.expect_near(back.weight(a), f.weight(a), 1e-9,
                           "ring-" + std::to_string(n) + " recovered weight of a" + std::to_string(a));
        }
    }
    return ck.result("extension-roundtrip");
}

// ---------------------------------------------------------------------------
// Deliberate-failure demo: tampered distributions
// ---------------------------------------------------------------------------

ScenarioResult scenario_tampered_dists(std::uint64_t seed) {
    Checks ck;
    PfsaConfig config = ring_pfsa_config(4);
    const TraceMonoid& m = config.monoid();
    const std::size_t n_fit = 20'000;
    std::vector<Trace> increments;
    RandomStream rng(seed);
    for (std::size_t i = 0; i < n_fit; ++i)
        increments.push_back(sample_pyramidal(config, rng).trace);
    // Deliberately wrong target: the sub-critical uniform 1/4 valuation.
    FitReport fit = fit_first_hitting(m, increments, Valuation::uniform(m, 0.25), config.letter());
    ck.expect(fit.p_value > 0.01, "tampered distributions still fit the target valuation (p = " +
                                      num(fit.p_value) + ")");
    return ck.result("tampered-dists");
}

struct Scenario {
    ScenarioInfo info;
    std::uint64_t default_seed;
    std::function<ScenarioResult(std::uint64_t)> run;
};

const std::vector<Scenario>& scenarios() {
    static const std::vector<Scenario> table = {
        {{"polynomials", "Moebius polynomials and smallest roots match the closed forms", true},
         1,
         scenario_polynomials},
        {{"oracle-counts", "trace enumeration counts equal growth-series coefficients", true},
         1,
         scenario_oracle_counts},
        {{"solver-tables", "path/ring solvers reproduce the worked parameter tables", true},
         1,
         scenario_solver_tables},
        {{"ring4-mean-length", "ring-4 uniform sampler: mean length 6, P(empty) = 1/8", true},
         2024,
         scenario_ring4_mean_length},
        {{"pfsa-fit", "pfsa increments fit the uniform valuation; controls fail", true},
         4242,
         scenario_pfsa_fit},
        {{"naive-not-bernoulli", "naive concatenation deviates from the uniform measure", true},
         1111,
         scenario_naive_not_bernoulli},
        {{"dichotomy", "finite/infinite classification agrees with observed behavior", true},
         99,
         scenario_dichotomy},
        {{"chunk-invariance", "streamed synchronization equals one-shot synchronization", true},
         7,
         scenario_chunk_invariance},
        {{"extension-roundtrip", "restrict-then-extend recovers removed letter weights", true},
         1,
         scenario_extension_roundtrip},
        {{"tampered-dists", "negative control: a wrong valuation must be detected (fails)", false},
         4242,
         scenario_tampered_dists},
    };
    return table;
}

} // namespace

const std::vector<ScenarioInfo>& scenario_list() {
    static const std::vector<ScenarioInfo> infos = [] {
        std::vector<ScenarioInfo> out;
        for (const auto& s : scenarios())
            out.push_back(s.info);
        return out;
    }();
    return infos;
}

ScenarioResult run_scenario(const std::string& name, std::optional<std::uint64_t> seed) {
    for (const auto& s : scenarios())
        if (s.info.name == name)
            return s.run(seed.value_or(s.default_seed));
    throw InputError("unknown scenario: " + name);
}

} // namespace tracegen
