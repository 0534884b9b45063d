#include <doctest.h>

#include <cmath>
#include <vector>

#include "tracegen/sampler.hpp"

#include "test_support.hpp"

using namespace tracegen;

namespace {

std::vector<LocalDistribution> uniform_dists(const AlphabetNetwork& net) {
    std::vector<LocalDistribution> dists;
    for (std::size_t i = 0; i < net.component_count(); ++i) {
        std::vector<std::pair<LetterId, double>> w;
        for (LetterId a : net.alphabet(i))
            w.emplace_back(a, 1.0 / static_cast<double>(net.alphabet(i).size()));
        dists.push_back(LocalDistribution::make(std::move(w)));
    }
    return dists;
}

} // namespace

TEST_CASE("local distribution kinds and validation") {
    LocalDistribution prob = LocalDistribution::make({{0, 0.5}, {1, 0.5}});
    CHECK(prob.kind() == DistKind::Probability);
    CHECK(prob.stop_weight() == 0.0);

    LocalDistribution sub = LocalDistribution::make({{0, 0.2}, {1, 0.3}});
    CHECK(sub.kind() == DistKind::SubProbability);
    CHECK(sub.stop_weight() == doctest::Approx(0.5));

    CHECK_THROWS_AS(LocalDistribution::make({{0, 0.7}, {1, 0.7}}), InputError);
    CHECK_THROWS_AS(LocalDistribution::make({{0, -0.1}}), InputError);
    CHECK_THROWS_AS(LocalDistribution::make({{0, 0.2}, {0, 0.2}}), InputError);
}

TEST_CASE("finite Bernoulli words have the geometric law") {
    LocalDistribution half = LocalDistribution::make({{0, 0.5}});
    RandomStream rng(404);
    const int n = 1'000'000;
    double total = 0.0;
    for (int i = 0; i < n; ++i)
        total += static_cast<double>(finite_bernoulli_word(half, rng).size());
    CHECK(total / n == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("finite Bernoulli words hit the empty word with rate 1 - sum") {
    LocalDistribution d = LocalDistribution::make({{0, 0.2}, {1, 0.3}});
    RandomStream rng(405);
    const int n = 1'000'000;
    int empties = 0;
    for (int i = 0; i < n; ++i)
        if (finite_bernoulli_word(d, rng).empty())
            ++empties;
    CHECK(static_cast<double>(empties) / n == doctest::Approx(0.5).epsilon(0.004));
}

TEST_CASE("finite Bernoulli words refuse probability-kind inputs and runaways") {
    LocalDistribution prob = LocalDistribution::make({{0, 1.0}});
    RandomStream rng(1);
    CHECK_THROWS_AS(finite_bernoulli_word(prob, rng), InputError);

    LocalDistribution heavy = LocalDistribution::make({{0, 0.999999}});
    RandomStream rng2(2);
    CHECK_THROWS_AS(finite_bernoulli_word(heavy, rng2, 16), ResourceError);
}

TEST_CASE("psa valuation multiplies weights across resources") {
    AlphabetNetwork ring4 = AlphabetNetwork::ring(4);
    Valuation f = psa_valuation(ring4, uniform_dists(ring4));
    for (LetterId a = 0; a < 4; ++a)
        CHECK(f.weight(a) == doctest::Approx(0.25));

    // Single-resource letters keep their local weight.
    AlphabetNetwork path2 = AlphabetNetwork::path(2);
    Valuation g = psa_valuation(path2, uniform_dists(path2));
    CHECK(g.weight(0) == doctest::Approx(0.5));
}

TEST_CASE("psa run on ring-4 terminates with a deadlock") {
    AlphabetNetwork net = AlphabetNetwork::ring(4);
    auto dists = uniform_dists(net);
    PsaOutcome out = psa_run(net, dists, RandomStream(7));
    CHECK(out.terminated());
    CHECK(out.tag == SyncTag::Deadlock);
}

TEST_CASE("psa run on path-5 exhausts any budget") {
    AlphabetNetwork net = AlphabetNetwork::path(5);
    auto dists = uniform_dists(net);
    PsaOutcome out = psa_run(net, dists, RandomStream(9), 1000);
    CHECK(!out.terminated());
    CHECK(out.trace.length() == 1000);
}

TEST_CASE("psa with tiny sub-probability weights usually outputs the unit") {
    AlphabetNetwork net = AlphabetNetwork::ring(4);
    std::vector<LocalDistribution> dists;
    for (std::size_t i = 0; i < 4; ++i) {
        std::vector<std::pair<LetterId, double>> w;
        for (LetterId a : net.alphabet(i))
            w.emplace_back(a, 1e-4);
        dists.push_back(LocalDistribution::make(std::move(w)));
    }
    int empties = 0;
    for (int i = 0; i < 100; ++i) {
        PsaOutcome out = psa_run(net, dists, RandomStream(1000 + i));
        CHECK(out.terminated());
        if (out.trace.empty())
            ++empties;
    }
    CHECK(empties > 90);
}

TEST_CASE("psa outcome is reproducible and chunk-size independent") {
    AlphabetNetwork ring4 = AlphabetNetwork::ring(4);
    AlphabetNetwork path5 = AlphabetNetwork::path(5);
    auto ring_dists = uniform_dists(ring4);
    auto path_dists = uniform_dists(path5);
    for (std::uint64_t seed : {1ULL, 2ULL, 31337ULL}) {
        PsaOutcome a = psa_run(ring4, ring_dists, RandomStream(seed));
        PsaOutcome b = psa_run(ring4, ring_dists, RandomStream(seed));
        CHECK(a.trace == b.trace);
        CHECK(a.tag == b.tag);
        for (std::size_t chunk : {1, 7, 64, 512}) {
            PsaOutcome c = psa_run(ring4, ring_dists, RandomStream(seed), 1'000'000, chunk);
            CHECK(c.trace == a.trace);
        }
        // Budget-capped prefixes are chunk-size independent too.
        PsaOutcome p = psa_run(path5, path_dists, RandomStream(seed), 500);
        for (std::size_t chunk : {1, 7, 512}) {
            PsaOutcome q = psa_run(path5, path_dists, RandomStream(seed), 500, chunk);
            CHECK(q.trace == p.trace);
            CHECK(q.trace.length() == 500);
        }
    }
}

TEST_CASE("psa empirical statistics on ring-4") {
    AlphabetNetwork net = AlphabetNetwork::ring(4);
    auto dists = uniform_dists(net);
    const int n = 200'000;
    double total = 0.0;
    int empties = 0;
    RandomStream master(606);
    for (int i = 0; i < n; ++i) {
        PsaOutcome out = psa_run(net, dists, master.split());
        total += static_cast<double>(out.trace.length());
        if (out.trace.empty())
            ++empties;
    }
    CHECK(total / n == doctest::Approx(6.0).epsilon(0.02));
    CHECK(static_cast<double>(empties) / n == doctest::Approx(0.125).epsilon(0.05));
}

TEST_CASE("cylinder frequencies follow the psa valuation") {
    // Full-cylinder check on a finite-output configuration: the fraction of
    // outputs dominating x approaches f(x) for every finite x.
    AlphabetNetwork net = AlphabetNetwork::ring(4);
    TraceMonoid m = net.build_monoid();
    auto dists = uniform_dists(net);
    const int n = 200'000;
    std::vector<Trace> outputs;
    outputs.reserve(n);
    RandomStream master(607);
    for (int i = 0; i < n; ++i)
        outputs.push_back(psa_run(net, dists, master.split()).trace);

    RandomStream pick(608);
    std::vector<Trace> probes{normalize(m, {0, 1}), normalize(m, {0}), normalize(m, {2, 0})};
    for (int extra = 0; extra < 3; ++extra)
        probes.push_back(normalize(m, test::random_word(m, pick, 2)));
    for (const Trace& x : probes) {
        double expected = std::pow(0.25, static_cast<double>(x.length()));
        int hits = 0;
        for (const Trace& y : outputs)
            if (left_divide(m, x, y))
                ++hits;
        double tol = 5.0 * std::sqrt(expected * (1.0 - expected) / n) + 1e-12;
        CHECK(std::abs(static_cast<double>(hits) / n - expected) <= tol);
    }
}

TEST_CASE("psa point probabilities are epsilon times the valuation") {
    // P(output = x) = mu(1/4) * (1/4)^|x| on the uniform ring; check the
    // singleton x = a0: 1/8 * 1/4 = 1/32.
    AlphabetNetwork net = AlphabetNetwork::ring(4);
    TraceMonoid m = net.build_monoid();
    auto dists = uniform_dists(net);
    Trace x = normalize(m, {0});
    const int n = 200'000;
    int exact = 0;
    RandomStream master(609);
    for (int i = 0; i < n; ++i)
        if (psa_run(net, dists, master.split()).trace == x)
            ++exact;
    CHECK(static_cast<double>(exact) / n == doctest::Approx(1.0 / 32.0).epsilon(0.08));
}

TEST_CASE("psa classification") {
    AlphabetNetwork path5 = AlphabetNetwork::path(5);
    AlphabetNetwork ring4 = AlphabetNetwork::ring(4);
    CHECK(classify_psa(path5, uniform_dists(path5)) == PsaClass::Infinite);
    CHECK(classify_psa(ring4, uniform_dists(ring4)) == PsaClass::Finite);

    // Non-uniform positive probabilities on the path are still infinite.
    std::vector<LocalDistribution> skew;
    for (std::size_t i = 0; i < 4; ++i) {
        const auto& alphabet = path5.alphabet(i);
        skew.push_back(LocalDistribution::make({{alphabet[0], 0.9}, {alphabet[1], 0.1}}));
    }
    CHECK(classify_psa(path5, skew) == PsaClass::Infinite);

    // Two alphabets sharing two letters force finiteness.
    AlphabetNetwork doubled = AlphabetNetwork::make({{"x", "y"}, {"x", "y"}});
    CHECK(classify_psa(doubled, uniform_dists(doubled)) == PsaClass::Finite);
    CHECK(!structurally_infinite(doubled));
}

TEST_CASE("classification agrees with observed behavior") {
    AlphabetNetwork path5 = AlphabetNetwork::path(5);
    AlphabetNetwork ring4 = AlphabetNetwork::ring(4);
    auto path_dists = uniform_dists(path5);
    auto ring_dists = uniform_dists(ring4);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        CHECK(!psa_run(path5, path_dists, RandomStream(seed), 10'000).terminated());
        CHECK(psa_run(ring4, ring_dists, RandomStream(seed)).terminated());
    }
}

TEST_CASE("expected uniform length") {
    CHECK(expected_length_uniform(TraceMonoid::ring(4), 0.25) == doctest::Approx(6.0));
    CHECK(expected_length_uniform(TraceMonoid::free_monoid(2), 0.25) == doctest::Approx(1.0));
    CHECK(expected_length_uniform(TraceMonoid::ring(4), 1e-9) ==
          doctest::Approx(0.0).epsilon(1e-6));
    CHECK_THROWS_AS(expected_length_uniform(TraceMonoid::ring(4), 0.3), InputError);
}

TEST_CASE("psa input validation") {
    AlphabetNetwork net = AlphabetNetwork::ring(4);
    auto dists = uniform_dists(net);
    CHECK_THROWS_AS(psa_run(net, dists, RandomStream(1), 0), InputError);

    std::vector<LocalDistribution> wrong = dists;
    wrong.pop_back();
    CHECK_THROWS_AS(psa_run(net, wrong, RandomStream(1)), InputError);

    // Support must match the alphabet exactly.
    std::vector<LocalDistribution> off = dists;
    off[0] = LocalDistribution::make({{net.alphabet(0)[0], 1.0}});
    CHECK_THROWS_AS(psa_run(net, off, RandomStream(1)), InputError);
}
