#include <doctest.h>

#include <cmath>

#include "tracegen/solver.hpp"

#include "test_support.hpp"

using namespace tracegen;

TEST_CASE("prefix Moebius recurrence") {
    PathTargets t3{{0.2, 0.2, 0.2}};
    std::vector<double> mu3 = prefix_moebius(t3);
    std::vector<double> want3{1.0, 0.8, 0.6, 0.44};
    REQUIRE(mu3.size() == want3.size());
    for (std::size_t i = 0; i < mu3.size(); ++i)
        CHECK(mu3[i] == doctest::Approx(want3[i]).epsilon(1e-14));

    PathTargets t1{{0.3}};
    std::vector<double> mu1 = prefix_moebius(t1);
    REQUIRE(mu1.size() == 2);
    CHECK(mu1[0] == 1.0);
    CHECK(mu1[1] == doctest::Approx(0.7));

    // At the uniform root the full value vanishes.
    double q0 = smallest_root(TraceMonoid::path(5));
    std::vector<double> mu = prefix_moebius(PathTargets{std::vector<double>(5, q0)});
    CHECK(std::abs(mu.back()) < 1e-11);
    Polynomial poly = moebius_polynomial(TraceMonoid::path(5));
    CHECK(mu.back() == doctest::Approx(poly(q0)).epsilon(1e-9));
}

TEST_CASE("path Bernoulli solver reproduces the worked table") {
    double q0 = smallest_root(TraceMonoid::path(5));
    SolvedParams solved = solve_path_bernoulli(PathTargets{std::vector<double>(5, q0)});
    REQUIRE(solved.dists.size() == 4);

    const double expect[4][2] = {{0.308, 0.692}, {0.445, 0.555}, {0.555, 0.445}, {0.692, 0.308}};
    for (std::size_t i = 0; i < 4; ++i) {
        const auto& w = solved.dists[i].weights();
        CHECK(std::abs(w[0].second - expect[i][0]) < 1e-3);
        CHECK(std::abs(w[1].second - expect[i][1]) < 1e-3);
        CHECK(std::abs(w[0].second + w[1].second - 1.0) < 1e-12);
        CHECK(solved.dists[i].kind() == DistKind::Probability);
    }

    // The sampler valuation realizes the targets letterwise.
    Valuation f = psa_valuation(solved.network, solved.dists);
    for (LetterId a = 0; a < 5; ++a)
        CHECK(std::abs(f.weight(a) - q0) < 1e-10);
}

TEST_CASE("path Bernoulli solver on two fully dependent letters") {
    SolvedParams solved = solve_path_bernoulli(PathTargets{{0.4, 0.6}});
    REQUIRE(solved.dists.size() == 1);
    CHECK(solved.dists[0].weight(0) == doctest::Approx(0.4));
    CHECK(solved.dists[0].weight(1) == doctest::Approx(0.6));
    CHECK_THROWS_AS(solve_path_bernoulli(PathTargets{{0.4, 0.5}}), InputError);
}

TEST_CASE("path Bernoulli solver on path-4 satisfies the diagonal identities") {
    TraceMonoid path4 = TraceMonoid::path(4);
    double p0 = smallest_root(path4);
    SolvedParams solved = solve_path_bernoulli(PathTargets{std::vector<double>(4, p0)});
    Valuation f = psa_valuation(solved.network, solved.dists);
    for (LetterId a = 0; a < 4; ++a)
        CHECK(std::abs(f.weight(a) - p0) < 1e-12);
}

TEST_CASE("path solver rejects non-Moebius targets") {
    CHECK_THROWS_AS(solve_path_bernoulli(PathTargets{std::vector<double>(5, 0.25)}), InputError);
    CHECK_THROWS_AS(solve_path_bernoulli(PathTargets{std::vector<double>(5, 0.5)}), InputError);
    CHECK_THROWS_AS(solve_path_bernoulli(PathTargets{{0.3, -0.1, 0.3}}), InputError);
}

TEST_CASE("sub-Bernoulli path solver inside ring-5") {
    double p0 = smallest_root(TraceMonoid::ring(5));
    SolvedParams solved = solve_path_sub_bernoulli(PathTargets{std::vector<double>(4, p0)});
    REQUIRE(solved.dists.size() == 3);

    const auto& p2 = solved.dists[0].weights();
    const auto& p3 = solved.dists[1].weights();
    const auto& p4 = solved.dists[2].weights();
    CHECK(p2[0].second == doctest::Approx(0.276).epsilon(2e-3));
    CHECK(p2[1].second == doctest::Approx(0.724).epsilon(2e-3));
    CHECK(p3[0].second == doctest::Approx(0.382).epsilon(2e-3));
    CHECK(p3[1].second == doctest::Approx(0.618).epsilon(2e-3));
    CHECK(p4[0].second == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-9));
    CHECK(p4[1].second == doctest::Approx(p0).epsilon(1e-9));
    CHECK(solved.dists[2].kind() == DistKind::SubProbability);
    CHECK(p4[0].second + p4[1].second < 1.0);

    Valuation f = psa_valuation(solved.network, solved.dists);
    for (LetterId a = 0; a < 4; ++a)
        CHECK(std::abs(f.weight(a) - p0) < 1e-10);
}

TEST_CASE("sub-Bernoulli path solver inside ring-4") {
    double q1 = smallest_root(TraceMonoid::ring(4));
    SolvedParams solved = solve_path_sub_bernoulli(PathTargets{std::vector<double>(3, q1)});
    REQUIRE(solved.dists.size() == 2);
    const auto& p1 = solved.dists[0].weights();
    const auto& p2 = solved.dists[1].weights();
    CHECK(p1[0].second == doctest::Approx(q1).epsilon(1e-9));
    CHECK(p1[1].second == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-9));
    CHECK(p2[0].second == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-9));
    CHECK(p2[1].second == doctest::Approx(q1).epsilon(1e-9));
    CHECK(solved.dists[0].kind() == DistKind::Probability);
    CHECK(solved.dists[1].kind() == DistKind::SubProbability);
}

TEST_CASE("sub-Bernoulli solver accepts a single letter and rejects overweight targets") {
    SolvedParams solved = solve_path_sub_bernoulli(PathTargets{{0.7}});
    REQUIRE(solved.dists.size() == 1);
    CHECK(solved.dists[0].weight(0) == doctest::Approx(0.7));
    CHECK(solved.dists[0].kind() == DistKind::SubProbability);

    CHECK_THROWS_AS(solve_path_sub_bernoulli(PathTargets{std::vector<double>(3, 0.5)}), InputError);
}

TEST_CASE("ring solver reproduces the worked tables") {
    SUBCASE("ring-4") {
        double q1 = smallest_root(TraceMonoid::ring(4));
        auto [removed, solved] = solve_ring(std::vector<double>(4, q1));
        CHECK(removed == 0);
        REQUIRE(solved.network.component_count() == 4);
        // Alphabets in original component order: {a1}, {a1,a2}, {a2,a3}, {a3}.
        CHECK(solved.dists[0].weights().size() == 1);
        CHECK(solved.dists[0].weights()[0].second == doctest::Approx(1.0));
        const auto& pair1 = solved.dists[1];
        const auto& pair2 = solved.dists[2];
        CHECK(pair1.weight(solved.network.letter("a1")) == doctest::Approx(q1).epsilon(1e-9));
        CHECK(pair1.weight(solved.network.letter("a2")) ==
              doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-9));
        CHECK(pair2.weight(solved.network.letter("a2")) ==
              doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-9));
        CHECK(pair2.weight(solved.network.letter("a3")) == doctest::Approx(q1).epsilon(1e-9));
    }
    SUBCASE("ring-5") {
        double p0 = smallest_root(TraceMonoid::ring(5));
        auto [removed, solved] = solve_ring(std::vector<double>(5, p0));
        CHECK(removed == 0);
        const AlphabetNetwork& net = solved.network;
        CHECK(solved.dists[1].weight(net.letter("a1")) == doctest::Approx(0.276).epsilon(2e-3));
        CHECK(solved.dists[1].weight(net.letter("a2")) == doctest::Approx(0.724).epsilon(2e-3));
        CHECK(solved.dists[2].weight(net.letter("a2")) == doctest::Approx(0.382).epsilon(2e-3));
        CHECK(solved.dists[2].weight(net.letter("a3")) == doctest::Approx(0.618).epsilon(2e-3));
        CHECK(solved.dists[3].weight(net.letter("a3")) == doctest::Approx(0.447).epsilon(2e-3));
        CHECK(solved.dists[3].weight(net.letter("a4")) == doctest::Approx(0.276).epsilon(2e-3));
    }
}

TEST_CASE("ring solver round trip through extension") {
    for (std::size_t n : {std::size_t{4}, std::size_t{5}, std::size_t{6}}) {
        TraceMonoid ring = TraceMonoid::ring(n);
        double p0 = smallest_root(ring);
        auto [removed, solved] = solve_ring(std::vector<double>(n, p0));
        Valuation realized = psa_valuation(solved.network, solved.dists);
        // Transport the realized weights onto the ring monoid and extend.
        std::vector<double> w(n, 0.0);
        for (LetterId a = 0; a < solved.network.letter_count(); ++a)
            w[ring.letter(solved.network.letter_name(a))] = realized.weight(a);
        Valuation restricted(ring, std::move(w));
        CHECK(classify_valuation(ring, restricted).kind == ValuationClass::SubMoebius);
        Valuation extended = extend_valuation(ring, removed, restricted);
        CHECK(std::abs(extended.weight(removed) - p0) <= 1e-9);
    }
}

TEST_CASE("ring solver validations") {
    CHECK_THROWS_AS(solve_ring(std::vector<double>(3, 0.3)), InputError);
    CHECK_THROWS_AS(solve_ring(std::vector<double>(4, 0.25)), InputError); // sub-Moebius, not Moebius
    // Removing a different letter keeps the solution consistent.
    double q1 = smallest_root(TraceMonoid::ring(4));
    auto [removed, solved] = solve_ring(std::vector<double>(4, q1), 2);
    CHECK(removed == 2);
    Valuation realized = psa_valuation(solved.network, solved.dists);
    for (LetterId a = 0; a < solved.network.letter_count(); ++a)
        CHECK(realized.weight(a) == doctest::Approx(q1).epsilon(1e-9));
}

TEST_CASE("small-values scaling realizes epsilon times the target exactly") {
    AlphabetNetwork ring4 = AlphabetNetwork::ring(4);
    TraceMonoid m = ring4.build_monoid();

    SUBCASE("worked example: unit target, epsilon 0.04") {
        SolvedParams solved = scale_small_values(ring4, Valuation::uniform(m, 1.0), 0.04);
        for (const auto& d : solved.dists) {
            CHECK(d.weight_sum() == doctest::Approx(0.4));
            for (auto [a, w] : d.weights())
                CHECK(w == doctest::Approx(0.2));
        }
        Valuation f = psa_valuation(ring4, solved.dists);
        for (LetterId a = 0; a < 4; ++a)
            CHECK(f.weight(a) == doctest::Approx(0.04).epsilon(1e-12));
    }

    SUBCASE("arbitrary targets") {
        Valuation t = Valuation::from_names(m, {{"a0", 0.9}, {"a1", 0.3}, {"a2", 1.7}, {"a3", 0.6}});
        SolvedParams solved = scale_small_values(ring4, t, 0.01);
        Valuation f = psa_valuation(ring4, solved.dists);
        for (LetterId a = 0; a < 4; ++a)
            CHECK(f.weight(a) == doctest::Approx(0.01 * t.weight(a)).epsilon(1e-12));
    }

    SUBCASE("single-resource letters get the plain product") {
        AlphabetNetwork path3 = AlphabetNetwork::path(3);
        TraceMonoid mp = path3.build_monoid();
        SolvedParams solved = scale_small_values(path3, Valuation::uniform(mp, 1.0), 0.05);
        CHECK(solved.dists[0].weight(0) == doctest::Approx(0.05)); // a0 has one resource
    }

    SUBCASE("oversized epsilon is rejected with the violating alphabet") {
        CHECK_THROWS_WITH_AS(scale_small_values(ring4, Valuation::uniform(m, 1.0), 0.5),
                             doctest::Contains("alphabet 1"), InputError);
    }
}

TEST_CASE("uniform targets") {
    TraceMonoid path5 = TraceMonoid::path(5);
    Valuation f = uniform_targets(path5);
    CHECK(f.weight(0) == doctest::Approx(0.30798).epsilon(1e-4));
    CHECK(classify_valuation(path5, f).kind == ValuationClass::Moebius);

    TraceMonoid single = TraceMonoid::free_monoid(1);
    CHECK(uniform_targets(single).weight(0) == doctest::Approx(1.0));
}
