#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "tracegen/cli.hpp"
#include "tracegen/pfsa.hpp"
#include "tracegen/scenarios.hpp"

using namespace tracegen;

namespace {

RunConfig config_from(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

const char* kRing4Config = R"([network]
letters: a0 a1 a2 a3
alphabet 1: a0 a1
alphabet 2: a1 a2
alphabet 3: a2 a3
alphabet 4: a3 a0

[dists]
1: a0=0.5 a1=0.5 (prob)
2: a1=0.5 a2=0.5 (prob)
3: a2=0.5 a3=0.5 (prob)
4: a3=0.5 a0=0.5 (prob)

[run]
algorithm: psa
seed: 1
)";

const char* kPath5Config = R"([network]
letters: a0 a1 a2 a3 a4
alphabet 1: a0 a1
alphabet 2: a1 a2
alphabet 3: a2 a3
alphabet 4: a3 a4

[targets]
uniform
)";

} // namespace

TEST_CASE("analyze reports the worked monoids") {
    std::ostringstream out;
    CHECK(cmd_analyze(config_from(kRing4Config), out) == kExitPass);
    std::string s = out.str();
    CHECK(s.find("moebius polynomial: 1 - 4t + 2t^2") != std::string::npos);
    CHECK(s.find("smallest root p0: 0.292893") != std::string::npos);
    CHECK(s.find("irreducible: yes") != std::string::npos);
    CHECK(s.find("structural criterion (probability-kind locals): Finite") != std::string::npos);

    std::ostringstream out2;
    CHECK(cmd_analyze(config_from(kPath5Config), out2) == kExitPass);
    std::string s2 = out2.str();
    CHECK(s2.find("1 - 5t + 6t^2 - 1t^3") != std::string::npos);
    CHECK(s2.find("structural criterion (probability-kind locals): Infinite") != std::string::npos);

    // A single alphabet yields a free-word monoid report.
    std::ostringstream out3;
    cmd_analyze(config_from("[network]\nletters: x y\nalphabet 1: x y\n"), out3);
    CHECK(out3.str().find("none (traces are plain words)") != std::string::npos);
    CHECK(out3.str().find("1 - 2t") != std::string::npos);
}

TEST_CASE("solve on the path model emits the worked table") {
    std::ostringstream out;
    CHECK(cmd_solve(config_from(kPath5Config), {}, {}, out) == kExitPass);
    std::string s = out.str();
    CHECK(s.find("topology: path, Bernoulli targets") != std::string::npos);
    CHECK(s.find("[dists]") != std::string::npos);
    CHECK(s.find("1: a0=0.30797") != std::string::npos);
    CHECK(s.find("(prob)") != std::string::npos);
    CHECK(s.find("FAIL") == std::string::npos);
}

TEST_CASE("solve on the ring emits a reduced dists section") {
    std::string text = R"([network]
letters: a0 a1 a2 a3 a4
alphabet 1: a0 a1
alphabet 2: a1 a2
alphabet 3: a2 a3
alphabet 4: a3 a4
alphabet 5: a4 a0

[targets]
uniform
)";
    std::ostringstream out;
    CHECK(cmd_solve(config_from(text), {}, {}, out) == kExitPass);
    std::string s = out.str();
    CHECK(s.find("topology: ring, removed letter a0") != std::string::npos);
    CHECK(s.find("a1=0.27639") != std::string::npos);
    CHECK(s.find("a2=0.38196") != std::string::npos);
    CHECK(s.find("(sub)") != std::string::npos);
}

TEST_CASE("solve rejects unsupported topologies") {
    std::string star = R"([network]
letters: c x y z
alphabet 1: c x
alphabet 2: c y
alphabet 3: c z

[targets]
uniform
)";
    std::ostringstream out;
    CHECK_THROWS_WITH_AS(cmd_solve(config_from(star), {}, {}, out),
                         doctest::Contains("general topology unsolved"), InputError);
}

TEST_CASE("generate runs the psa and reports termination") {
    std::ostringstream out;
    CommonOptions opts;
    opts.seed = 7;
    CHECK(cmd_generate(config_from(kRing4Config), opts, {}, out) == kExitPass);
    std::string s = out.str();
    CHECK(s.find("%") != std::string::npos);
    CHECK(s.find("# status=Terminated(DL)") != std::string::npos);

    // Same seed, same output.
    std::ostringstream out2;
    cmd_generate(config_from(kRing4Config), opts, {}, out2);
    // Strip the wall-time line before comparing.
    auto strip = [](const std::string& text) {
        std::string kept;
        std::istringstream lines(text);
        std::string line;
        while (std::getline(lines, line))
            if (line.rfind("# wall_ms", 0) != 0)
                kept += line + "\n";
        return kept;
    };
    CHECK(strip(out.str()) == strip(out2.str()));
}

TEST_CASE("generate respects budgets on infinite configurations") {
    std::string text = R"([network]
letters: a0 a1 a2 a3 a4
alphabet 1: a0 a1
alphabet 2: a1 a2
alphabet 3: a2 a3
alphabet 4: a3 a4

[dists]
1: a0=0.5 a1=0.5
2: a1=0.5 a2=0.5
3: a2=0.5 a3=0.5
4: a3=0.5 a4=0.5

[run]
algorithm: psa
seed: 3
budget: 500
)";
    std::ostringstream out;
    CHECK(cmd_generate(config_from(text), {}, {}, out) == kExitPass);
    CHECK(out.str().find("# status=BudgetExhausted") != std::string::npos);
    CHECK(out.str().find("# length=500") != std::string::npos);
}

TEST_CASE("pfsa increments log uses the trace text format") {
    std::string text = R"([network]
letters: a0 a1 a2 a3
alphabet 1: a0 a1
alphabet 2: a1 a2
alphabet 3: a2 a3
alphabet 4: a3 a0

[dists]
1: a1=1
2: a1=0.29289321881345254 a2=0.7071067811865476
3: a2=0.41421356237309503 a3=0.29289321881345254 (sub)
4: a3=1

[run]
algorithm: pfsa
letter: a0
seed: 2
target-length: 20
)";
    std::string log_path = "pfsa_increments.log";
    std::ostringstream out;
    CHECK(cmd_generate(config_from(text), {}, log_path, out) == kExitPass);

    std::ifstream log(log_path);
    REQUIRE(log.good());
    std::string first_line;
    std::getline(log, first_line);
    CHECK(first_line.rfind("# rejected: ", 0) == 0);
    // Every record parses back as a hitting-set member.
    AlphabetNetwork net = AlphabetNetwork::ring(4);
    TraceMonoid m = net.build_monoid();
    log.seekg(0);
    std::size_t records = 0;
    std::string line;
    std::string buffer;
    while (std::getline(log, line)) {
        buffer += line + "\n";
    }
    std::istringstream replay(buffer);
    while (auto t = read_trace(replay, m)) {
        ++records;
        CHECK(in_hitting_set(m, *t, m.letter("a0")));
    }
    CHECK(records >= 2);
    std::remove(log_path.c_str());
}

TEST_CASE("generate runs the pfsa with reduced dists") {
    std::string text = R"([network]
letters: a0 a1 a2 a3
alphabet 1: a0 a1
alphabet 2: a1 a2
alphabet 3: a2 a3
alphabet 4: a3 a0

[dists]
1: a1=1
2: a1=0.29289321881345254 a2=0.7071067811865476
3: a2=0.41421356237309503 a3=0.29289321881345254 (sub)
4: a3=1

[run]
algorithm: pfsa
letter: a0
seed: 1
target-length: 100
)";
    std::ostringstream out;
    CHECK(cmd_generate(config_from(text), {}, {}, out) == kExitPass);
    std::string s = out.str();
    CHECK(s.find("# algorithm=pfsa seed=1 letter=a0") != std::string::npos);
    CHECK(s.find("# increments=") != std::string::npos);

    std::ostringstream out2;
    cmd_generate(config_from(text), {}, {}, out2);
    CHECK(out.str().substr(0, out.str().find("# wall")) ==
          out2.str().substr(0, out2.str().find("# wall")));
}

TEST_CASE("generate runs the naive walk") {
    std::string text = std::string(kRing4Config);
    text.replace(text.find("algorithm: psa"), 14, "algorithm: naive");
    text += "target-length: 200\n";
    std::ostringstream out;
    CHECK(cmd_generate(config_from(text), {}, {}, out) == kExitPass);
    CHECK(out.str().find("# algorithm=naive") != std::string::npos);
}

TEST_CASE("verify runs single scenarios") {
    std::ostringstream out;
    CHECK(cmd_verify(std::string("polynomials"), {}, out) == kExitPass);
    CHECK(out.str().find("PASS polynomials") != std::string::npos);

    std::ostringstream out2;
    CHECK(cmd_verify(std::string("extension-roundtrip"), {}, out2) == kExitPass);

    // The tampered-distribution demo must fail with a diagnostic.
    std::ostringstream out3;
    CHECK(cmd_verify(std::string("tampered-dists"), {}, out3) == kExitFail);
    CHECK(out3.str().find("FAIL") != std::string::npos);

    CHECK_THROWS_AS(cmd_verify(std::string("no-such-scenario"), {}, out), InputError);
}

TEST_CASE("oracle cross-checks a small monoid") {
    std::string text = "[monoid]\nletters: a b c d\na c\na d\nb d\n";
    std::ostringstream out;
    CHECK(cmd_oracle(config_from(text), {}, 6, out) == kExitPass);
    CHECK(out.str().find("counts agree") != std::string::npos);
    CHECK(out.str().find("(agree)") != std::string::npos);

    std::ostringstream out2;
    CHECK(cmd_oracle(config_from(kPath5Config), {}, 6, out2) == kExitPass);
    CHECK(out2.str().find("path solver closed form vs recurrence") != std::string::npos);
}
