#ifndef TRACEGEN_FORMATS_HPP
#define TRACEGEN_FORMATS_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tracegen/moebius.hpp"
#include "tracegen/network.hpp"
#include "tracegen/sampler.hpp"
#include "tracegen/sync.hpp"

namespace tracegen {

// Trace text format: one clique per line, letters space-separated, lines
// ordered bottom-up, record closed by a line "%". The empty trace is a bare
// "%" line.
void print_trace(std::ostream& os, const TraceMonoid& m, const Trace& t);
std::string trace_to_text(const TraceMonoid& m, const Trace& t);
// Reads one record; nullopt at end of stream.
std::optional<Trace> read_trace(std::istream& is, const TraceMonoid& m);

// Monoid text format: "letters: a0 a1 ..." then one independence pair per
// line ("a0 a2").
void print_monoid(std::ostream& os, const TraceMonoid& m);
TraceMonoid parse_monoid(std::istream& is);

// Network lines inside a config: "letters: ..." plus "alphabet i: a0 a1".
void print_network(std::ostream& os, const AlphabetNetwork& net);

// Valuation lines: "a0=0.308".
void print_valuation(std::ostream& os, const Valuation& f);

// Distribution line: "i: a0=0.308 a1=0.692 (prob|sub)".
void print_dists(std::ostream& os, const AlphabetNetwork& net,
                 const std::vector<LocalDistribution>& dists);

// Word vector text format: "i: a0 a1 a1 a0 | WFI" (or "| EOF").
void print_word_vector(std::ostream& os, const AlphabetNetwork& net, const WordVector& v);

// One "[dists]" line kept syntactic; binding to a network happens per
// command because the pfsa indexes distributions over the reduced network.
struct RawDist {
    std::size_t index = 0; // 1-based component index
    std::vector<std::pair<std::string, double>> weights;
    std::optional<DistKind> declared_kind;
};

// Self-describing plain-text run configuration with sections [network],
// [monoid], [dists], [targets] and [run].
struct RunConfig {
    std::optional<AlphabetNetwork> network;
    std::optional<TraceMonoid> monoid; // alternative input for oracle/analyze
    std::vector<RawDist> dists;
    bool has_dists = false;
    std::map<std::string, double> targets; // letter name -> target weight
    bool targets_uniform = false;
    bool has_targets = false;
    std::map<std::string, std::string> run; // raw key: value pairs
};

RunConfig parse_config(std::istream& is);
RunConfig parse_config_file(const std::string& path);

// Resolves raw distribution lines against a network: exactly one line per
// component, letters resolved by name, declared kinds verified.
std::vector<LocalDistribution> bind_dists(const AlphabetNetwork& net,
                                          const std::vector<RawDist>& raw);

} // namespace tracegen

#endif
