#ifndef TRACEGEN_TRACE_HPP
#define TRACEGEN_TRACE_HPP

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tracegen/monoid.hpp"

namespace tracegen {

// A trace in Cartier-Foata normal form: a sequence of nonempty cliques
// (gamma_1, ..., gamma_k) where every letter of gamma_{i+1} depends on some
// letter of gamma_i. In the heap picture clique i holds the pieces at
// height i. Two traces are equal iff their clique sequences are identical.
struct Trace {
    std::vector<CliqueMask> cliques;

    bool empty() const { return cliques.empty(); }
    std::size_t height() const { return cliques.size(); }
    std::size_t length() const;
    std::size_t count(LetterId a) const; // |x|_a

    bool operator==(const Trace&) const = default;
    auto operator<=>(const Trace&) const = default;
};

struct TraceHash {
    std::size_t operator()(const Trace& t) const;
};

// An occurrence of a letter inside a trace, identified by its clique index
// (0-based height) and its letter.
struct Occurrence {
    std::size_t level;
    LetterId letter;
    bool operator==(const Occurrence&) const = default;
    auto operator<=>(const Occurrence&) const = default;
};

// Appends one letter to a normal form in place (the letter falls to the
// lowest level above every occurrence it depends on).
void push_letter(const TraceMonoid& m, Trace& t, LetterId a);

// Cartier-Foata normal form of a word. Constant on congruence classes.
Trace normalize(const TraceMonoid& m, const std::vector<LetterId>& word);

// Some linearization of the trace: letters clique by clique, by id within a
// clique. Normalizing it returns the same trace.
std::vector<LetterId> linearize(const Trace& t);

// Throws InputError unless t is a valid normal form over m.
void validate_trace(const TraceMonoid& m, const Trace& t);

// Normal form of x.y.
Trace concat(const TraceMonoid& m, const Trace& x, const Trace& y);
void concat_into(const TraceMonoid& m, Trace& x, const Trace& y);

// If x <= y in the left divisibility order, the unique z with x.z = y.
std::optional<Trace> left_divide(const TraceMonoid& m, const Trace& x, const Trace& y);

// Maximal elements of the labelled partial order of x: occurrences with no
// later occurrence depending on them. Ordered by (level, letter).
std::vector<Occurrence> maximal_pieces(const TraceMonoid& m, const Trace& x);

// True iff x has exactly one maximal piece. InputError on the empty trace.
bool is_pyramidal(const TraceMonoid& m, const Trace& x);

// Membership in V_a: x is pyramidal, has exactly one occurrence of a, and
// that occurrence is the unique maximal piece.
bool in_hitting_set(const TraceMonoid& m, const Trace& x, LetterId a);

// v/a: removes the unique maximal piece a from v in V_a; (v/a).a = v.
Trace remove_top(const TraceMonoid& m, const Trace& v, LetterId a);

// All distinct traces of length <= n, grouped by increasing length.
// `budget` caps the number of letter pushes performed.
std::vector<Trace> enumerate_traces(const TraceMonoid& m, std::size_t n,
                                    std::size_t budget = 10'000'000);

// Trace counts per length 0..n, computed by enumeration.
std::vector<std::size_t> trace_counts(const TraceMonoid& m, std::size_t n,
                                      std::size_t budget = 10'000'000);

// All cliques of m including the empty one, in ascending mask order.
std::vector<CliqueMask> enumerate_cliques(const TraceMonoid& m,
                                          std::size_t budget = 10'000'000);

std::string trace_to_string(const TraceMonoid& m, const Trace& t);

} // namespace tracegen

#endif
