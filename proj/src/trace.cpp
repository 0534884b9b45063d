#include "tracegen/trace.hpp"

#include <algorithm>
#include <unordered_set>

namespace tracegen {

std::size_t Trace::length() const {
    std::size_t n = 0;
    for (CliqueMask c : cliques)
        n += static_cast<std::size_t>(clique_size(c));
    return n;
}

std::size_t Trace::count(LetterId a) const {
    std::size_t n = 0;
    for (CliqueMask c : cliques)
        if (c & letter_bit(a))
            ++n;
    return n;
}

std::size_t TraceHash::operator()(const Trace& t) const {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (CliqueMask c : t.cliques) {
        h ^= static_cast<std::size_t>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

void push_letter(const TraceMonoid& m, Trace& t, LetterId a) {
    m.check_letter(a);
    const CliqueMask dep = m.dep_mask(a);
    std::size_t level = t.cliques.size();
    while (level > 0 && (t.cliques[level - 1] & dep) == 0)
        --level;
    // The letter rests at index `level`: just above its highest dependency.
    if (level == t.cliques.size())
        t.cliques.push_back(letter_bit(a));
    else
        t.cliques[level] |= letter_bit(a);
}

Trace normalize(const TraceMonoid& m, const std::vector<LetterId>& word) {
    Trace t;
    for (LetterId a : word)
        push_letter(m, t, a);
    return t;
}

std::vector<LetterId> linearize(const Trace& t) {
    std::vector<LetterId> word;
    for (CliqueMask c : t.cliques)
        for (LetterId a : clique_letters(c))
            word.push_back(a);
    return word;
}

void validate_trace(const TraceMonoid& m, const Trace& t) {
    for (std::size_t i = 0; i < t.cliques.size(); ++i) {
        CliqueMask c = t.cliques[i];
        if (c == 0)
            throw InputError("normal form has an empty clique at level " + std::to_string(i + 1));
        if ((c & ~m.universe()) != 0)
            throw InputError("clique uses letters outside the monoid");
        if (!m.is_clique(c))
            throw InputError("letters at level " + std::to_string(i + 1) + " are not pairwise independent");
        if (i > 0) {
            // Every letter must depend on something one level below.
            for (LetterId a : clique_letters(c))
                if ((m.dep_mask(a) & t.cliques[i - 1]) == 0)
                    throw InputError("normal-form condition violated at level " + std::to_string(i + 1) +
                                     " for letter " + m.name(a));
        }
    }
}

Trace concat(const TraceMonoid& m, const Trace& x, const Trace& y) {
    Trace out = x;
    concat_into(m, out, y);
    return out;
}

void concat_into(const TraceMonoid& m, Trace& x, const Trace& y) {
    for (CliqueMask c : y.cliques)
        for (LetterId a : clique_letters(c))
            push_letter(m, x, a);
}

// Removes the occurrence of `a` in the bottom clique and renormalizes the
// remaining pieces; letters above the gap may fall down.
static Trace remove_minimal(const TraceMonoid& m, const Trace& y, LetterId a) {
    Trace out;
    for (std::size_t i = 0; i < y.cliques.size(); ++i) {
        CliqueMask c = y.cliques[i];
        if (i == 0)
            c &= ~letter_bit(a);
        for (LetterId b : clique_letters(c))
            push_letter(m, out, b);
    }
    return out;
}

std::optional<Trace> left_divide(const TraceMonoid& m, const Trace& x, const Trace& y) {
    Trace rest = y;
    for (LetterId a : linearize(x)) {
        if (rest.empty() || (rest.cliques.front() & letter_bit(a)) == 0)
            return std::nullopt; // a is not minimal in the remainder
        rest = remove_minimal(m, rest, a);
    }
    return rest;
}

std::vector<Occurrence> maximal_pieces(const TraceMonoid& m, const Trace& x) {
    // Scan from the top; an occurrence is maximal iff no letter above it
    // depends on it.
    std::vector<Occurrence> out;
    CliqueMask blocked = 0;
    for (std::size_t i = x.cliques.size(); i-- > 0;) {
        CliqueMask fresh = x.cliques[i] & ~blocked;
        for (LetterId a : clique_letters(fresh))
            out.push_back({i, a});
        blocked |= m.dep_neighbourhood(x.cliques[i]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool is_pyramidal(const TraceMonoid& m, const Trace& x) {
    if (x.empty())
        throw InputError("pyramidality is undefined for the empty trace");
    return maximal_pieces(m, x).size() == 1;
}

bool in_hitting_set(const TraceMonoid& m, const Trace& x, LetterId a) {
    m.check_letter(a);
    if (x.empty())
        return false;
    // The unique maximal piece of a pyramidal trace is alone at the top.
    if (x.cliques.back() != letter_bit(a))
        return false;
    if (x.count(a) != 1)
        return false;
    return maximal_pieces(m, x).size() == 1;
}

Trace remove_top(const TraceMonoid& m, const Trace& v, LetterId a) {
    if (!in_hitting_set(m, v, a))
        throw InputError("remove_top requires a trace in the hitting set of " +
                         (a < m.letter_count() ? m.name(a) : std::to_string(a)));
    Trace out = v;
    out.cliques.pop_back();
    return out;
}

std::vector<Trace> enumerate_traces(const TraceMonoid& m, std::size_t n, std::size_t budget) {
    std::vector<Trace> all;
    std::vector<Trace> level{Trace{}};
    all.push_back(Trace{});
    std::size_t work = 0;
    for (std::size_t len = 0; len < n; ++len) {
        std::unordered_set<Trace, TraceHash> next;
        for (const Trace& t : level) {
            for (LetterId a = 0; a < m.letter_count(); ++a) {
                work += t.height() + 1;
                if (work > budget)
                    throw ResourceError("trace enumeration exceeded its work budget");
                Trace u = t;
                push_letter(m, u, a);
                next.insert(std::move(u));
            }
        }
        level.assign(next.begin(), next.end());
        std::sort(level.begin(), level.end());
        all.insert(all.end(), level.begin(), level.end());
    }
    return all;
}

std::vector<std::size_t> trace_counts(const TraceMonoid& m, std::size_t n, std::size_t budget) {
    std::vector<std::size_t> counts(n + 1, 0);
    for (const Trace& t : enumerate_traces(m, n, budget))
        ++counts[t.length()];
    return counts;
}

std::vector<CliqueMask> enumerate_cliques(const TraceMonoid& m, std::size_t budget) {
    std::vector<CliqueMask> out{0};
    std::size_t work = 0;
    // DFS extending each clique by larger compatible letters.
    std::vector<std::pair<CliqueMask, CliqueMask>> stack; // (clique, candidates)
    CliqueMask all = m.universe();
    stack.emplace_back(0, all);
    while (!stack.empty()) {
        auto [clique, candidates] = stack.back();
        stack.pop_back();
        while (candidates != 0) {
            LetterId a = static_cast<LetterId>(std::countr_zero(candidates));
            candidates &= candidates - 1;
            if (++work > budget)
                throw ResourceError("clique enumeration exceeded its work budget");
            CliqueMask extended = clique | letter_bit(a);
            out.push_back(extended);
            // Only letters above a that are independent of everything so far.
            CliqueMask next = candidates & m.indep_mask(a);
            if (next != 0)
                stack.emplace_back(extended, next);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string trace_to_string(const TraceMonoid& m, const Trace& t) {
    std::string s;
    for (std::size_t i = 0; i < t.cliques.size(); ++i) {
        if (i > 0)
            s += " | ";
        bool first = true;
        for (LetterId a : clique_letters(t.cliques[i])) {
            if (!first)
                s += ' ';
            s += m.name(a);
            first = false;
        }
    }
    return s.empty() ? "e" : s;
}

} // namespace tracegen
