#ifndef TRACEGEN_MONOID_HPP
#define TRACEGEN_MONOID_HPP

#include <bit>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tracegen/errors.hpp"

namespace tracegen {

using LetterId = std::uint32_t;

// A clique is a set of pairwise-independent letters, kept as a bitmask over
// letter ids. The empty clique (the unit) is mask 0.
using CliqueMask = std::uint64_t;

inline constexpr CliqueMask letter_bit(LetterId a) {
    return CliqueMask{1} << a;
}

inline int clique_size(CliqueMask c) { return std::popcount(c); }

// Letters of a clique in increasing id order.
std::vector<LetterId> clique_letters(CliqueMask c);

// A trace monoid M(S, I): a finite alphabet with an irreflexive symmetric
// independence relation. The dependence relation D is the complement of I
// within S x S, diagonal included. At most 64 letters.
class TraceMonoid {
public:
    static constexpr std::size_t kMaxLetters = 64;

    // `independence` lists unordered independent pairs; symmetry is implied,
    // reflexive pairs are rejected.
    static TraceMonoid make(std::vector<std::string> names,
                            const std::vector<std::pair<LetterId, LetterId>>& independence);

    // Path model on n letters a_0..a_{n-1}: a_i and a_j independent iff |i-j| > 1.
    static TraceMonoid path(std::size_t n);
    // Ring model on n letters: independent iff circular distance >= 2.
    static TraceMonoid ring(std::size_t n);
    // Free monoid: no independent pairs, traces are words.
    static TraceMonoid free_monoid(std::size_t n);

    std::size_t letter_count() const { return names_.size(); }
    const std::string& name(LetterId a) const { return names_[a]; }
    const std::vector<std::string>& names() const { return names_; }

    // Id of the letter named `name`; InputError if unknown.
    LetterId letter(const std::string& name) const;
    bool has_letter(const std::string& name) const;

    bool independent(LetterId a, LetterId b) const {
        return (indep_[a] & letter_bit(b)) != 0;
    }
    bool dependent(LetterId a, LetterId b) const { return !independent(a, b); }

    // Letters independent of `a` (excludes `a` itself).
    CliqueMask indep_mask(LetterId a) const { return indep_[a]; }
    // Letters dependent on `a` within the alphabet (includes `a`).
    CliqueMask dep_mask(LetterId a) const { return dep_[a]; }
    CliqueMask dep_neighbourhood(CliqueMask c) const;

    CliqueMask universe() const { return universe_; }

    bool is_clique(CliqueMask c) const;
    void check_letter(LetterId a) const;

private:
    std::vector<std::string> names_;
    std::vector<CliqueMask> indep_;
    std::vector<CliqueMask> dep_;
    CliqueMask universe_ = 0;
};

} // namespace tracegen

#endif
