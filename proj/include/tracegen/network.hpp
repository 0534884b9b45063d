#ifndef TRACEGEN_NETWORK_HPP
#define TRACEGEN_NETWORK_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "tracegen/monoid.hpp"

namespace tracegen {

// A network of alphabets S_1..S_N sharing letters. Components are the
// resources; the resource set of a letter is the set of components it
// belongs to. Letter ids are dense over the union alphabet.
class AlphabetNetwork {
public:
    static constexpr std::size_t kMaxComponents = 64;

    // Letter order is first appearance across the alphabets.
    static AlphabetNetwork make(const std::vector<std::vector<std::string>>& alphabets);
    // Explicit letter order; alphabets may only use declared letters.
    static AlphabetNetwork make_with_letters(std::vector<std::string> letters,
                                             const std::vector<std::vector<std::string>>& alphabets);

    // Path network on n letters: N = n-1 alphabets {a_i, a_{i+1}}.
    static AlphabetNetwork path(std::size_t n_letters);
    // Ring network on n letters: n alphabets {a_i, a_{i+1 mod n}}.
    static AlphabetNetwork ring(std::size_t n_letters);

    std::size_t component_count() const { return alphabets_.size(); }
    std::size_t letter_count() const { return names_.size(); }
    const std::vector<std::string>& letter_names() const { return names_; }
    const std::string& letter_name(LetterId a) const { return names_[a]; }
    LetterId letter(const std::string& name) const;

    const std::vector<LetterId>& alphabet(std::size_t i) const { return alphabets_[i]; }
    CliqueMask alphabet_mask(std::size_t i) const { return alphabet_masks_[i]; }
    // Bitmask of components whose alphabet contains `a`.
    std::uint64_t resources(LetterId a) const { return resources_[a]; }
    bool in_alphabet(std::size_t i, LetterId a) const {
        return (alphabet_masks_[i] & letter_bit(a)) != 0;
    }

    // Synchronization monoid: letters independent iff their resource sets
    // are disjoint.
    TraceMonoid build_monoid() const;

    // The network with `a` removed from every alphabet; alphabets left empty
    // are dropped. Letter ids are re-densified over the remaining names.
    AlphabetNetwork reduce(LetterId a) const;

private:
    std::vector<std::string> names_;
    std::vector<std::vector<LetterId>> alphabets_;
    std::vector<CliqueMask> alphabet_masks_;
    std::vector<std::uint64_t> resources_;
};

TraceMonoid build_monoid(const AlphabetNetwork& net);

// Structural dichotomy for probability-kind local distributions on an
// irreducible synchronization monoid: the synchronization trace is infinite
// iff distinct alphabets pairwise share at most one letter and the
// dependence graph is acyclic.
bool structurally_infinite(const AlphabetNetwork& net);

} // namespace tracegen

#endif
