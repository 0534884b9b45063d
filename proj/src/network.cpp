#include "tracegen/network.hpp"

#include <algorithm>
#include <unordered_map>

namespace tracegen {

AlphabetNetwork AlphabetNetwork::make(const std::vector<std::vector<std::string>>& alphabets) {
    std::vector<std::string> letters;
    for (const auto& alphabet : alphabets)
        for (const auto& name : alphabet)
            if (std::find(letters.begin(), letters.end(), name) == letters.end())
                letters.push_back(name);
    return make_with_letters(std::move(letters), alphabets);
}

AlphabetNetwork AlphabetNetwork::make_with_letters(
    std::vector<std::string> letters, const std::vector<std::vector<std::string>>& alphabets) {
    if (alphabets.empty())
        throw InputError("a network needs at least one alphabet");
    if (alphabets.size() > kMaxComponents)
        throw InputError("a network supports at most 64 alphabets");
    if (letters.empty())
        throw InputError("network has an empty alphabet union");
    if (letters.size() > TraceMonoid::kMaxLetters)
        throw InputError("a network supports at most 64 letters");

    std::unordered_map<std::string, LetterId> index;
    for (std::size_t i = 0; i < letters.size(); ++i) {
        if (!index.emplace(letters[i], static_cast<LetterId>(i)).second)
            throw InputError("duplicate letter name: " + letters[i]);
    }

    AlphabetNetwork net;
    net.names_ = std::move(letters);
    net.resources_.assign(net.names_.size(), 0);
    for (std::size_t i = 0; i < alphabets.size(); ++i) {
        std::vector<LetterId> ids;
        CliqueMask mask = 0;
        for (const auto& name : alphabets[i]) {
            auto it = index.find(name);
            if (it == index.end())
                throw InputError("alphabet " + std::to_string(i + 1) + " uses undeclared letter " + name);
            if (mask & letter_bit(it->second))
                throw InputError("alphabet " + std::to_string(i + 1) + " repeats letter " + name);
            ids.push_back(it->second);
            mask |= letter_bit(it->second);
            net.resources_[it->second] |= std::uint64_t{1} << i;
        }
        std::sort(ids.begin(), ids.end());
        net.alphabets_.push_back(std::move(ids));
        net.alphabet_masks_.push_back(mask);
    }
    for (LetterId a = 0; a < net.names_.size(); ++a)
        if (net.resources_[a] == 0)
            throw InputError("letter " + net.names_[a] + " appears in no alphabet");
    return net;
}

AlphabetNetwork AlphabetNetwork::path(std::size_t n_letters) {
    if (n_letters < 2)
        throw InputError("a path network needs at least two letters");
    std::vector<std::vector<std::string>> alphabets;
    for (std::size_t i = 0; i + 1 < n_letters; ++i)
        alphabets.push_back({"a" + std::to_string(i), "a" + std::to_string(i + 1)});
    return make(alphabets);
}

AlphabetNetwork AlphabetNetwork::ring(std::size_t n_letters) {
    if (n_letters < 3)
        throw InputError("a ring network needs at least three letters");
    std::vector<std::vector<std::string>> alphabets;
    for (std::size_t i = 0; i < n_letters; ++i)
        alphabets.push_back({"a" + std::to_string(i), "a" + std::to_string((i + 1) % n_letters)});
    return make(alphabets);
}

LetterId AlphabetNetwork::letter(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name)
            return static_cast<LetterId>(i);
    throw InputError("unknown letter: " + name);
}

TraceMonoid AlphabetNetwork::build_monoid() const {
    std::vector<std::pair<LetterId, LetterId>> independence;
    for (LetterId a = 0; a < names_.size(); ++a)
        for (LetterId b = a + 1; b < names_.size(); ++b)
            if ((resources_[a] & resources_[b]) == 0)
                independence.emplace_back(a, b);
    return TraceMonoid::make(names_, independence);
}

AlphabetNetwork AlphabetNetwork::reduce(LetterId a) const {
    if (a >= names_.size())
        throw InputError("letter id out of range");
    std::vector<std::vector<std::string>> alphabets;
    for (const auto& alphabet : alphabets_) {
        std::vector<std::string> kept;
        for (LetterId b : alphabet)
            if (b != a)
                kept.push_back(names_[b]);
        if (!kept.empty())
            alphabets.push_back(std::move(kept));
    }
    if (alphabets.empty())
        throw InputError("removing " + names_[a] + " empties the network");
    return make(alphabets);
}

TraceMonoid build_monoid(const AlphabetNetwork& net) {
    return net.build_monoid();
}

bool structurally_infinite(const AlphabetNetwork& net) {
    // (a) distinct alphabets share at most one letter
    for (std::size_t i = 0; i < net.component_count(); ++i)
        for (std::size_t j = i + 1; j < net.component_count(); ++j)
            if (clique_size(net.alphabet_mask(i) & net.alphabet_mask(j)) > 1)
                return false;
    // (b) the dependence graph has no cycle: with V vertices and E edges a
    // connected component forest has E = V - #components
    TraceMonoid m = net.build_monoid();
    const std::size_t n = m.letter_count();
    std::size_t edges = 0;
    for (LetterId a = 0; a < n; ++a)
        edges += static_cast<std::size_t>(clique_size(m.dep_mask(a) & ~letter_bit(a)));
    edges /= 2;

    std::size_t components = 0;
    CliqueMask seen = 0;
    for (LetterId root = 0; root < n; ++root) {
        if (seen & letter_bit(root))
            continue;
        ++components;
        std::vector<LetterId> stack{root};
        seen |= letter_bit(root);
        while (!stack.empty()) {
            LetterId x = stack.back();
            stack.pop_back();
            CliqueMask fresh = m.dep_mask(x) & ~seen;
            seen |= fresh;
            for (LetterId y : clique_letters(fresh))
                stack.push_back(y);
        }
    }
    return edges == n - components;
}

} // namespace tracegen
