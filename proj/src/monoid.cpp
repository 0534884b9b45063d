#include "tracegen/monoid.hpp"

#include <algorithm>
#include <unordered_set>

namespace tracegen {

std::vector<LetterId> clique_letters(CliqueMask c) {
    std::vector<LetterId> out;
    while (c != 0) {
        LetterId a = static_cast<LetterId>(std::countr_zero(c));
        out.push_back(a);
        c &= c - 1;
    }
    return out;
}

TraceMonoid TraceMonoid::make(std::vector<std::string> names,
                              const std::vector<std::pair<LetterId, LetterId>>& independence) {
    if (names.empty())
        throw InputError("trace monoid needs at least one letter");
    if (names.size() > kMaxLetters)
        throw InputError("trace monoid supports at most 64 letters");
    std::unordered_set<std::string> seen;
    for (const auto& n : names) {
        if (n.empty())
            throw InputError("empty letter name");
        if (!seen.insert(n).second)
            throw InputError("duplicate letter name: " + n);
    }

    TraceMonoid m;
    m.names_ = std::move(names);
    const std::size_t n = m.names_.size();
    m.universe_ = (n == kMaxLetters) ? ~CliqueMask{0} : (CliqueMask{1} << n) - 1;
    m.indep_.assign(n, 0);
    for (auto [a, b] : independence) {
        if (a >= n || b >= n)
            throw InputError("independence pair references unknown letter id");
        if (a == b)
            throw InputError("independence relation must be irreflexive: " + m.names_[a]);
        m.indep_[a] |= letter_bit(b);
        m.indep_[b] |= letter_bit(a);
    }
    m.dep_.resize(n);
    for (LetterId a = 0; a < n; ++a)
        m.dep_[a] = m.universe_ & ~m.indep_[a];
    return m;
}

static std::vector<std::string> indexed_names(std::size_t n) {
    std::vector<std::string> names;
    names.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        names.push_back("a" + std::to_string(i));
    return names;
}

TraceMonoid TraceMonoid::path(std::size_t n) {
    std::vector<std::pair<LetterId, LetterId>> pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 2; j < n; ++j)
            pairs.emplace_back(static_cast<LetterId>(i), static_cast<LetterId>(j));
    return make(indexed_names(n), pairs);
}

TraceMonoid TraceMonoid::ring(std::size_t n) {
    std::vector<std::pair<LetterId, LetterId>> pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            std::size_t d = std::min(j - i, n - (j - i));
            if (d >= 2)
                pairs.emplace_back(static_cast<LetterId>(i), static_cast<LetterId>(j));
        }
    return make(indexed_names(n), pairs);
}

TraceMonoid TraceMonoid::free_monoid(std::size_t n) {
    return make(indexed_names(n), {});
}

LetterId TraceMonoid::letter(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name)
            return static_cast<LetterId>(i);
    throw InputError("unknown letter: " + name);
}

bool TraceMonoid::has_letter(const std::string& name) const {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
}

CliqueMask TraceMonoid::dep_neighbourhood(CliqueMask c) const {
    CliqueMask out = 0;
    while (c != 0) {
        LetterId a = static_cast<LetterId>(std::countr_zero(c));
        out |= dep_[a];
        c &= c - 1;
    }
    return out;
}

bool TraceMonoid::is_clique(CliqueMask c) const {
    if ((c & ~universe_) != 0)
        return false;
    for (CliqueMask rest = c; rest != 0; rest &= rest - 1) {
        LetterId a = static_cast<LetterId>(std::countr_zero(rest));
        if (((c & ~letter_bit(a)) & ~indep_[a]) != 0)
            return false;
    }
    return true;
}

void TraceMonoid::check_letter(LetterId a) const {
    if (a >= names_.size())
        throw InputError("letter id out of range: " + std::to_string(a));
}

} // namespace tracegen
