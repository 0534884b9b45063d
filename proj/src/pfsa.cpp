#include "tracegen/pfsa.hpp"

#include <string>

namespace tracegen {

PfsaConfig::PfsaConfig(AlphabetNetwork network, LetterId letter,
                       std::vector<LocalDistribution> reduced_dists,
                       std::size_t rejection_budget, std::size_t psa_budget)
    : network_(std::move(network)),
      monoid_(network_.build_monoid()),
      letter_(letter),
      reduced_(network_.reduce(letter)),
      dists_(std::move(reduced_dists)),
      rejection_budget_(rejection_budget),
      psa_budget_(psa_budget) {
    monoid_.check_letter(letter_);
    if (!is_irreducible(monoid_))
        throw InputError("the pfsa needs an irreducible synchronization monoid");
    if (classify_psa(reduced_, dists_) != PsaClass::Finite)
        throw InputError("the reduced sampler must terminate almost surely "
                         "(its valuation must be sub-Moebius)");
    if (rejection_budget_ == 0 || psa_budget_ == 0)
        throw InputError("pfsa budgets must be positive");
    reduced_to_full_.reserve(reduced_.letter_count());
    for (LetterId a = 0; a < reduced_.letter_count(); ++a)
        reduced_to_full_.push_back(monoid_.letter(reduced_.letter_name(a)));
}

PyramidSample sample_pyramidal(const PfsaConfig& config, RandomStream& rng) {
    const TraceMonoid& m = config.monoid();
    const auto& map = config.reduced_to_full();
    for (std::size_t attempt = 0; attempt < config.rejection_budget(); ++attempt) {
        // Small pull chunks: terminated runs are short, and chunk size is
        // invisible in the output.
        PsaOutcome out = psa_run(config.reduced_network(), config.reduced_dists(), rng.split(),
                                 config.psa_budget(), 16);
        if (!out.terminated())
            throw ResourceError("reduced sampler exhausted its budget; "
                                "the configuration does not terminate");
        Trace v;
        for (LetterId a : linearize(out.trace))
            push_letter(m, v, map[a]);
        push_letter(m, v, config.letter());
        if (in_hitting_set(m, v, config.letter()))
            return {std::move(v), attempt};
    }
    throw ResourceError("pyramidal sampling exceeded the rejection budget of " +
                        std::to_string(config.rejection_budget()) + " attempts");
}

WalkState pfsa_generate(const PfsaConfig& config, RandomStream rng, std::size_t target_length) {
    WalkState walk;
    std::size_t len = 0;
    while (len < target_length) {
        PyramidSample inc = sample_pyramidal(config, rng);
        len += inc.trace.length();
        concat_into(config.monoid(), walk.x, inc.trace);
        walk.increments += 1;
        walk.rejections += inc.rejections;
    }
    return walk;
}

std::optional<Trace> first_hitting(const TraceMonoid& m, const Trace& prefix, LetterId a) {
    m.check_letter(a);
    // Lowest occurrence of a; occurrences of a letter are totally ordered,
    // so the lowest level is the first one.
    std::size_t hit = prefix.cliques.size();
    for (std::size_t i = 0; i < prefix.cliques.size(); ++i)
        if (prefix.cliques[i] & letter_bit(a)) {
            hit = i;
            break;
        }
    if (hit == prefix.cliques.size())
        return std::nullopt;

    // Downward closure of the occurrence, collected top-down: a piece below
    // belongs iff it is dependent on some piece already in the closure at a
    // strictly higher level.
    std::vector<CliqueMask> closure(hit + 1, 0);
    closure[hit] = letter_bit(a);
    CliqueMask reach = m.dep_mask(a);
    for (std::size_t i = hit; i-- > 0;) {
        closure[i] = prefix.cliques[i] & reach;
        reach |= m.dep_neighbourhood(closure[i]);
    }
    // Re-normalize: the closure is an order ideal, so listing it level by
    // level is a linearization of the sub-trace.
    Trace v;
    for (CliqueMask c : closure)
        for (LetterId b : clique_letters(c))
            push_letter(m, v, b);
    return v;
}

Trace naive_walk(const AlphabetNetwork& net, const std::vector<LocalDistribution>& dists,
                 RandomStream rng, std::size_t target_length) {
    if (classify_psa(net, dists) != PsaClass::Finite)
        throw InputError("the naive walk needs a configuration that terminates almost surely");
    TraceMonoid m = net.build_monoid();
    Trace x;
    std::size_t len = 0;
    while (len < target_length) {
        PsaOutcome out = psa_run(net, dists, rng.split(), 1'000'000, 16);
        if (!out.terminated())
            throw ResourceError("sampler exhausted its budget inside the naive walk");
        concat_into(m, x, out.trace);
        len += out.trace.length();
    }
    return x;
}

} // namespace tracegen
