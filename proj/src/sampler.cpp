#include "tracegen/sampler.hpp"

#include <algorithm>
#include <cmath>

namespace tracegen {

namespace {

constexpr double kSumTolerance = 1e-12;

void check_dists(const AlphabetNetwork& net, const std::vector<LocalDistribution>& dists) {
    if (dists.size() != net.component_count())
        throw InputError("need exactly one local distribution per alphabet");
    for (std::size_t i = 0; i < dists.size(); ++i)
        if (dists[i].support_mask() != net.alphabet_mask(i))
            throw InputError("distribution " + std::to_string(i + 1) +
                             " must be supported exactly on its alphabet");
}

} // namespace

LocalDistribution LocalDistribution::make(std::vector<std::pair<LetterId, double>> weights) {
    if (weights.empty())
        throw InputError("local distribution needs at least one letter");
    std::sort(weights.begin(), weights.end());
    LocalDistribution d;
    for (auto [a, w] : weights) {
        if (w <= 0.0)
            throw InputError("local distribution weights must be strictly positive");
        if (d.support_ & letter_bit(a))
            throw InputError("local distribution repeats a letter");
        d.support_ |= letter_bit(a);
        d.sum_ += w;
    }
    if (d.sum_ > 1.0 + kSumTolerance)
        throw InputError("local distribution weights sum to more than 1");
    d.kind_ = std::abs(d.sum_ - 1.0) <= kSumTolerance ? DistKind::Probability
                                                      : DistKind::SubProbability;
    d.weights_ = std::move(weights);
    return d;
}

LocalDistribution LocalDistribution::from_names(const AlphabetNetwork& net,
                                                const std::map<std::string, double>& weights) {
    std::vector<std::pair<LetterId, double>> w;
    for (const auto& [name, value] : weights)
        w.emplace_back(net.letter(name), value);
    return make(std::move(w));
}

double LocalDistribution::weight(LetterId a) const {
    for (auto [b, w] : weights_)
        if (b == a)
            return w;
    throw InputError("letter not in the local distribution's support");
}

bool LocalDistribution::supports(LetterId a) const {
    return a < 64 && (support_ & letter_bit(a)) != 0;
}

std::optional<LetterId> LocalDistribution::sample(RandomStream& rng) const {
    double u = rng.next_unit();
    double acc = 0.0;
    for (auto [a, w] : weights_) {
        acc += w;
        if (u < acc)
            return a;
    }
    if (kind_ == DistKind::Probability)
        return weights_.back().first; // u hit the rounding sliver at the top
    return std::nullopt;
}

std::vector<LetterId> finite_bernoulli_word(const LocalDistribution& dist, RandomStream& rng,
                                            std::size_t max_length) {
    if (dist.kind() != DistKind::SubProbability)
        throw InputError("finite Bernoulli words need a sub-probability distribution");
    std::vector<LetterId> word;
    for (;;) {
        auto a = dist.sample(rng);
        if (!a)
            return word;
        if (word.size() >= max_length)
            throw ResourceError("finite Bernoulli word exceeded the length budget");
        word.push_back(*a);
    }
}

namespace {

// Letter supply for one component: an endless stream for probability-kind
// distributions, a stopped one for sub-probability kind.
class ComponentStream {
public:
    ComponentStream(const LocalDistribution& dist, RandomStream rng)
        : dist_(&dist), rng_(std::move(rng)) {}

    bool ended() const { return ended_; }

    std::pair<std::vector<LetterId>, FeedTag> next_chunk(std::size_t n) {
        std::vector<LetterId> letters;
        if (ended_)
            return {letters, FeedTag::EndOfInput};
        letters.reserve(n);
        while (letters.size() < n) {
            auto a = dist_->sample(rng_);
            if (!a) {
                ended_ = true;
                return {letters, FeedTag::EndOfInput};
            }
            letters.push_back(*a);
        }
        return {letters, FeedTag::Waiting};
    }

private:
    const LocalDistribution* dist_;
    RandomStream rng_;
    bool ended_ = false;
};

} // namespace

PsaOutcome psa_run(const AlphabetNetwork& net, const std::vector<LocalDistribution>& dists,
                   const RandomStream& rng, std::size_t budget, std::size_t chunk_size) {
    check_dists(net, dists);
    if (budget == 0)
        throw InputError("psa budget must be positive");
    if (chunk_size == 0)
        throw InputError("psa chunk size must be positive");

    std::vector<ComponentStream> streams;
    streams.reserve(net.component_count());
    for (std::size_t i = 0; i < net.component_count(); ++i)
        streams.emplace_back(dists[i], rng.component_stream(i));

    SyncState state(net);
    for (;;) {
        if (state.terminal()) {
            PsaOutcome out;
            out.trace = state.trace();
            out.status = PsaOutcome::Status::Terminated;
            out.tag = *state.terminal();
            return out;
        }
        if (state.trace_length() >= budget) {
            PsaOutcome out;
            out.trace = state.trace();
            out.status = PsaOutcome::Status::BudgetExhausted;
            out.tag = SyncTag::Waiting;
            return out;
        }
        // Reveal every head before deciding, so each extraction step sees
        // the true first letter of every open component. Pull granularity
        // then cannot influence the output.
        for (std::size_t i = 0; i < net.component_count(); ++i) {
            if (state.component_tag(i) == FeedTag::EndOfInput || !state.component_exhausted(i))
                continue;
            auto [letters, tag] = streams[i].next_chunk(chunk_size);
            state.feed_component(i, letters, tag);
        }
        auto step = state.try_step();
        if (std::holds_alternative<SyncTag>(step) && std::get<SyncTag>(step) == SyncTag::Waiting)
            throw InternalError("psa stalled with every component head revealed");
    }
}

Valuation psa_valuation(const AlphabetNetwork& net, const std::vector<LocalDistribution>& dists) {
    check_dists(net, dists);
    TraceMonoid m = net.build_monoid();
    std::vector<double> weights(net.letter_count(), 1.0);
    for (LetterId a = 0; a < net.letter_count(); ++a)
        for (std::size_t i : clique_letters(net.resources(a)))
            weights[a] *= dists[i].weight(a);
    return Valuation(m, std::move(weights));
}

PsaClass classify_psa(const AlphabetNetwork& net, const std::vector<LocalDistribution>& dists) {
    TraceMonoid m = net.build_monoid();
    Valuation f = psa_valuation(net, dists);
    Classification cls = classify_valuation(m, f);
    if (cls.kind == ValuationClass::Neither)
        throw InternalError("psa valuation classified as neither Moebius nor sub-Moebius: " +
                            cls.diagnostic);
    PsaClass result = cls.kind == ValuationClass::Moebius ? PsaClass::Infinite : PsaClass::Finite;

    bool all_probability = true;
    std::size_t max_alphabet = 0;
    for (const auto& d : dists) {
        all_probability = all_probability && d.kind() == DistKind::Probability;
        max_alphabet = std::max(max_alphabet, d.weights().size());
    }
    // The structural criterion's cycle argument needs each dependence edge
    // to come from its own alphabet, which holds when alphabets are pairs.
    if (all_probability && max_alphabet <= 2 && is_irreducible(m)) {
        PsaClass structural = structurally_infinite(net) ? PsaClass::Infinite : PsaClass::Finite;
        if (structural != result)
            throw InternalError("structural and valuation-based psa classifications disagree");
    }
    return result;
}

double expected_length_uniform(const TraceMonoid& m, double p) {
    Polynomial mu = moebius_polynomial(m);
    double p0 = smallest_root(mu);
    if (p <= 0.0 || p >= p0)
        throw InputError("expected length needs 0 < p < p0 = " + std::to_string(p0));
    return -p * mu.derivative()(p) / mu(p);
}

} // namespace tracegen
