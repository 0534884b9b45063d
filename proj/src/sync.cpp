#include "tracegen/sync.hpp"

namespace tracegen {

namespace {

// Head encoding: a letter id, or one of the two empty-buffer markers.
constexpr int kEmptyWaiting = -1;
constexpr int kEmptyClosed = -2;

void check_vector(const AlphabetNetwork& net, const WordVector& input) {
    if (input.size() != net.component_count())
        throw InputError("word vector must have one component per alphabet");
    for (std::size_t i = 0; i < input.size(); ++i)
        for (LetterId a : input[i].letters)
            if (a >= net.letter_count() || !net.in_alphabet(i, a))
                throw InputError("component " + std::to_string(i + 1) +
                                 " contains a letter outside its alphabet");
}

std::variant<LetterId, SyncTag> min_piece_heads(const AlphabetNetwork& net,
                                                std::span<const int> heads) {
    bool all_closed = true;
    for (int h : heads)
        if (h != kEmptyClosed) {
            all_closed = false;
            break;
        }
    if (all_closed)
        return SyncTag::EndOfInput;

    // A letter at the head of every one of its resources is minimal now.
    for (LetterId a = 0; a < net.letter_count(); ++a) {
        std::uint64_t res = net.resources(a);
        bool minimal = true;
        for (std::size_t i : clique_letters(res))
            if (heads[i] != static_cast<int>(a)) {
                minimal = false;
                break;
            }
        if (minimal)
            return a;
    }

    // A letter whose resources all show it or are still waiting could become
    // minimal with more input.
    for (LetterId a = 0; a < net.letter_count(); ++a) {
        std::uint64_t res = net.resources(a);
        bool possible = true;
        for (std::size_t i : clique_letters(res)) {
            if (heads[i] != static_cast<int>(a) && heads[i] != kEmptyWaiting) {
                possible = false;
                break;
            }
        }
        if (possible)
            return SyncTag::Waiting;
    }
    return SyncTag::Deadlock;
}

} // namespace

std::string to_string(SyncTag tag) {
    switch (tag) {
    case SyncTag::Deadlock: return "DL";
    case SyncTag::Waiting: return "WFI";
    case SyncTag::EndOfInput: return "EOF";
    }
    return "?";
}

std::variant<LetterId, SyncTag> min_piece(const AlphabetNetwork& net, const WordVector& input) {
    check_vector(net, input);
    std::vector<int> heads(input.size());
    for (std::size_t i = 0; i < input.size(); ++i) {
        if (!input[i].letters.empty())
            heads[i] = static_cast<int>(input[i].letters.front());
        else
            heads[i] = input[i].tag == FeedTag::EndOfInput ? kEmptyClosed : kEmptyWaiting;
    }
    return min_piece_heads(net, heads);
}

std::pair<Trace, SyncTag> synchronize(const AlphabetNetwork& net, const WordVector& input) {
    SyncState state(net);
    state.feed(input);
    return {state.trace(), state.tag()};
}

SyncState::SyncState(const AlphabetNetwork& net)
    : net_(&net),
      monoid_(net.build_monoid()),
      buffers_(net.component_count()),
      cursors_(net.component_count(), 0),
      tags_(net.component_count(), FeedTag::Waiting) {}

int SyncState::head(std::size_t i) const {
    if (cursors_[i] < buffers_[i].size())
        return static_cast<int>(buffers_[i][cursors_[i]]);
    return tags_[i] == FeedTag::EndOfInput ? kEmptyClosed : kEmptyWaiting;
}

void SyncState::feed_component(std::size_t i, std::span<const LetterId> letters, FeedTag tag) {
    if (terminal_)
        throw StateError("synchronization already terminated with " + to_string(*terminal_));
    if (i >= buffers_.size())
        throw InputError("component index out of range");
    if (tags_[i] == FeedTag::EndOfInput) {
        if (!letters.empty())
            throw InputError("component " + std::to_string(i + 1) + " already reached end of input");
        if (tag != FeedTag::EndOfInput)
            throw InputError("component " + std::to_string(i + 1) + " cannot reopen after end of input");
        return;
    }
    for (LetterId a : letters) {
        if (a >= net_->letter_count() || !net_->in_alphabet(i, a))
            throw InputError("component " + std::to_string(i + 1) +
                             " fed a letter outside its alphabet");
        buffers_[i].push_back(a);
    }
    tags_[i] = tag;
}

void SyncState::feed(const WordVector& chunk) {
    if (terminal_)
        throw StateError("synchronization already terminated with " + to_string(*terminal_));
    if (chunk.size() != buffers_.size())
        throw InputError("chunk must have one component per alphabet");
    for (std::size_t i = 0; i < chunk.size(); ++i)
        feed_component(i, chunk[i].letters, chunk[i].tag);
    resync();
}

std::variant<LetterId, SyncTag> SyncState::try_step() {
    if (terminal_)
        return *terminal_;
    heads_.resize(buffers_.size());
    for (std::size_t i = 0; i < buffers_.size(); ++i)
        heads_[i] = head(i);
    auto r = min_piece_heads(*net_, heads_);
    if (std::holds_alternative<SyncTag>(r)) {
        SyncTag tag = std::get<SyncTag>(r);
        if (tag != SyncTag::Waiting)
            terminal_ = tag;
        return r;
    }
    LetterId a = std::get<LetterId>(r);
    push_letter(monoid_, x_, a);
    ++x_len_;
    for (std::size_t i : clique_letters(net_->resources(a)))
        ++cursors_[i];
    return r;
}

void SyncState::resync() {
    while (!terminal_ && (!piece_cap_ || x_len_ < *piece_cap_)) {
        auto r = try_step();
        if (std::holds_alternative<SyncTag>(r))
            return;
    }
}

void stream_synchronize(SyncState& state, const WordVector& chunk) {
    state.feed(chunk);
}

std::vector<LetterId> project(const AlphabetNetwork& net, const Trace& x, std::size_t component) {
    if (component >= net.component_count())
        throw InputError("component index out of range");
    std::vector<LetterId> word;
    CliqueMask mask = net.alphabet_mask(component);
    for (CliqueMask c : x.cliques)
        for (LetterId a : clique_letters(c & mask))
            word.push_back(a);
    return word;
}

} // namespace tracegen
