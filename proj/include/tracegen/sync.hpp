#ifndef TRACEGEN_SYNC_HPP
#define TRACEGEN_SYNC_HPP

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tracegen/network.hpp"
#include "tracegen/trace.hpp"

namespace tracegen {

// Why a synchronization trace stopped growing.
enum class SyncTag { Deadlock, Waiting, EndOfInput };

std::string to_string(SyncTag tag);

// Per-component terminator: Waiting means more letters may arrive,
// EndOfInput means the component's sequence is over.
enum class FeedTag { Waiting, EndOfInput };

struct TaggedWord {
    std::vector<LetterId> letters;
    FeedTag tag = FeedTag::Waiting;
};

// One tagged word per component of the network.
using WordVector = std::vector<TaggedWord>;

// One round of minimal-piece detection. Returns either a letter that is
// minimal in the synchronization trace (the smallest id when several are),
// or the tag explaining why the synchronization trace of the input is empty:
//   EndOfInput - every component is exhausted and closed;
//   Waiting    - some letter could still become minimal with more input on
//                waiting components;
//   Deadlock   - no letter can ever become minimal.
std::variant<LetterId, SyncTag> min_piece(const AlphabetNetwork& net, const WordVector& input);

// Synchronization trace of a word vector plus the terminal tag.
std::pair<Trace, SyncTag> synchronize(const AlphabetNetwork& net, const WordVector& input);

// Incremental synchronization over a chunked input. The accumulated trace is
// always the synchronization trace of everything consumed so far; the final
// trace and tag do not depend on how the input was split into chunks.
class SyncState {
public:
    explicit SyncState(const AlphabetNetwork& net);

    const AlphabetNetwork& network() const { return *net_; }
    const TraceMonoid& monoid() const { return monoid_; }

    const Trace& trace() const { return x_; }
    std::size_t trace_length() const { return x_len_; }

    // Deadlock or EndOfInput once the trace can no longer grow.
    std::optional<SyncTag> terminal() const { return terminal_; }
    // Tag of the most recent synchronization pass (Waiting while running).
    SyncTag tag() const { return terminal_.value_or(SyncTag::Waiting); }

    FeedTag component_tag(std::size_t i) const { return tags_[i]; }
    // True when the component's buffer is fully consumed.
    bool component_exhausted(std::size_t i) const { return cursors_[i] == buffers_[i].size(); }
    std::size_t consumed(std::size_t i) const { return cursors_[i]; }

    // Appends a chunk and re-synchronizes. Feeding after Deadlock/EndOfInput
    // is a StateError; reopening or extending a closed component is an
    // InputError.
    void feed(const WordVector& chunk);

    // Appends letters to a single component without re-synchronizing.
    void feed_component(std::size_t i, std::span<const LetterId> letters, FeedTag tag);

    // Runs minimal-piece extraction until the trace stalls or `piece_cap`
    // total pieces have been accumulated.
    void resync();
    void set_piece_cap(std::optional<std::size_t> cap) { piece_cap_ = cap; }

    // One extraction step on the current buffers: appends and returns the
    // minimal piece, or returns the stall tag (terminal_ is set for
    // Deadlock/EndOfInput).
    std::variant<LetterId, SyncTag> try_step();

private:
    int head(std::size_t i) const;

    const AlphabetNetwork* net_;
    TraceMonoid monoid_;
    std::vector<std::vector<LetterId>> buffers_;
    std::vector<std::size_t> cursors_;
    std::vector<FeedTag> tags_;
    Trace x_;
    std::size_t x_len_ = 0;
    std::optional<SyncTag> terminal_;
    std::optional<std::size_t> piece_cap_;
    std::vector<int> heads_;
};

// Algorithm interface used by the spec: advance the state with one chunk.
void stream_synchronize(SyncState& state, const WordVector& chunk);

// Projection of a trace onto one component: the subsequence of its letters
// that belong to the component's alphabet (well defined because letters
// sharing a resource are totally ordered).
std::vector<LetterId> project(const AlphabetNetwork& net, const Trace& x, std::size_t component);

} // namespace tracegen

#endif
