#ifndef TRACEGEN_RANDOM_HPP
#define TRACEGEN_RANDOM_HPP

#include <cstdint>

namespace tracegen {

// splitmix64 finalizer: xor-shift, multiply, twice over.
inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

// Deterministic pseudo-random source (splitmix64): cheap to seed, which
// matters because every component of every run owns its own stream. Streams
// for distinct components of a network are derived from the master seed so
// that they are mutually independent and reproducible:
// seed_i = mix64(master ^ (i+1) * golden).
class RandomStream {
public:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

    explicit RandomStream(std::uint64_t seed) : seed_(seed), state_(seed) {}

    std::uint64_t seed() const { return seed_; }

    // Independent stream for component `index`, derived from the master seed
    // (not from the stream state, so derivation commutes with draws).
    RandomStream component_stream(std::size_t index) const {
        return RandomStream(mix64(seed_ ^ (static_cast<std::uint64_t>(index) + 1) * kGolden));
    }

    // Stateful child stream; successive splits yield distinct seeds.
    RandomStream split() { return RandomStream(mix64(next_u64())); }

    std::uint64_t next_u64() {
        state_ += kGolden;
        return mix64(state_);
    }

    // Uniform double in [0, 1), 53 random bits.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t seed_;
    std::uint64_t state_;
};

} // namespace tracegen

#endif
