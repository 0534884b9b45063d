#ifndef TRACEGEN_PARALLEL_HPP
#define TRACEGEN_PARALLEL_HPP

#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace tracegen {

// Fixed shard count keeps reductions bit-identical across machines.
inline constexpr std::size_t kShards = 8;

// Splits [0, n) into kShards contiguous ranges processed on worker threads;
// fn(shard, begin, end) must only touch shard-local state. Exceptions are
// rethrown on the caller's thread.
inline void run_sharded(std::size_t n, const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(kShards);
    for (std::size_t s = 0; s < kShards; ++s) {
        std::size_t begin = n * s / kShards;
        std::size_t end = n * (s + 1) / kShards;
        workers.emplace_back([&, s, begin, end] {
            try {
                fn(s, begin, end);
            } catch (...) {
                errors[s] = std::current_exception();
            }
        });
    }
    for (auto& w : workers)
        w.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

} // namespace tracegen

#endif
