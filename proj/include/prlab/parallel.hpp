#pragma once

#include <atomic>
#include <cstdint>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace prlab {

/// Scans f(0), f(1), ... and returns the result with the smallest index for
/// which f produced one, or nullopt. With jobs > 1 the index space is
/// shared between workers; indices above the current best are skipped, so
/// the returned result is the index-minimal one regardless of scheduling.
template <typename R, typename Fn>
std::optional<std::pair<std::size_t, R>> indexed_min_search(std::size_t count, unsigned jobs,
                                                            Fn&& f) {
    if (jobs <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            std::optional<R> r = f(i);
            if (r) return std::make_pair(i, std::move(*r));
        }
        return std::nullopt;
    }

    std::atomic<std::size_t> best{count};
    std::mutex mu;
    std::optional<std::pair<std::size_t, R>> found;

    auto worker = [&](unsigned w) {
        for (std::size_t i = w; i < count; i += jobs) {
            if (i > best.load(std::memory_order_relaxed)) continue;
            std::optional<R> r = f(i);
            if (!r) continue;
            std::lock_guard<std::mutex> lock(mu);
            if (!found || i < found->first) {
                found = std::make_pair(i, std::move(*r));
                best.store(i, std::memory_order_relaxed);
            }
        }
    };

    std::vector<std::thread> threads;
    threads.reserve(jobs);
    for (unsigned w = 0; w < jobs; ++w) threads.emplace_back(worker, w);
    for (auto& t : threads) t.join();
    return found;
}

/// Evaluates f(i) for all i and collects the results in index order.
template <typename R, typename Fn>
std::vector<R> parallel_map(std::size_t count, unsigned jobs, Fn&& f) {
    std::vector<R> out(count);
    if (jobs <= 1) {
        for (std::size_t i = 0; i < count; ++i) out[i] = f(i);
        return out;
    }
    std::vector<std::thread> threads;
    threads.reserve(jobs);
    for (unsigned w = 0; w < jobs; ++w) {
        threads.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += jobs) out[i] = f(i);
        });
    }
    for (auto& t : threads) t.join();
    return out;
}

} // namespace prlab
