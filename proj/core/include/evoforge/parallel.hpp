#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace evoforge {

// Applies fn(index) for every index in [0, count) across up to `workers`
// threads and returns the results in index order, so the output is
// independent of scheduling. The first exception is rethrown after join.
template <typename Fn>
auto parallel_map(std::size_t count, int workers, Fn&& fn)
    -> std::vector<decltype(fn(std::size_t{0}))> {
    using Result = decltype(fn(std::size_t{0}));
    std::vector<Result> results(count);
    if (count == 0) return results;

    if (workers <= 1 || count == 1) {
        for (std::size_t i = 0; i < count; ++i) results[i] = fn(i);
        return results;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&] {
        while (!failed) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                results[i] = fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                failed = true;
                return;
            }
        }
    };

    std::size_t thread_count = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
    std::vector<std::thread> threads;
    threads.reserve(thread_count);
    for (std::size_t t = 0; t < thread_count; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();

    if (error) std::rethrow_exception(error);
    return results;
}

}  // namespace evoforge
