#include "coreset/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace coreset {

int thread_budget() {
    int budget = static_cast<int>(std::thread::hardware_concurrency());
    if (budget <= 0) budget = 1;
    if (const char* env = std::getenv("CORESET_THREADS")) {
        char* end = nullptr;
        const long requested = std::strtol(env, &end, 10);
        if (end != env && requested >= 1) {
            budget = std::min<long>(requested, 256);
        }
    }
    return budget;
}

void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn) {
    if (n <= 0) return;
    const int workers = std::min<std::int64_t>(thread_budget(), n);
    if (workers <= 1) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    std::exception_ptr first_error;
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::int64_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!failed.exchange(true)) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failed.load()) std::rethrow_exception(first_error);
}

} // namespace coreset
