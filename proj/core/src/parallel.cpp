#include "gchain/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gchain {

unsigned hardware_workers()
{
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& body)
{
    if (count == 0) { return; }
    const unsigned n = std::min<std::size_t>(workers == 0 ? 1 : workers, count);
    if (n <= 1) {
        for (std::size_t i = 0; i < count; ++i) { body(i); }
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr       error;
    std::mutex               error_mutex;

    auto run = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) { return; }
            try {
                body(i);
            }
            catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) { error = std::current_exception(); }
                return;
            }
        }
    };

    std::vector<std::thread> threads;
    threads.reserve(n - 1);
    for (unsigned t = 1; t < n; ++t) { threads.emplace_back(run); }
    run();
    for (auto& t : threads) { t.join(); }
    if (error) { std::rethrow_exception(error); }
}

} // namespace gchain
