// SPDX-License-Identifier: Apache-2.0
// beamsema: environment-semantics aided beam prediction testbed

#ifndef BEAMSEMA_PARALLEL_HPP
#define BEAMSEMA_PARALLEL_HPP

#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace beamsema {

// Runs fn(i) for i in [0, n) on up to `threads` workers. Work items must be
// independent; the first exception is rethrown on the calling thread.
template <class Fn>
void parallel_for(long n, int threads, Fn&& fn) {
    if (n <= 0) return;
    if (threads <= 1 || n == 1) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    const int workers = static_cast<int>(std::min<long>(threads, n));
    std::vector<std::thread> pool;
    std::mutex mu;
    std::exception_ptr first_error;
    long next = 0;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                long i;
                {
                    std::lock_guard<std::mutex> lock(mu);
                    if (first_error || next >= n) return;
                    i = next++;
                }
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(mu);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace beamsema

#endif
