#ifndef WSOPT_PARALLEL_HPP
#define WSOPT_PARALLEL_HPP

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace wsopt {

    // Static block-partitioned parallel loop. Because work items write only to
    // their own index and all randomness is counter-based, the result is
    // independent of the thread count. nthreads <= 1 runs inline.
    template <typename F>
    void parallel_for(int begin, int end, int nthreads, F&& fn)
    {
        const int count = end - begin;
        if (count <= 0)
            return;
        if (nthreads <= 1 || count == 1) {
            for (int i = begin; i < end; ++i)
                fn(i);
            return;
        }
        nthreads = std::min(nthreads, count);
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(nthreads));
        std::exception_ptr first_error = nullptr;
        std::mutex error_mutex;
        const int chunk = (count + nthreads - 1) / nthreads;
        for (int t = 0; t < nthreads; ++t) {
            const int lo = begin + t * chunk;
            const int hi = std::min(end, lo + chunk);
            if (lo >= hi)
                break;
            pool.emplace_back([&, lo, hi]() {
                try {
                    for (int i = lo; i < hi; ++i)
                        fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error)
                        first_error = std::current_exception();
                }
            });
        }
        for (auto& th : pool)
            th.join();
        if (first_error)
            std::rethrow_exception(first_error);
    }

    inline int hardware_threads()
    {
        unsigned n = std::thread::hardware_concurrency();
        return n == 0 ? 1 : static_cast<int>(n);
    }

    // Resolve a user-facing --threads value: 0 means "auto".
    inline int resolve_threads(int requested)
    {
        if (requested <= 0)
            return hardware_threads();
        return requested;
    }

} // namespace wsopt

#endif
