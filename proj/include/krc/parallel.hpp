#pragma once

// Ordered fan-out of independent jobs over a small thread pool.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

namespace krc {

template <class T>
struct Outcome {
    std::optional<T> value;
    std::string error;

    bool ok() const { return value.has_value(); }
};

/// 0 means one worker per hardware thread.
inline unsigned resolve_workers(unsigned workers)
{
    if (workers == 0) {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }
    return workers;
}

/// Applies fn to every job. Results keep the input order whatever the
/// completion order; an exception is recorded in its own slot and does not
/// stop the other jobs.
template <class Job, class Fn>
auto parallel_map(const std::vector<Job>& jobs, Fn fn, unsigned workers = 0)
    -> std::vector<Outcome<std::invoke_result_t<Fn&, const Job&>>>
{
    using R = std::invoke_result_t<Fn&, const Job&>;
    std::vector<Outcome<R>> out(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < jobs.size(); k = next++) {
            try {
                out[k].value.emplace(fn(jobs[k]));
            } catch (const std::exception& e) {
                out[k].error = e.what();
            } catch (...) {
                out[k].error = "unknown error";
            }
        }
    };
    const unsigned n = std::min<std::size_t>(resolve_workers(workers), std::max<std::size_t>(jobs.size(), 1));
    if (n <= 1) {
        worker();
        return out;
    }
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < n; ++i) {
        pool.emplace_back(worker);
    }
    pool.clear();
    return out;
}

} // namespace krc
