#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "stablets/config.hpp"
#include "stablets/errors.hpp"
#include "stablets/stability.hpp"
#include "stablets/summary.hpp"

namespace stablets {

/// Resolves a worker count of 0 to the hardware concurrency (at least 1).
unsigned resolve_workers(unsigned requested) noexcept;

/// Runs fn(r) for r in [0, count) on a pool of workers pulling indices from a
/// shared counter. Results are stored by index, so the output does not depend on
/// scheduling. If any call throws, remaining work is abandoned and a
/// ReplicationFailure naming the lowest failing index is thrown.
template <class Fn>
auto parallel_replications(std::uint64_t count, unsigned workers, Fn&& fn)
    -> std::vector<decltype(fn(std::uint64_t{}))> {
    using Result = decltype(fn(std::uint64_t{}));
    std::vector<std::optional<Result>> slots(count);
    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    std::optional<std::uint64_t> failed_index;
    std::string failure_message;

    auto work = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            const auto r = next.fetch_add(1, std::memory_order_relaxed);
            if (r >= count) break;
            try {
                slots[r].emplace(fn(r));
            } catch (const std::exception& e) {
                std::lock_guard lock(error_mutex);
                if (!failed_index || r < *failed_index) {
                    failed_index = r;
                    failure_message = e.what();
                }
                failed.store(true, std::memory_order_relaxed);
            }
        }
    };

    const auto pool_size = static_cast<unsigned>(std::min<std::uint64_t>(resolve_workers(workers), std::max<std::uint64_t>(count, 1)));
    if (pool_size <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(pool_size);
        for (unsigned w = 0; w < pool_size; ++w) pool.emplace_back(work);
    }
    if (failed_index) throw ReplicationFailure(*failed_index, failure_message);

    std::vector<Result> out;
    out.reserve(count);
    for (auto& slot : slots) out.push_back(std::move(*slot));
    return out;
}

/// R replications of the configured policy; replication r uses the streams
/// keyed by (master_seed, r). Output is identical for any worker count.
std::vector<ReplicationSummary> run_experiment(const ExperimentConfig& config);

/// Trajectories for the configured experiment (memory grows with R * T; meant for small batches).
std::vector<Trajectory> run_trajectories(const ExperimentConfig& config, const EpisodeOptions& options = {});

}  // namespace stablets
