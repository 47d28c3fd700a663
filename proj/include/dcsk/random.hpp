#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>
#include <vector>

namespace dcsk {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer; used to derive child seeds from a parent seed.
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30U)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27U)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31U);
}

/// Seed of the index-th child of `seed`. Sweep points use this so that each
/// emitted row carries a seed that reproduces it on its own.
inline constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept
{
    return mix64(seed ^ mix64(index + 0x632be59bd9b4e019ULL));
}

/// Named substreams so different estimators never share random numbers.
enum class Stream : std::uint64_t {
    Ber = 1,
    Harvest = 2,
    SemiAnalytic = 3,
    DecisionMoments = 4,
};

/// Engine for one batch of one stream. Seeding goes through std::seed_seq,
/// whose output is fully specified by the standard, so substreams are the
/// same on every conforming platform.
inline Engine make_engine(std::uint64_t seed, Stream stream, std::uint64_t batch)
{
    const auto s = static_cast<std::uint64_t>(stream);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32U),
                      static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32U),
                      static_cast<std::uint32_t>(batch), static_cast<std::uint32_t>(batch >> 32U)};
    return Engine(seq);
}

/// Uniform draw on the open interval (0, 1).
inline double uniform_open01(Engine& engine) noexcept
{
    constexpr double scale = 0x1.0p-53;
    return (static_cast<double>(engine() >> 11U) + 0.5) * scale;
}

/// Uniform phase on [0, 2*pi).
inline double uniform_phase(Engine& engine) noexcept
{
    return 2.0 * std::numbers::pi * uniform_open01(engine);
}

/// Equiprobable antipodal bit.
inline int random_bit(Engine& engine) noexcept
{
    return (engine() >> 63U) != 0U ? 1 : -1;
}

inline unsigned resolve_threads(unsigned requested) noexcept
{
    if (requested != 0) {
        return requested;
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

/// Splits `total` work items into fixed-size batches and evaluates
/// fn(batch_index, items_in_batch) for each, possibly on several threads.
/// Results come back indexed by batch, so any fold over them in index order
/// is independent of the thread count and of scheduling.
template <class Accum, class BatchFn>
std::vector<Accum> run_batches(std::uint64_t total, std::uint64_t batch_size, unsigned threads, BatchFn&& fn)
{
    batch_size = std::max<std::uint64_t>(1, batch_size);
    const std::uint64_t n_batches = (total + batch_size - 1) / batch_size;
    std::vector<Accum> results(n_batches);
    const auto count_of = [&](std::uint64_t b) { return std::min(batch_size, total - b * batch_size); };

    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(threads), std::max<std::uint64_t>(1, n_batches)));
    if (workers <= 1) {
        for (std::uint64_t b = 0; b < n_batches; ++b) {
            results[b] = fn(b, count_of(b));
        }
        return results;
    }

    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::uint64_t b = next.fetch_add(1);
            if (b >= n_batches) {
                return;
            }
            try {
                results[b] = fn(b, count_of(b));
            } catch (...) {
                const std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next.store(n_batches);
                return;
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) {
        pool.emplace_back(worker);
    }
    pool.clear();
    if (failure) {
        std::rethrow_exception(failure);
    }
    return results;
}

}  // namespace dcsk
