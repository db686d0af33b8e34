#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

#include "rng.hpp"

namespace cmin
{
/*!
 * Evaluate fn(i, rng_i) for i in [0, count) where rng_i is
 * RngStream(seed, stream_base + i). Replicas are striped across `workers`
 * threads; since each replica owns its stream and writes its own slot, the
 * result does not depend on the worker count.
 */
template<class T, class Fn>
std::vector<T> parallel_replicas(long count, int workers, std::uint64_t seed, std::uint64_t stream_base, Fn&& fn)
{
    std::vector<T> out(static_cast<std::size_t>(std::max(count, 0L)));
    const int nthreads = std::max(1, std::min<int>(workers, static_cast<int>(std::max(count, 1L))));
    auto run = [&](int tid, std::exception_ptr& err) {
        try
        {
            for (long i = tid; i < count; i += nthreads)
            {
                RngStream rng(seed, stream_base + static_cast<std::uint64_t>(i));
                out[static_cast<std::size_t>(i)] = fn(i, rng);
            }
        }
        catch (...)
        {
            err = std::current_exception();
        }
    };
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(nthreads));
    if (nthreads == 1)
    {
        run(0, errors[0]);
    }
    else
    {
        std::vector<std::jthread> pool;
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back(run, t, std::ref(errors[static_cast<std::size_t>(t)]));
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return out;
}
}  // namespace cmin
