#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "distributions.hpp"
#include "errors.hpp"
#include "rng.hpp"

namespace cmin
{
//! Finite walk: increments X_1..X_n and partial sums S_0 = 0, ..., S_n.
template<class Real = double>
struct WalkPath
{
    std::vector<Real> increments;
    std::vector<Real> sums;

    std::size_t steps() const { return increments.size(); }
};

template<class Real>
WalkPath<Real> make_walk(std::span<const Real> increments)
{
    detail::require<DomainError>(!increments.empty(), "make_walk: empty increment sequence");
    WalkPath<Real> walk;
    walk.increments.assign(increments.begin(), increments.end());
    walk.sums.reserve(increments.size() + 1);
    Real acc(0);
    walk.sums.push_back(acc);
    for (const Real& x : increments)
    {
        acc = acc + x;
        walk.sums.push_back(acc);
    }
    return walk;
}

template<class Real>
WalkPath<Real> make_walk(const std::vector<Real>& increments)
{
    return make_walk(std::span<const Real>(increments));
}

inline WalkPath<double> sample_walk(const DistSpec& spec, long n, RngStream& rng)
{
    detail::require<DomainError>(n >= 1, "sample_walk: n must be >= 1");
    std::vector<double> x(static_cast<std::size_t>(n));
    for (auto& xi : x)
        xi = sample(spec, rng);
    return make_walk(x);
}

template<class Real>
struct PathMin
{
    Real value;
    std::size_t index;
};

//! Minimum of S_0..S_n and its smallest attaining index.
template<class Real>
PathMin<Real> path_min(const WalkPath<Real>& walk)
{
    PathMin<Real> best{walk.sums.front(), 0};
    for (std::size_t j = 1; j < walk.sums.size(); ++j)
    {
        if (walk.sums[j] < best.value)
            best = {walk.sums[j], j};
    }
    return best;
}
}  // namespace cmin
