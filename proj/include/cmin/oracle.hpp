#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"
#include "minorant.hpp"
#include "transform3214.hpp"
#include "walk.hpp"

namespace cmin
{
//! Exact rational scalar (expression templates off so `auto` is safe in
//! the generic hull and transform code).
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

//! Ranked lengths, non-increasing.
using Partition = std::vector<int>;
//! Lengths in time order.
using Composition = std::vector<int>;

inline Rational factorial(int n)
{
    Rational f(1);
    for (int k = 2; k <= n; ++k)
        f *= k;
    return f;
}

//---------------------------------------------------------------------------//
// Combinatorial laws
//---------------------------------------------------------------------------//
inline std::vector<Composition> compositions_of(int n)
{
    std::vector<Composition> out;
    Composition cur;
    std::function<void(int)> rec = [&](int left) {
        if (left == 0)
        {
            out.push_back(cur);
            return;
        }
        for (int first = 1; first <= left; ++first)
        {
            cur.push_back(first);
            rec(left - first);
            cur.pop_back();
        }
    };
    rec(n);
    return out;
}

inline std::vector<Partition> partitions_of(int n)
{
    std::vector<Partition> out;
    Partition cur;
    std::function<void(int, int)> rec = [&](int left, int cap) {
        if (left == 0)
        {
            out.push_back(cur);
            return;
        }
        for (int part = std::min(left, cap); part >= 1; --part)
        {
            cur.push_back(part);
            rec(left - part, part);
            cur.pop_back();
        }
    };
    rec(n, n);
    return out;
}

//! prod_j 1 / (j^{a_j} a_j!), a_j = number of parts equal to j: the
//! probability that a uniform permutation has this cycle type.
inline Rational cycle_type_probability(const Partition& p)
{
    std::map<int, int> multiplicity;
    for (int part : p)
        ++multiplicity[part];
    Rational prob(1);
    for (const auto& [j, a] : multiplicity)
    {
        Rational denom = factorial(a);
        for (int i = 0; i < a; ++i)
            denom *= j;
        prob /= denom;
    }
    return prob;
}

inline std::map<Partition, Rational> cycle_type_law(int n)
{
    std::map<Partition, Rational> law;
    for (auto& p : partitions_of(n))
        law.emplace(p, cycle_type_probability(p));
    return law;
}

//! (1/k!) prod 1/n_i: the composition law of a walk whose S_k/k share one
//! law (e.g. Cauchy increments).
inline std::map<Composition, Rational> cauchy_composition_law(int n)
{
    std::map<Composition, Rational> law;
    for (auto& c : compositions_of(n))
    {
        Rational prob = 1 / factorial(static_cast<int>(c.size()));
        for (int part : c)
            prob /= part;
        law.emplace(c, prob);
    }
    return law;
}

//---------------------------------------------------------------------------//
// Subset-average ties
//---------------------------------------------------------------------------//
/*!
 * True iff the 2^n - 1 nonempty subsets of the increments have pairwise
 * distinct arithmetic means. Exhaustive; n <= 20.
 */
inline bool check_no_ties(std::span<const Rational> x)
{
    const std::size_t n = x.size();
    detail::require<CapacityError>(n <= 20, "check_no_ties: at most 20 increments");
    detail::require<DomainError>(n >= 1, "check_no_ties: empty increment sequence");
    const std::uint32_t subsets = std::uint32_t{1} << n;
    std::vector<Rational> sums(subsets);
    std::vector<Rational> means;
    means.reserve(subsets - 1);
    for (std::uint32_t mask = 1; mask < subsets; ++mask)
    {
        const int low = std::countr_zero(mask);
        sums[mask] = sums[mask & (mask - 1)] + x[static_cast<std::size_t>(low)];
        means.push_back(sums[mask] / std::popcount(mask));
    }
    std::sort(means.begin(), means.end());
    return std::adjacent_find(means.begin(), means.end()) == means.end();
}

inline bool check_no_ties(const std::vector<Rational>& x)
{
    return check_no_ties(std::span<const Rational>(x));
}

//---------------------------------------------------------------------------//
// Quadratic lower-hull oracle
//---------------------------------------------------------------------------//
/*!
 * Vertices of the lower convex hull by the pairwise slope test: an interior
 * point k is a vertex iff every chord slope into k from the left is strictly
 * below every chord slope out of k to the right. O(n^2), independent of
 * the monotone-chain scan.
 */
template<class Real>
std::vector<std::size_t> pairwise_hull_vertices(std::span<const Real> times, std::span<const Real> values)
{
    const std::size_t n = times.size();
    detail::require<DomainError>(n >= 2 && values.size() == n, "pairwise_hull_vertices: need two or more points");
    std::vector<std::size_t> out{0};
    for (std::size_t k = 1; k + 1 < n; ++k)
    {
        Real max_in = (values[k] - values[0]) / (times[k] - times[0]);
        for (std::size_t i = 1; i < k; ++i)
            max_in = std::max(max_in, (values[k] - values[i]) / (times[k] - times[i]));
        Real min_out = (values[n - 1] - values[k]) / (times[n - 1] - times[k]);
        for (std::size_t j = k + 1; j + 1 < n; ++j)
            min_out = std::min(min_out, (values[j] - values[k]) / (times[j] - times[k]));
        if (max_in < min_out)
            out.push_back(k);
    }
    out.push_back(n - 1);
    return out;
}

//---------------------------------------------------------------------------//
// Exhaustive enumeration over orderings
//---------------------------------------------------------------------------//
struct WalkLawTally
{
    int n{0};
    long orderings{0};
    std::map<Partition, long> partitions;
    std::map<Composition, long> compositions;
    //! Partition counts equal n! * prod 1/(j^{a_j} a_j!) for every partition.
    bool matches_partition_law{false};
};

/*!
 * Minorant face tallies over all n! orderings of the increments, computed
 * with exact rational hulls, and the exact comparison of the partition
 * tally with the uniform-permutation cycle-type law.
 */
inline WalkLawTally enumerate_walk_laws(std::span<const Rational> x)
{
    const int n = static_cast<int>(x.size());
    detail::require<CapacityError>(n <= 8, "enumerate_walk_laws: at most 8 increments");
    if (!check_no_ties(x))
        throw TieError("enumerate_walk_laws: increments have a subset-average tie");

    WalkLawTally tally;
    tally.n = n;
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<Rational> ordered(static_cast<std::size_t>(n));
    do
    {
        for (int i = 0; i < n; ++i)
            ordered[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
        const auto comp = integer_composition(minorant_of(make_walk(ordered)));
        Partition part = comp;
        std::sort(part.begin(), part.end(), std::greater<int>());
        ++tally.compositions[comp];
        ++tally.partitions[part];
        ++tally.orderings;
    } while (std::next_permutation(perm.begin(), perm.end()));

    const Rational total = factorial(n);
    tally.matches_partition_law = true;
    for (const auto& [p, prob] : cycle_type_law(n))
    {
        const auto it = tally.partitions.find(p);
        const Rational observed = it == tally.partitions.end() ? Rational(0) : Rational(it->second);
        if (observed != total * prob)
            tally.matches_partition_law = false;
    }
    return tally;
}

inline WalkLawTally enumerate_walk_laws(const std::vector<Rational>& x)
{
    return enumerate_walk_laws(std::span<const Rational>(x));
}

/*!
 * Exhaustive check that (ordering, u) -> (m, transformed ordering) is a
 * bijection of {orderings} x {1..n} and that inverse_3214 undoes it.
 */
inline bool verify_3214_bijection(std::span<const Rational> x)
{
    const std::size_t n = x.size();
    detail::require<CapacityError>(n <= 6, "verify_3214_bijection: at most 6 increments");
    if (!check_no_ties(x))
        throw TieError("verify_3214_bijection: increments have a subset-average tie");

    std::map<Rational, int> index_of;
    for (std::size_t i = 0; i < n; ++i)
        index_of.emplace(x[i], static_cast<int>(i));

    std::set<std::pair<std::size_t, std::vector<int>>> images;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<Rational> ordered(n);
    std::size_t pairs = 0;
    do
    {
        for (std::size_t i = 0; i < n; ++i)
            ordered[i] = x[static_cast<std::size_t>(perm[i])];
        const auto walk = make_walk(ordered);
        for (std::size_t u = 1; u <= n; ++u)
        {
            ++pairs;
            const auto rec = transform_3214(walk, u);
            const auto back = inverse_3214(rec.output, rec.m);
            if (back.u != u || back.walk.increments != walk.increments)
                return false;
            std::vector<int> image(n);
            for (std::size_t i = 0; i < n; ++i)
                image[i] = index_of.at(rec.output.increments[i]);
            if (!images.emplace(rec.m, std::move(image)).second)
                return false;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return images.size() == pairs;
}

inline bool verify_3214_bijection(const std::vector<Rational>& x)
{
    return verify_3214_bijection(std::span<const Rational>(x));
}

//---------------------------------------------------------------------------//
// Stick breaking
//---------------------------------------------------------------------------//
struct StickLaw
{
    std::map<Partition, Rational> law;
    bool matches_cycle_law{false};
};

/*!
 * Exact law of the ranked discrete uniform stick-breaking partition of n:
 * a composition (m_1, ..., m_k) has probability prod 1/(n - m_1 - ... -
 * m_{i-1}). Compared exactly against the cycle-type law.
 */
inline StickLaw stick_break_exact_law(int n)
{
    detail::require<CapacityError>(n <= 12, "stick_break_exact_law: n must be <= 12");
    detail::require<DomainError>(n >= 1, "stick_break_exact_law: n must be >= 1");
    StickLaw out;
    for (const auto& comp : compositions_of(n))
    {
        Rational prob(1);
        int left = n;
        for (int piece : comp)
        {
            prob /= left;
            left -= piece;
        }
        Partition p = comp;
        std::sort(p.begin(), p.end(), std::greater<int>());
        out.law[p] += prob;
    }
    out.matches_cycle_law = out.law == cycle_type_law(n);
    return out;
}
}  // namespace cmin
