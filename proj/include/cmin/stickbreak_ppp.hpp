#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <ostream>
#include <random>
#include <utility>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "distributions.hpp"
#include "errors.hpp"
#include "minorant.hpp"
#include "rng.hpp"

namespace cmin
{
//---------------------------------------------------------------------------//
// Types
//---------------------------------------------------------------------------//
//! A (length, increment) pair describing one face.
struct FacePoint
{
    double length;
    double increment;

    double slope() const { return increment / length; }
};

/*!
 * What a sampler left out.
 *
 * min_length: points shorter than this were not generated.
 * missing_mass_bound: expected total length of the omitted points.
 * max_length: integer lengths above this were not generated (0 = none).
 */
struct Truncation
{
    double min_length{0.0};
    double missing_mass_bound{0.0};
    long max_length{0};
};

struct FacePointSet
{
    std::vector<FacePoint> points;
    Truncation truncation;

    double total_length() const
    {
        double s = 0;
        for (const auto& p : points)
            s += p.length;
        return s;
    }
};

//! Stick pieces in discovery order and the unbroken remainder.
struct StickComposition
{
    std::vector<double> pieces;
    double remainder{0.0};
};

//! Closed slope window [lo, hi]; lo > hi denotes the empty window.
struct SlopeWindow
{
    double lo;
    double hi;

    bool contains(double s) const { return lo <= s && s <= hi; }
};

struct LevyMinorant
{
    Minorant<double> minorant;
    StickComposition sticks;
};

//---------------------------------------------------------------------------//
// Stick breaking and permutation cycles
//---------------------------------------------------------------------------//
//! Discrete uniform stick breaking of {1..n}: each piece is uniform on
//! {1, ..., what is left}.
inline StickComposition stick_break_discrete(long n, RngStream& rng)
{
    detail::require<DomainError>(n >= 1, "stick_break_discrete: n must be >= 1");
    StickComposition s;
    long left = n;
    while (left > 0)
    {
        const long piece = rng.uniform_int(1, left);
        s.pieces.push_back(static_cast<double>(piece));
        left -= piece;
    }
    return s;
}

/*!
 * Continuous uniform stick breaking of [0, 1] until the remainder falls
 * below tol. next_uniform() must return uniforms on (0, 1).
 */
template<class UniformSource>
StickComposition stick_break_continuous(double tol, UniformSource&& next_uniform)
{
    detail::require<DomainError>(tol > 0 && tol < 1, "stick_break_continuous: tol must lie in (0, 1)");
    StickComposition s;
    double left = 1.0;
    while (left >= tol)
    {
        const double piece = next_uniform() * left;
        s.pieces.push_back(piece);
        left -= piece;
    }
    s.remainder = left;
    return s;
}

inline StickComposition stick_break_continuous(double tol, RngStream& rng)
{
    return stick_break_continuous(tol, [&rng] { return rng.uniform(); });
}

//! Pieces of a discrete composition ranked non-increasing.
inline std::vector<int> ranked_partition(const StickComposition& s)
{
    std::vector<int> out;
    out.reserve(s.pieces.size());
    for (double p : s.pieces)
        out.push_back(static_cast<int>(p + 0.5));
    std::sort(out.begin(), out.end(), std::greater<int>());
    return out;
}

/*!
 * Ranked cycle lengths of a uniform permutation of n elements via the
 * Feller coupling: walking k = n, n-1, ..., 1 the current cycle closes
 * with probability 1/k.
 */
inline std::vector<int> permutation_cycle_lengths(long n, RngStream& rng)
{
    detail::require<DomainError>(n >= 1, "permutation_cycle_lengths: n must be >= 1");
    std::vector<int> cycles;
    int current = 0;
    for (long k = n; k >= 1; --k)
    {
        ++current;
        if (rng.uniform_int(1, k) == 1)
        {
            cycles.push_back(current);
            current = 0;
        }
    }
    std::sort(cycles.begin(), cycles.end(), std::greater<int>());
    return cycles;
}

//---------------------------------------------------------------------------//
// Assembly
//---------------------------------------------------------------------------//
//! Sort points by slope and chain them from (0, 0). Equal slopes raise
//! TieError.
inline Minorant<double> assemble_from_points(const FacePointSet& set)
{
    detail::require<DomainError>(!set.points.empty(), "assemble_from_points: empty point set");
    std::vector<std::pair<double, double>> pieces;  // (length, increment)
    std::vector<std::pair<double, std::size_t>> order;
    order.reserve(set.points.size());
    for (std::size_t i = 0; i < set.points.size(); ++i)
    {
        detail::require<DomainError>(set.points[i].length > 0, "assemble_from_points: length must be > 0");
        order.emplace_back(set.points[i].slope(), i);
    }
    std::sort(order.begin(), order.end());
    for (std::size_t k = 0; k < order.size(); ++k)
    {
        if (k > 0 && order[k].first == order[k - 1].first)
            throw TieError("assemble_from_points: two faces share a slope");
        const auto& p = set.points[order[k].second];
        pieces.emplace_back(p.length, p.increment);
    }
    return chain_faces(std::span<const std::pair<double, double>>(pieces));
}

/*!
 * Convex minorant on [0, 1 - remainder] of a Lévy process: stick-breaking
 * lengths, an independent X_l increment per stick, faces ordered by slope.
 */
inline LevyMinorant build_levy_minorant_01(const LevySpec& spec, double tol, RngStream& rng)
{
    spec.validate();
    LevyMinorant out;
    out.sticks = stick_break_continuous(tol, rng);
    FacePointSet set;
    for (double l : out.sticks.pieces)
        set.points.push_back({l, block_sum_sample(spec, l, rng)});
    set.truncation.missing_mass_bound = out.sticks.remainder;
    out.minorant = assemble_from_points(set);
    return out;
}

//! Count of the first n_sticks stick-breaking faces whose slope lies in
//! the window. Works with log-lengths, so n_sticks may exceed the
//! underflow depth of the stick remainder.
inline long slope_window_count(const LevySpec& spec, long n_sticks, SlopeWindow window, RngStream& rng)
{
    detail::require<DomainError>(n_sticks >= 1, "slope_window_count: n_sticks must be >= 1");
    spec.validate();
    long count = 0;
    double log_left = 0.0;
    for (long i = 0; i < n_sticks; ++i)
    {
        const double u = rng.uniform();
        const double log_piece = log_left + std::log(u);
        log_left += std::log1p(-u);
        const double slope = block_slope_sample(spec, log_piece, rng);
        if (window.contains(slope))
            ++count;
    }
    return count;
}

//---------------------------------------------------------------------------//
// Poisson point processes
//---------------------------------------------------------------------------//
//! Geometric-horizon face sampler with a prebuilt length table, so
//! replicas at a fixed q share it.
inline FacePointSet sample_ppp_geometric(const DistSpec& spec, const LogarithmicSampler& lengths, RngStream& rng)
{
    spec.validate();
    const double mass = -std::log1p(-lengths.q());
    const long count = std::poisson_distribution<long>(mass)(rng);
    FacePointSet set;
    set.points.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i)
    {
        const long j = lengths(rng);
        double x = 0;
        for (long k = 0; k < j; ++k)
            x += sample(spec, rng);
        set.points.push_back({static_cast<double>(j), x});
    }
    return set;
}

/*!
 * Faces of the walk's minorant up to a geometric(1-q) horizon: Poisson
 * process on {1,2,...} x R with intensity q^j/j P(S_j in dx), drawn as a
 * Poisson(-ln(1-q)) count of logarithmic(q) lengths with S_j increments.
 */
inline FacePointSet sample_ppp_geometric(const DistSpec& spec, double q, RngStream& rng)
{
    spec.validate();
    detail::require<ParameterError>(q > 0 && q < 1, "sample_ppp_geometric: q must lie in (0, 1)");
    const LogarithmicSampler lengths(q);
    return sample_ppp_geometric(spec, lengths, rng);
}

namespace detail
{
//! Inverse of P(T > t) = E1(theta t) / E1(a), a = theta * min_length.
inline double exp_levy_length(double theta, double a, double e1_a, double v)
{
    const double target = v * e1_a;
    const double log_target = std::log(target);
    auto f = [log_target](double y) { return std::log(exp_integral_e1(std::exp(y))) - log_target; };
    double lo = std::log(a);
    double hi = std::log(std::max(2.0 * a, 1.0));
    while (f(hi) > 0)
        hi += 1.0;
    if (f(lo) <= 0)
        return a / theta;
    std::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(50), iters);
    return std::exp(0.5 * (r.first + r.second)) / theta;
}
}  // namespace detail

/*!
 * Faces of a Lévy process minorant up to an independent rate-theta
 * exponential horizon: Poisson process with intensity
 * e^{-theta t}/t dt P(X_t in dx), restricted to t >= min_length.
 */
inline FacePointSet sample_ppp_exp_levy(const LevySpec& spec, double theta, double min_length, RngStream& rng)
{
    spec.validate();
    detail::require<ParameterError>(theta > 0, "sample_ppp_exp_levy: theta must be > 0");
    detail::require<ParameterError>(min_length > 0, "sample_ppp_exp_levy: min_length must be > 0");
    const double a = theta * min_length;
    const double e1_a = exp_integral_e1(a);

    FacePointSet set;
    set.truncation.min_length = min_length;
    set.truncation.missing_mass_bound = -std::expm1(-a) / theta;
    if (!(e1_a > 0))
        return set;
    const long count = std::poisson_distribution<long>(e1_a)(rng);
    for (long i = 0; i < count; ++i)
    {
        const double t = detail::exp_levy_length(theta, a, e1_a, rng.uniform());
        set.points.push_back({t, block_sum_sample(spec, t, rng)});
    }
    return set;
}

/*!
 * Faces of length <= max_length of the minorant of an infinite walk with
 * finite mean mu: independent Poisson(p_j / j) counts per length j with
 * p_j = P(S_j < j mu), increments from S_j given S_j < j mu by rejection.
 */
inline FacePointSet sample_ppp_infinite_walk(const DistSpec& spec, long max_length, RngStream& rng)
{
    spec.validate();
    detail::require<DomainError>(max_length >= 1, "sample_ppp_infinite_walk: max_length must be >= 1");
    const auto mu = finite_mean(spec);
    detail::require<ParameterError>(mu.has_value(), "sample_ppp_infinite_walk: increment law has no finite mean");

    FacePointSet set;
    set.truncation.max_length = max_length;
    for (long j = 1; j <= max_length; ++j)
    {
        const double p = prob_sum_below_mean(spec, j);
        if (p < 1e-6)
            throw SamplingError("sample_ppp_infinite_walk: acceptance probability below 1e-6");
        const long count = std::poisson_distribution<long>(p / static_cast<double>(j))(rng);
        const double bound = static_cast<double>(j) * *mu;
        const long max_tries = static_cast<long>(std::ceil(100.0 / p)) + 100;
        for (long c = 0; c < count; ++c)
        {
            long tries = 0;
            while (true)
            {
                double s = 0;
                for (long k = 0; k < j; ++k)
                    s += sample(spec, rng);
                if (s < bound)
                {
                    set.points.push_back({static_cast<double>(j), s});
                    break;
                }
                if (++tries >= max_tries)
                    throw SamplingError("sample_ppp_infinite_walk: rejection sampler stalled");
            }
        }
    }
    return set;
}

//! FacePointSet CSV: length,increment,slope with 17 significant digits.
inline void write_point_csv(std::ostream& os, const FacePointSet& set)
{
    os << "length,increment,slope\n";
    char buf[192];
    for (const auto& p : set.points)
    {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", p.length, p.increment, p.slope());
        os << buf;
    }
}
}  // namespace cmin
