#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "minorant.hpp"
#include "rng.hpp"

namespace cmin
{
/*!
 * Vertex description of the convex minorant of a Brownian meander on [0, t].
 *
 * taus[n] = t - V_n is the time left after the n-th vertex; rhos[0] is the
 * meander's endpoint and rhos[0] - rhos[n] is where the line extending the
 * n-th face crosses time t.
 */
struct TauRhoSequence
{
    double t{1.0};
    std::vector<double> taus;
    std::vector<double> rhos;

    std::vector<double> vertex_times() const
    {
        std::vector<double> v;
        v.reserve(taus.size());
        for (double tau : taus)
            v.push_back(t - tau);
        return v;
    }
};

//! One step of the recursion: rho' = u * rho and
//! tau' = tau rho'^2 / (tau z2 + rho'^2).
inline std::pair<double, double> tau_rho_step(double tau, double rho, double u, double z2)
{
    const double rho_next = u * rho;
    const double r2 = rho_next * rho_next;
    return {tau * r2 / (tau * z2 + r2), rho_next};
}

namespace detail
{
inline TauRhoSequence tau_rho_start(double t, RngStream& rng)
{
    require<DomainError>(t > 0, "tau_rho_sequence: t must be > 0");
    TauRhoSequence seq;
    seq.t = t;
    seq.taus.push_back(t);
    seq.rhos.push_back(std::sqrt(2.0 * t * rng.exponential()));
    return seq;
}

inline void tau_rho_advance(TauRhoSequence& seq, RngStream& rng)
{
    const double u = rng.uniform();
    const double z = rng.normal();
    const auto [tau, rho] = tau_rho_step(seq.taus.back(), seq.rhos.back(), u, z * z);
    seq.taus.push_back(tau);
    seq.rhos.push_back(rho);
}
}  // namespace detail

//! rho_0 = sqrt(2 t Gamma_1), tau_0 = t, followed by `steps` recursion steps.
inline TauRhoSequence tau_rho_sequence(double t, long steps, RngStream& rng)
{
    detail::require<DomainError>(steps >= 1, "tau_rho_sequence: steps must be >= 1");
    auto seq = detail::tau_rho_start(t, rng);
    for (long i = 0; i < steps; ++i)
        detail::tau_rho_advance(seq, rng);
    return seq;
}

//! Iterate until tau_n < rel_tol * t or max_steps steps have been taken.
inline TauRhoSequence tau_rho_adaptive(double t, RngStream& rng, double rel_tol = 1e-8, long max_steps = 10000)
{
    auto seq = detail::tau_rho_start(t, rng);
    for (long i = 0; i < max_steps && !(seq.taus.back() < rel_tol * t); ++i)
        detail::tau_rho_advance(seq, rng);
    return seq;
}

/*!
 * Rebuild the meander's convex minorant from its (tau, rho) sequence.
 *
 * Face n spans (V_{n-1}, V_n) with slope
 * (rho_0 - rho_n - C(V_{n-1})) / tau_{n-1}; the first face starts at (0, 0).
 * With close_to_endpoint the sliver (V_N, t] is closed by a final face
 * ending at (t, rho_0).
 *
 * Slopes divide a cancelling difference by tau_{n-1}, so once tau falls
 * below roughly 1e-12 t they are rounding noise and may lose monotonicity.
 */
inline Minorant<double> minorant_from_tau_rho(const TauRhoSequence& seq, bool close_to_endpoint = false)
{
    using detail::require;
    const auto& tau = seq.taus;
    const auto& rho = seq.rhos;
    require<DomainError>(tau.size() == rho.size() && tau.size() >= 2, "minorant_from_tau_rho: need at least two (tau, rho) pairs");
    require<DomainError>(tau[0] == seq.t && seq.t > 0, "minorant_from_tau_rho: tau_0 must equal t > 0");
    for (std::size_t n = 1; n < tau.size(); ++n)
    {
        require<DomainError>(tau[n] < tau[n - 1] && tau[n] > 0, "minorant_from_tau_rho: taus must decrease strictly and stay positive");
        require<DomainError>(rho[n] <= rho[n - 1] && rho[n] > 0, "minorant_from_tau_rho: rhos must be non-increasing and positive");
    }

    std::vector<std::pair<double, double>> pieces;
    pieces.reserve(tau.size());
    double c = 0.0;
    for (std::size_t n = 1; n < tau.size(); ++n)
    {
        const double slope = (rho[0] - rho[n] - c) / tau[n - 1];
        const double length = tau[n - 1] - tau[n];
        pieces.emplace_back(length, slope * length);
        c += slope * length;
    }
    if (close_to_endpoint)
        pieces.emplace_back(tau.back(), rho[0] - c);
    return chain_faces(std::span<const std::pair<double, double>>(pieces));
}

struct GridPath
{
    std::vector<double> times;
    std::vector<double> values;
};

/*!
 * Grid approximation of a standard Brownian meander of length 1.
 *
 * Simulates a grid_n-step Gaussian walk, cuts it at its first argmin and
 * rescales the remainder by Brownian scaling. Post-minimum segments
 * shorter than 16 steps are resampled.
 */
inline GridPath simulate_meander_grid(long grid_n, RngStream& rng, int max_retries = 1000)
{
    detail::require<DomainError>(grid_n >= 2, "simulate_meander_grid: grid_n must be >= 2");
    constexpr long min_segment = 16;
    std::vector<double> sums(static_cast<std::size_t>(grid_n) + 1);
    for (int attempt = 0; attempt < max_retries; ++attempt)
    {
        sums[0] = 0.0;
        std::size_t argmin = 0;
        for (std::size_t i = 1; i < sums.size(); ++i)
        {
            sums[i] = sums[i - 1] + rng.normal();
            if (sums[i] < sums[argmin])
                argmin = i;
        }
        const std::size_t m = sums.size() - 1 - argmin;
        if (static_cast<long>(m) < min_segment)
            continue;
        GridPath path;
        path.times.resize(m + 1);
        path.values.resize(m + 1);
        const double scale = 1.0 / std::sqrt(static_cast<double>(m));
        for (std::size_t i = 0; i <= m; ++i)
        {
            path.times[i] = static_cast<double>(i) / static_cast<double>(m);
            path.values[i] = (sums[argmin + i] - sums[argmin]) * scale;
        }
        return path;
    }
    throw SamplingError("simulate_meander_grid: post-minimum segment too short after retries");
}

//! (W^2 + (1-U)^2 R^2) / (1 + U^2 R^2 / Z^2)
inline double bewid_lhs(double w, double z, double u, double r)
{
    const double a = (1.0 - u) * r;
    const double b = u * r / z;
    return (w * w + a * a) / (1.0 + b * b);
}

//! W, Z standard normal, U uniform(0,1), R Rayleigh, all independent.
inline double bewid_lhs_sample(RngStream& rng)
{
    const double w = rng.normal();
    const double z = rng.normal();
    const double u = rng.uniform();
    const double r = std::sqrt(2.0 * rng.exponential());
    return bewid_lhs(w, z, u, r);
}
}  // namespace cmin
