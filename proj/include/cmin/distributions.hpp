#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "errors.hpp"
#include "rng.hpp"

namespace cmin
{
//---------------------------------------------------------------------------//
// Distribution descriptors
//---------------------------------------------------------------------------//
enum class DistKind
{
    normal,
    cauchy,
    stable,
    uniform,
    exponential,
    geometric,
    gamma_unit_shape,
    rayleigh,
    chi_square_1,
};

inline std::string to_string(DistKind kind)
{
    switch (kind)
    {
        case DistKind::normal: return "normal";
        case DistKind::cauchy: return "cauchy";
        case DistKind::stable: return "stable";
        case DistKind::uniform: return "uniform";
        case DistKind::exponential: return "exponential";
        case DistKind::geometric: return "geometric";
        case DistKind::gamma_unit_shape: return "gamma_unit_shape";
        case DistKind::rayleigh: return "rayleigh";
        case DistKind::chi_square_1: return "chi_square_1";
    }
    return "unknown";
}

/*!
 * A one-dimensional law used for walk increments, horizons and reference
 * distribution functions.
 *
 * Parameter meaning per kind:
 * - normal: p1 = mean, p2 = standard deviation
 * - cauchy: p1 = location, p2 = scale
 * - stable: p1 = alpha (symmetric, characteristic function exp(-|u|^alpha))
 * - uniform: p1 = a, p2 = b
 * - exponential: p1 = rate
 * - geometric: p1 = q, supported on {0, 1, ...} with P(value >= n) = q^n
 * - gamma_unit_shape: rate-one exponential (a Gamma(1) variable)
 * - rayleigh: density r exp(-r^2/2)
 * - chi_square_1: square of a standard normal
 */
struct DistSpec
{
    DistKind kind{DistKind::normal};
    double p1{0.0};
    double p2{1.0};

    static DistSpec normal(double mu = 0.0, double sigma = 1.0) { return checked({DistKind::normal, mu, sigma}); }
    static DistSpec cauchy(double loc = 0.0, double scale = 1.0) { return checked({DistKind::cauchy, loc, scale}); }
    static DistSpec stable(double alpha) { return checked({DistKind::stable, alpha, 0.0}); }
    static DistSpec uniform(double a = 0.0, double b = 1.0) { return checked({DistKind::uniform, a, b}); }
    static DistSpec exponential(double rate = 1.0) { return checked({DistKind::exponential, rate, 0.0}); }
    static DistSpec geometric(double q) { return checked({DistKind::geometric, q, 0.0}); }
    static DistSpec gamma_unit_shape() { return {DistKind::gamma_unit_shape, 0.0, 0.0}; }
    static DistSpec rayleigh() { return {DistKind::rayleigh, 0.0, 0.0}; }
    static DistSpec chi_square_1() { return {DistKind::chi_square_1, 0.0, 0.0}; }

    //! Throws ParameterError if the parameters violate the kind's invariants.
    void validate() const
    {
        using detail::require;
        switch (kind)
        {
            case DistKind::normal:
                require<ParameterError>(sigma() > 0 && std::isfinite(p1), "normal: sigma must be > 0");
                break;
            case DistKind::cauchy:
                require<ParameterError>(p2 > 0 && std::isfinite(p1), "cauchy: scale must be > 0");
                break;
            case DistKind::stable:
                require<ParameterError>(p1 > 0 && p1 <= 2, "stable: alpha must lie in (0, 2]");
                break;
            case DistKind::uniform:
                require<ParameterError>(p1 < p2, "uniform: requires a < b");
                break;
            case DistKind::exponential:
                require<ParameterError>(p1 > 0, "exponential: rate must be > 0");
                break;
            case DistKind::geometric:
                require<ParameterError>(p1 > 0 && p1 < 1, "geometric: q must lie in (0, 1)");
                break;
            default: break;
        }
    }

    double sigma() const { return p2; }
    double alpha() const { return p1; }

  private:
    static DistSpec checked(DistSpec s)
    {
        s.validate();
        return s;
    }
};

enum class LevyKind
{
    brownian,
    cauchy,
    stable,
};

//! Lévy process with drift: standard Brownian motion, standard Cauchy, or
//! symmetric alpha-stable with E exp(iuX_t) = exp(-t|u|^alpha).
struct LevySpec
{
    LevyKind kind{LevyKind::brownian};
    double alpha{2.0};
    double drift{0.0};

    static LevySpec brownian(double drift = 0.0) { return {LevyKind::brownian, 2.0, drift}; }
    static LevySpec cauchy(double drift = 0.0) { return {LevyKind::cauchy, 1.0, drift}; }
    static LevySpec stable(double alpha, double drift = 0.0)
    {
        LevySpec s{LevyKind::stable, alpha, drift};
        s.validate();
        return s;
    }

    void validate() const
    {
        detail::require<ParameterError>(alpha > 0 && alpha <= 2, "levy: alpha must lie in (0, 2]");
        detail::require<ParameterError>(std::isfinite(drift), "levy: drift must be finite");
    }
};

//---------------------------------------------------------------------------//
// Samplers
//---------------------------------------------------------------------------//
//! Symmetric alpha-stable draw with characteristic function exp(-|u|^alpha),
//! by the Chambers-Mallows-Stuck transform of a uniform angle and a unit
//! exponential. alpha == 1 takes the Cauchy path.
inline double standard_stable(double alpha, RngStream& rng)
{
    detail::require<ParameterError>(alpha > 0 && alpha <= 2, "stable: alpha must lie in (0, 2]");
    const double v = std::numbers::pi * (rng.uniform() - 0.5);
    if (alpha == 1.0)
        return std::tan(v);
    const double w = rng.exponential();
    if (alpha == 2.0)
        return 2.0 * std::sin(v) * std::sqrt(w);
    return std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha)
           * std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
}

inline double standard_cauchy(RngStream& rng)
{
    return std::tan(std::numbers::pi * (rng.uniform() - 0.5));
}

inline double sample(const DistSpec& spec, RngStream& rng)
{
    spec.validate();
    switch (spec.kind)
    {
        case DistKind::normal: return spec.p1 + spec.p2 * rng.normal();
        case DistKind::cauchy: return spec.p1 + spec.p2 * standard_cauchy(rng);
        case DistKind::stable: return standard_stable(spec.p1, rng);
        case DistKind::uniform: return spec.p1 + (spec.p2 - spec.p1) * rng.uniform();
        case DistKind::exponential: return rng.exponential() / spec.p1;
        case DistKind::geometric: return std::floor(std::log(rng.uniform()) / std::log(spec.p1));
        case DistKind::gamma_unit_shape: return rng.exponential();
        case DistKind::rayleigh: return std::sqrt(2.0 * rng.exponential());
        case DistKind::chi_square_1:
        {
            const double z = rng.normal();
            return z * z;
        }
    }
    throw UnsupportedError("sample: unknown distribution kind");
}

//! Draw of the marginal X_length of a Lévy process.
inline double block_sum_sample(const LevySpec& spec, double length, RngStream& rng)
{
    detail::require<DomainError>(length > 0 && std::isfinite(length), "block_sum_sample: length must be > 0");
    spec.validate();
    switch (spec.kind)
    {
        case LevyKind::brownian: return spec.drift * length + std::sqrt(length) * rng.normal();
        case LevyKind::cauchy: return spec.drift * length + length * standard_cauchy(rng);
        case LevyKind::stable:
            return spec.drift * length + std::pow(length, 1.0 / spec.alpha) * standard_stable(spec.alpha, rng);
    }
    throw UnsupportedError("block_sum_sample: unknown process kind");
}

//! Draw of X_l / l given log(l). Stays finite for stick lengths far below
//! the smallest positive double.
inline double block_slope_sample(const LevySpec& spec, double log_length, RngStream& rng)
{
    spec.validate();
    switch (spec.kind)
    {
        case LevyKind::brownian: return spec.drift + std::exp(-0.5 * log_length) * rng.normal();
        case LevyKind::cauchy: return spec.drift + standard_cauchy(rng);
        case LevyKind::stable:
        {
            const double s = standard_stable(spec.alpha, rng);
            if (spec.alpha == 1.0)
                return spec.drift + s;
            return spec.drift + std::exp((1.0 / spec.alpha - 1.0) * log_length) * s;
        }
    }
    throw UnsupportedError("block_slope_sample: unknown process kind");
}

/*!
 * Logarithmic law P(j) = q^j / (j * -ln(1-q)), j >= 1, sampled by inversion.
 *
 * The cumulative table is built once per q and covers the 1 - 1e-12
 * quantile (or 2^20 entries, whichever is smaller); draws beyond the table
 * continue the inversion term by term.
 */
class LogarithmicSampler
{
  public:
    explicit LogarithmicSampler(double q) : q_(q)
    {
        detail::require<ParameterError>(q > 0 && q < 1, "logarithmic: q must lie in (0, 1)");
        norm_ = -std::log1p(-q);
        double p = q / norm_;
        double acc = 0;
        constexpr std::size_t table_cap = std::size_t{1} << 20;
        for (std::size_t j = 1; j <= table_cap; ++j)
        {
            acc += p;
            cdf_.push_back(acc);
            last_pmf_ = p;
            if (acc >= 1.0 - 1e-12)
                break;
            p *= q * static_cast<double>(j) / static_cast<double>(j + 1);
        }
    }

    double q() const { return q_; }

    double pmf(long j) const
    {
        if (j < 1)
            return 0.0;
        return std::exp(static_cast<double>(j) * std::log(q_)) / (static_cast<double>(j) * norm_);
    }

    long operator()(RngStream& rng) const
    {
        const double u = rng.uniform();
        auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
        if (it != cdf_.end())
            return static_cast<long>(it - cdf_.begin()) + 1;
        // Tail beyond the table.
        long j = static_cast<long>(cdf_.size());
        double acc = cdf_.back();
        double p = last_pmf_;
        while (acc < u && p > 0)
        {
            p *= q_ * static_cast<double>(j) / static_cast<double>(j + 1);
            ++j;
            acc += p;
        }
        return j;
    }

  private:
    double q_;
    double norm_{};
    double last_pmf_{};
    std::vector<double> cdf_;
};

inline long sample_logarithmic(double q, RngStream& rng)
{
    return LogarithmicSampler(q)(rng);
}

//---------------------------------------------------------------------------//
// Distribution functions and special functions
//---------------------------------------------------------------------------//
inline double standard_normal_cdf(double x)
{
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

//! Exact distribution function for the kinds used as KS references.
inline double cdf(const DistSpec& spec, double x)
{
    spec.validate();
    switch (spec.kind)
    {
        case DistKind::normal: return standard_normal_cdf((x - spec.p1) / spec.p2);
        case DistKind::exponential: return x <= 0 ? 0.0 : -std::expm1(-spec.p1 * x);
        case DistKind::gamma_unit_shape: return x <= 0 ? 0.0 : -std::expm1(-x);
        case DistKind::rayleigh: return x <= 0 ? 0.0 : -std::expm1(-0.5 * x * x);
        case DistKind::chi_square_1: return x <= 0 ? 0.0 : std::erf(std::sqrt(0.5 * x));
        case DistKind::uniform:
            if (x <= spec.p1)
                return 0.0;
            if (x >= spec.p2)
                return 1.0;
            return (x - spec.p1) / (spec.p2 - spec.p1);
        default: break;
    }
    throw UnsupportedError("cdf: no distribution function for " + to_string(spec.kind));
}

/*!
 * Exponential integral E1(x) = int_x^inf e^{-u}/u du for x > 0.
 *
 * Power series for x <= 1, modified Lentz continued fraction above.
 */
inline double exp_integral_e1(double x)
{
    detail::require<DomainError>(x > 0, "exp_integral_e1: x must be > 0");
    constexpr double eps = 1e-16;
    if (x <= 1.0)
    {
        double sum = 0.0;
        double term = 1.0;
        for (int k = 1; k < 200; ++k)
        {
            term *= -x / k;
            const double add = -term / k;
            sum += add;
            if (std::abs(add) < eps * std::abs(sum))
                break;
        }
        return -std::numbers::egamma - std::log(x) + sum;
    }
    constexpr double tiny = 1e-300;
    double b = x + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 1000; ++i)
    {
        const double an = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        const double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < eps)
            break;
    }
    return h * std::exp(-x);
}

//! Mean of the law, or nullopt when it is not finite (Cauchy, alpha <= 1).
inline std::optional<double> finite_mean(const DistSpec& spec)
{
    spec.validate();
    switch (spec.kind)
    {
        case DistKind::normal: return spec.p1;
        case DistKind::cauchy: return std::nullopt;
        case DistKind::stable: return spec.p1 > 1 ? std::optional<double>(0.0) : std::nullopt;
        case DistKind::uniform: return 0.5 * (spec.p1 + spec.p2);
        case DistKind::exponential: return 1.0 / spec.p1;
        case DistKind::geometric: return spec.p1 / (1.0 - spec.p1);
        case DistKind::gamma_unit_shape: return 1.0;
        case DistKind::rayleigh: return std::sqrt(std::numbers::pi / 2.0);
        case DistKind::chi_square_1: return 1.0;
    }
    return std::nullopt;
}

/*!
 * P(S_j < j * E X_1) for a walk with i.i.d. increments from spec.
 *
 * Closed forms only: laws symmetric about their mean give 1/2 and the
 * exponential family gives the regularized incomplete gamma P(j, j).
 */
inline double prob_sum_below_mean(const DistSpec& spec, long j)
{
    detail::require<DomainError>(j >= 1, "prob_sum_below_mean: j must be >= 1");
    switch (spec.kind)
    {
        case DistKind::normal:
        case DistKind::uniform: return 0.5;
        case DistKind::stable:
            detail::require<ParameterError>(spec.p1 > 1, "stable: mean is not finite for alpha <= 1");
            return 0.5;
        case DistKind::exponential:
        case DistKind::gamma_unit_shape:
            return boost::math::gamma_p(static_cast<double>(j), static_cast<double>(j));
        case DistKind::cauchy: throw ParameterError("cauchy: mean is not finite");
        default: break;
    }
    throw UnsupportedError("prob_sum_below_mean: no closed form for " + to_string(spec.kind));
}
}  // namespace cmin
