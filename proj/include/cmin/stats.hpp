#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "distributions.hpp"
#include "errors.hpp"
#include "json.hpp"
#include "rng.hpp"

namespace cmin
{
//! Significance level used by every acceptance run.
inline constexpr double default_level = 0.001;

//! Outcome of one statistical or exact check.
struct StatReport
{
    std::string test_name;
    double statistic{0.0};
    std::optional<double> p_value;  //!< absent for exact / tolerance checks
    long sample_size{0};
    bool passed{false};
    std::uint64_t seed{0};
    nlohmann::json params = nlohmann::json::object();
};

inline nlohmann::json to_json(const StatReport& r)
{
    nlohmann::json j;
    j["test"] = r.test_name;
    j["statistic"] = std::isfinite(r.statistic) ? nlohmann::json(r.statistic) : nlohmann::json(nullptr);
    j["p_value"] = r.p_value ? nlohmann::json(*r.p_value) : nlohmann::json(nullptr);
    j["n"] = r.sample_size;
    j["passed"] = r.passed;
    j["seed"] = r.seed;
    j["params"] = r.params;
    return j;
}

inline nlohmann::json to_json(const std::vector<StatReport>& reports)
{
    auto arr = nlohmann::json::array();
    for (const auto& r : reports)
        arr.push_back(to_json(r));
    return arr;
}

//---------------------------------------------------------------------------//
// Kolmogorov-Smirnov
//---------------------------------------------------------------------------//
//! P(K > lambda) for the Kolmogorov distribution.
inline double kolmogorov_survival(double lambda)
{
    if (lambda <= 0)
        return 1.0;
    if (lambda < 1.18)
    {
        const double pi2 = std::numbers::pi * std::numbers::pi;
        double sum = 0;
        for (int k = 1; k <= 20; ++k)
        {
            const double j = 2.0 * k - 1.0;
            sum += std::exp(-j * j * pi2 / (8.0 * lambda * lambda));
        }
        return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * sum, 0.0, 1.0);
    }
    double sum = 0;
    for (int k = 1; k <= 100; ++k)
    {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 == 1 ? term : -term);
        if (term < 1e-300)
            break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

//! Asymptotic p-value for statistic D at effective sample size ne, with
//! the usual (sqrt(ne) + 0.12 + 0.11/sqrt(ne)) scaling.
inline double ks_p_value(double d, double ne)
{
    const double rn = std::sqrt(ne);
    return kolmogorov_survival((rn + 0.12 + 0.11 / rn) * d);
}

//! sup |F_n - F| = max_i max(i/n - F(x_(i)), F(x_(i)) - (i-1)/n).
inline double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf_fn)
{
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0;
    for (std::size_t i = 0; i < samples.size(); ++i)
    {
        const double f = cdf_fn(samples[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

inline StatReport ks_one_sample(std::span<const double> samples, const DistSpec& reference, double level = default_level)
{
    detail::require<DomainError>(samples.size() >= 10, "ks_one_sample: need at least 10 samples");
    cdf(reference, 0.0);  // reject unsupported kinds up front
    StatReport r;
    r.test_name = "ks_one_sample";
    r.statistic = ks_statistic({samples.begin(), samples.end()}, [&](double x) { return cdf(reference, x); });
    r.p_value = ks_p_value(r.statistic, static_cast<double>(samples.size()));
    r.sample_size = static_cast<long>(samples.size());
    r.passed = *r.p_value >= level;
    r.params = {{"reference", to_string(reference.kind)}, {"p1", reference.p1}, {"p2", reference.p2}, {"level", level}};
    return r;
}

inline StatReport ks_two_sample(std::span<const double> a, std::span<const double> b, double level = default_level)
{
    detail::require<DomainError>(a.size() >= 10 && b.size() >= 10, "ks_two_sample: need at least 10 samples on each side");
    std::vector<double> x(a.begin(), a.end());
    std::vector<double> y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double na = static_cast<double>(x.size());
    const double nb = static_cast<double>(y.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0;
    while (i < x.size() && j < y.size())
    {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v)
            ++i;
        while (j < y.size() && y[j] == v)
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    StatReport r;
    r.test_name = "ks_two_sample";
    r.statistic = d;
    r.p_value = ks_p_value(d, na * nb / (na + nb));
    r.sample_size = static_cast<long>(x.size() + y.size());
    r.passed = *r.p_value >= level;
    r.params = {{"n_a", x.size()}, {"n_b", y.size()}, {"level", level}};
    return r;
}

//---------------------------------------------------------------------------//
// Chi-square goodness of fit
//---------------------------------------------------------------------------//
/*!
 * Pearson chi-square against the given cell probabilities.
 *
 * Consecutive cells are pooled until each pooled cell expects at least 5
 * observations; a short final pool joins the previous one.
 */
inline StatReport chi_square_gof(std::span<const long> observed, std::span<const double> probs, double level = default_level)
{
    detail::require<DomainError>(observed.size() == probs.size() && !probs.empty(), "chi_square_gof: observed and probabilities differ in length");
    double total_p = 0;
    for (double p : probs)
    {
        detail::require<DomainError>(p >= 0, "chi_square_gof: negative probability");
        total_p += p;
    }
    detail::require<DomainError>(std::abs(total_p - 1.0) <= 1e-12, "chi_square_gof: probabilities must sum to 1");
    long n = 0;
    for (long o : observed)
        n += o;
    detail::require<DomainError>(n > 0, "chi_square_gof: no observations");

    std::vector<std::pair<double, double>> pooled;  // (observed, expected)
    double obs = 0;
    double expct = 0;
    for (std::size_t i = 0; i < probs.size(); ++i)
    {
        obs += static_cast<double>(observed[i]);
        expct += probs[i] * static_cast<double>(n);
        if (expct >= 5.0)
        {
            pooled.emplace_back(obs, expct);
            obs = expct = 0;
        }
    }
    if (expct > 0 || obs > 0)
    {
        if (pooled.empty())
            pooled.emplace_back(obs, expct);
        else
        {
            pooled.back().first += obs;
            pooled.back().second += expct;
        }
    }

    double stat = 0;
    for (const auto& [o, e] : pooled)
        stat += (o - e) * (o - e) / e;
    const int df = static_cast<int>(pooled.size()) - 1;

    StatReport r;
    r.test_name = "chi_square_gof";
    r.statistic = stat;
    r.p_value = df > 0 ? boost::math::gamma_q(0.5 * df, 0.5 * stat) : 1.0;
    r.sample_size = n;
    r.passed = *r.p_value >= level;
    r.params = {{"cells", probs.size()}, {"pooled_cells", pooled.size()}, {"df", df}, {"level", level}};
    return r;
}

//---------------------------------------------------------------------------//
// Poisson dispersion
//---------------------------------------------------------------------------//
/*!
 * Index of dispersion D = sum (c_i - mean)^2 / mean for counts claimed to be
 * Poisson(mean), two-sided.
 *
 * Under the claim D has mean N and variance N (2 + 1/mean); the reference is
 * the scaled chi-square c * chi2(N / c), c = 1 + 1/(2 mean), matching both
 * moments (plain chi2(N) when mean is large). The empirical mean must also
 * lie within 5 standard errors of the claimed mean.
 */
inline StatReport poisson_dispersion(std::span<const long> counts, double mean, double level = default_level)
{
    detail::require<DomainError>(counts.size() >= 100, "poisson_dispersion: need at least 100 counts");
    detail::require<DomainError>(mean > 0, "poisson_dispersion: mean must be > 0");
    const double n = static_cast<double>(counts.size());
    double d = 0;
    double sum = 0;
    for (long c : counts)
    {
        const double dev = static_cast<double>(c) - mean;
        d += dev * dev / mean;
        sum += static_cast<double>(c);
    }
    const double scale = 1.0 + 0.5 / mean;
    const double df = n / scale;
    const double lower = boost::math::gamma_p(0.5 * df, 0.5 * d / scale);
    const double upper = boost::math::gamma_q(0.5 * df, 0.5 * d / scale);
    const double empirical_mean = sum / n;
    const bool mean_ok = std::abs(empirical_mean - mean) <= 5.0 * std::sqrt(mean / n);

    StatReport r;
    r.test_name = "poisson_dispersion";
    r.statistic = d;
    r.p_value = std::min(1.0, 2.0 * std::min(lower, upper));
    r.sample_size = static_cast<long>(counts.size());
    r.passed = *r.p_value >= level && mean_ok;
    r.params = {{"mean", mean},
                {"empirical_mean", empirical_mean},
                {"mean_within_5se", mean_ok},
                {"reference_df", df},
                {"reference_scale", scale},
                {"level", level}};
    return r;
}

//---------------------------------------------------------------------------//
// Spitzer identity
//---------------------------------------------------------------------------//
/*!
 * Monte Carlo check of
 *   sum_n q^n E exp(i t M_n) = exp( sum_k q^k / k E exp(i t min(S_k, 0)) ),
 * M_n = min_{k <= n} S_k, both series truncated at n_trunc.
 *
 * The left side averages sum_{n <= n_trunc} q^n exp(i t M_n) over walks; the
 * right side exponentiates the average of sum_k q^k/k exp(i t S_k^-) over an
 * independent set of walks. A t passes when |lhs - rhs| is below three
 * combined standard errors plus the analytic truncation bound (and a 1e-12
 * relative round-off allowance). At t = 0 both estimators are deterministic
 * and the statistical term is zero.
 */
inline std::vector<StatReport> spitzer_check(const DistSpec& spec,
                                             double q,
                                             std::span<const double> t_values,
                                             long n_trunc,
                                             long replicas,
                                             RngStream& rng)
{
    using cplx = std::complex<double>;
    spec.validate();
    detail::require<DomainError>(q > 0 && q < 1, "spitzer_check: q must lie in (0, 1)");
    detail::require<DomainError>(n_trunc >= 1 && std::pow(q, static_cast<double>(n_trunc)) / (1 - q) < 1e-6,
                                 "spitzer_check: n_trunc too small for q");
    detail::require<DomainError>(replicas >= 2, "spitzer_check: need at least 2 replicas");
    detail::require<DomainError>(!t_values.empty(), "spitzer_check: no t values");

    const std::size_t nt = t_values.size();
    std::vector<double> qpow(static_cast<std::size_t>(n_trunc) + 1);
    qpow[0] = 1;
    for (std::size_t k = 1; k < qpow.size(); ++k)
        qpow[k] = qpow[k - 1] * q;

    std::vector<std::vector<cplx>> lhs(nt, std::vector<cplx>(static_cast<std::size_t>(replicas)));
    std::vector<std::vector<cplx>> expo(nt, std::vector<cplx>(static_cast<std::size_t>(replicas)));
    std::vector<double> path(static_cast<std::size_t>(n_trunc) + 1);
    for (long r = 0; r < replicas; ++r)
    {
        // left side: running minimum of one walk
        path[0] = 0;
        for (std::size_t k = 1; k < path.size(); ++k)
            path[k] = path[k - 1] + sample(spec, rng);
        for (std::size_t it = 0; it < nt; ++it)
        {
            cplx acc = 0;
            double running_min = 0;
            for (std::size_t k = 0; k < path.size(); ++k)
            {
                running_min = std::min(running_min, path[k]);
                acc += qpow[k] * std::polar(1.0, t_values[it] * running_min);
            }
            lhs[it][static_cast<std::size_t>(r)] = acc;
        }
        // right side: negative parts of an independent walk
        for (std::size_t k = 1; k < path.size(); ++k)
            path[k] = path[k - 1] + sample(spec, rng);
        for (std::size_t it = 0; it < nt; ++it)
        {
            cplx acc = 0;
            for (std::size_t k = 1; k < path.size(); ++k)
                acc += qpow[k] / static_cast<double>(k) * std::polar(1.0, t_values[it] * std::min(path[k], 0.0));
            expo[it][static_cast<std::size_t>(r)] = acc;
        }
    }

    auto mean_and_se = [](const std::vector<cplx>& v) {
        // compensated sum: at t = 0 every replica is identical and the mean
        // must come back to within a few ulps
        cplx m = 0;
        cplx carry = 0;
        for (const auto& z : v)
        {
            const cplx y = z - carry;
            const cplx next = m + y;
            carry = (next - m) - y;
            m = next;
        }
        m /= static_cast<double>(v.size());
        double ss = 0;
        for (const auto& z : v)
            ss += std::norm(z - m);
        const double var = ss / static_cast<double>(v.size() - 1);
        return std::pair<cplx, double>{m, std::sqrt(var / static_cast<double>(v.size()))};
    };

    const double tail_n = qpow.back() * q / (1 - q);
    const double tail_k = qpow.back() * q / (static_cast<double>(n_trunc + 1) * (1 - q));
    const double trunc_bound = tail_n + std::expm1(tail_k) / (1 - q);

    std::vector<StatReport> out;
    for (std::size_t it = 0; it < nt; ++it)
    {
        const auto [lhat, se_l] = mean_and_se(lhs[it]);
        const auto [ahat, se_a] = mean_and_se(expo[it]);
        const cplx rhat = std::exp(ahat);
        const double se_r = std::abs(rhat) * se_a;
        const double t = t_values[it];
        const double stat_tol = t == 0.0 ? 0.0 : 3.0 * std::hypot(se_l, se_r);
        const double roundoff = 1e-12 * std::max(std::abs(lhat), std::abs(rhat));
        const double diff = std::abs(lhat - rhat);

        StatReport rep;
        rep.test_name = "spitzer_check";
        rep.statistic = diff;
        rep.sample_size = replicas;
        rep.passed = diff < stat_tol + trunc_bound + roundoff;
        rep.seed = rng.master_seed();
        rep.params = {{"t", t},
                      {"q", q},
                      {"n_trunc", n_trunc},
                      {"lhs_re", lhat.real()},
                      {"lhs_im", lhat.imag()},
                      {"rhs_re", rhat.real()},
                      {"rhs_im", rhat.imag()},
                      {"statistical_tolerance", stat_tol},
                      {"truncation_bound", trunc_bound}};
        out.push_back(std::move(rep));
    }
    return out;
}
}  // namespace cmin
