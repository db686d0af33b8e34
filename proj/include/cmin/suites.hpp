#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "distributions.hpp"
#include "meander.hpp"
#include "minorant.hpp"
#include "oracle.hpp"
#include "parallel.hpp"
#include "stats.hpp"
#include "stickbreak_ppp.hpp"
#include "transform3214.hpp"
#include "walk.hpp"

namespace cmin
{
//! Pinned seed for acceptance runs.
inline constexpr std::uint64_t benchmark_seed = 20100915;

struct SuiteConfig
{
    std::uint64_t seed{benchmark_seed};
    int workers{1};
    std::optional<double> q;     //!< overrides the suite's q where it has one
    std::optional<long> samples; //!< overrides the replica count of Monte Carlo suites
    double level{default_level};
};

struct Suite
{
    std::string name;
    std::string description;
    std::function<std::vector<StatReport>(const SuiteConfig&)> run;
};

//! Generic rational increment sets used by the exact suites, one per n.
inline std::vector<Rational> generic_increments(int n)
{
    switch (n)
    {
        case 1: return {Rational(3, 2)};
        case 2: return {Rational(1), Rational(-2)};
        case 3: return {Rational(1), Rational(2), Rational(4)};
        case 4: return {Rational(-3), Rational(1, 2), Rational(5), Rational(11, 3)};
        case 5: return {Rational(-7, 2), Rational(5, 3), Rational(11, 5), Rational(-13, 7), Rational(17, 11)};
        case 6:
            return {Rational(-7, 2), Rational(5, 3), Rational(11, 5), Rational(-13, 7), Rational(17, 11), Rational(19, 13)};
        case 7:
            return {Rational(-7, 2),  Rational(5, 3),   Rational(11, 5),  Rational(-13, 7),
                    Rational(17, 11), Rational(19, 13), Rational(-23, 17)};
        default: break;
    }
    throw DomainError("generic_increments: only n in 1..7 is tabulated");
}

namespace suites
{
namespace detail
{
inline std::uint64_t stream_base(int suite_id, int part = 0)
{
    return (static_cast<std::uint64_t>(suite_id) << 40) | (static_cast<std::uint64_t>(part) << 32);
}

inline long replicas(const SuiteConfig& cfg, long fallback)
{
    return cfg.samples.value_or(fallback);
}

inline StatReport exact_report(std::string name, bool passed, double statistic, long n, const SuiteConfig& cfg)
{
    StatReport r;
    r.test_name = std::move(name);
    r.statistic = statistic;
    r.sample_size = n;
    r.passed = passed;
    r.seed = cfg.seed;
    return r;
}

inline StatReport tagged(StatReport r, std::string name, const SuiteConfig& cfg)
{
    r.test_name = std::move(name);
    r.seed = cfg.seed;
    return r;
}

inline double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}
}  // namespace detail

//! Exact partition law of walk minorants over all orderings.
inline std::vector<StatReport> partition_law(const SuiteConfig& cfg)
{
    std::vector<StatReport> out;
    const auto start = std::chrono::steady_clock::now();
    for (int n : {3, 4, 5, 6, 7})
    {
        const auto x = generic_increments(n);
        const auto tally = enumerate_walk_laws(x);
        auto r = detail::exact_report("partition_law_n" + std::to_string(n), tally.matches_partition_law, 0.0,
                                      tally.orderings, cfg);
        nlohmann::json counts = nlohmann::json::object();
        for (const auto& [p, c] : tally.partitions)
        {
            std::string key;
            for (int part : p)
                key += (key.empty() ? "" : ",") + std::to_string(part);
            counts[key] = c;
        }
        r.params = {{"n", n}, {"partition_counts", counts}};
        out.push_back(std::move(r));
    }
    const double elapsed = detail::seconds_since(start);
    auto timing = detail::exact_report("partition_law_runtime", elapsed < 60.0, elapsed, 5, cfg);
    timing.params = {{"limit_seconds", 60}};
    out.push_back(std::move(timing));
    return out;
}

inline std::vector<StatReport> bijection_3214(const SuiteConfig& cfg)
{
    std::vector<StatReport> out;
    const auto start = std::chrono::steady_clock::now();
    for (int n = 1; n <= 6; ++n)
    {
        const bool ok = verify_3214_bijection(generic_increments(n));
        long pairs = n;
        for (int k = 2; k <= n; ++k)
            pairs *= k;
        auto r = detail::exact_report("bijection_3214_n" + std::to_string(n), ok, 0.0, pairs, cfg);
        r.params = {{"n", n}};
        out.push_back(std::move(r));
    }
    const double elapsed = detail::seconds_since(start);
    auto timing = detail::exact_report("bijection_3214_runtime", elapsed < 60.0, elapsed, 6, cfg);
    timing.params = {{"limit_seconds", 60}};
    out.push_back(std::move(timing));
    return out;
}

//! Law of d - g for a uniform index u on Gaussian walks of length 20.
inline std::vector<StatReport> face_length_3214(const SuiteConfig& cfg)
{
    constexpr long n = 20;
    const long reps = detail::replicas(cfg, 100000);
    const auto m = parallel_replicas<long>(reps, cfg.workers, cfg.seed, detail::stream_base(3), [](long, RngStream& rng) {
        const auto walk = sample_walk(DistSpec::normal(), n, rng);
        const auto u = static_cast<std::size_t>(rng.uniform_int(1, n));
        const auto face = straddling_face(minorant_of(walk), u);
        return static_cast<long>(face.d - face.g);
    });
    std::vector<long> counts(n, 0);
    for (long v : m)
        ++counts[static_cast<std::size_t>(v - 1)];
    std::vector<double> probs(n, 1.0 / n);
    auto r = detail::tagged(chi_square_gof(counts, probs, cfg.level), "face_length_3214_uniform", cfg);
    r.params["walk_length"] = n;
    return {r};
}

inline std::vector<StatReport> permutation_law(const SuiteConfig& cfg)
{
    std::vector<StatReport> out;
    for (int n = 1; n <= 12; ++n)
    {
        const auto law = stick_break_exact_law(n);
        auto r = detail::exact_report("stick_break_law_n" + std::to_string(n), law.matches_cycle_law, 0.0,
                                      static_cast<long>(law.law.size()), cfg);
        r.params = {{"n", n}, {"partitions", law.law.size()}};
        out.push_back(std::move(r));
    }
    return out;
}

inline std::vector<StatReport> cauchy_composition(const SuiteConfig& cfg)
{
    constexpr int n = 6;
    const long reps = detail::replicas(cfg, 100000);
    const auto law = cauchy_composition_law(n);
    std::map<Composition, std::size_t> cell;
    std::vector<double> probs;
    for (const auto& [c, p] : law)
    {
        cell.emplace(c, probs.size());
        probs.push_back(static_cast<double>(p));
    }
    const auto comps = parallel_replicas<Composition>(reps, cfg.workers, cfg.seed, detail::stream_base(5),
                                                      [](long, RngStream& rng) {
                                                          const auto walk = sample_walk(DistSpec::cauchy(), n, rng);
                                                          return integer_composition(minorant_of(walk));
                                                      });
    std::vector<long> counts(probs.size(), 0);
    for (const auto& c : comps)
        ++counts[cell.at(c)];
    auto r = detail::tagged(chi_square_gof(counts, probs, cfg.level), "cauchy_composition_law", cfg);
    r.params["compositions"] = probs.size();
    return {r};
}

inline std::vector<StatReport> geometric_ppp(const SuiteConfig& cfg)
{
    const double q = cfg.q.value_or(0.6);
    const long reps = detail::replicas(cfg, 100000);
    const LogarithmicSampler lengths(q);
    struct Sample
    {
        long total{0};
        std::array<long, 3> per_length{};
    };
    const auto draws = parallel_replicas<Sample>(reps, cfg.workers, cfg.seed, detail::stream_base(6),
                                                 [&](long, RngStream& rng) {
                                                     const auto set = sample_ppp_geometric(DistSpec::normal(), lengths, rng);
                                                     Sample s;
                                                     for (const auto& p : set.points)
                                                     {
                                                         const long j = std::lround(p.length);
                                                         s.total += j;
                                                         if (j <= 3)
                                                             ++s.per_length[static_cast<std::size_t>(j - 1)];
                                                     }
                                                     return s;
                                                 });
    std::vector<StatReport> out;

    // (a) horizon law: P(total = k) = (1-q) q^k, cells 0..K-1 plus a tail cell
    constexpr long cells = 60;
    std::vector<long> counts(cells + 1, 0);
    long empty = 0;
    for (const auto& s : draws)
    {
        ++counts[static_cast<std::size_t>(std::min(s.total, cells))];
        if (s.total == 0)
            ++empty;
    }
    std::vector<double> probs(cells + 1);
    for (long k = 0; k < cells; ++k)
        probs[static_cast<std::size_t>(k)] = (1 - q) * std::pow(q, static_cast<double>(k));
    probs[cells] = std::pow(q, static_cast<double>(cells));
    auto a = detail::tagged(chi_square_gof(counts, probs, cfg.level), "geometric_ppp_total_length", cfg);
    a.params["q"] = q;
    out.push_back(std::move(a));

    // (b) Poisson counts at lengths 1, 2, 3
    for (std::size_t j = 1; j <= 3; ++j)
    {
        std::vector<long> c;
        c.reserve(draws.size());
        for (const auto& s : draws)
            c.push_back(s.per_length[j - 1]);
        const double mean = std::pow(q, static_cast<double>(j)) / static_cast<double>(j);
        auto b = detail::tagged(poisson_dispersion(c, mean, cfg.level), "geometric_ppp_count_length_" + std::to_string(j), cfg);
        b.params["q"] = q;
        out.push_back(std::move(b));
    }

    // (c) empty point set
    const double freq = static_cast<double>(empty) / static_cast<double>(reps);
    auto c = detail::exact_report("geometric_ppp_empty_frequency", std::abs(freq - (1 - q)) <= 0.005, freq, reps, cfg);
    c.params = {{"expected", 1 - q}, {"tolerance", 0.005}, {"q", q}};
    out.push_back(std::move(c));
    return out;
}

inline std::vector<StatReport> spitzer(const SuiteConfig& cfg)
{
    const double q = cfg.q.value_or(0.5);
    long n_trunc = 60;
    while (std::pow(q, static_cast<double>(n_trunc)) / (1 - q) >= 1e-6)
        ++n_trunc;
    const std::vector<double> ts{0.0, 0.5, 1.0, 2.0};
    RngStream rng(cfg.seed, detail::stream_base(7));
    auto reports = spitzer_check(DistSpec::normal(), q, ts, n_trunc, detail::replicas(cfg, 100000), rng);
    for (auto& r : reports)
    {
        const double t = r.params["t"];
        r.test_name = "spitzer_t_" + std::to_string(t).substr(0, 3);
        if (t == 0.0)
        {
            // both sides must equal 1/(1-q) up to truncation and round-off
            const double lhs = r.params["lhs_re"];
            const double rhs = r.params["rhs_re"];
            const double target = 1.0 / (1 - q);
            const double allowance = double(r.params["truncation_bound"]) + 1e-12 * target;
            r.passed = r.passed && std::abs(lhs - target) <= allowance && std::abs(rhs - target) <= allowance;
            r.params["closed_form"] = target;
        }
    }
    return reports;
}

//! Minimum of the stick-breaking Brownian minorant vs a fine grid walk.
inline std::vector<StatReport> levy_minimum(const SuiteConfig& cfg)
{
    const long reps = detail::replicas(cfg, 5000);
    constexpr long grid = 1L << 14;
    const auto from_sticks = parallel_replicas<double>(reps, cfg.workers, cfg.seed, detail::stream_base(8, 0),
                                                       [](long, RngStream& rng) {
                                                           return build_levy_minorant_01(LevySpec::brownian(), 1e-4, rng)
                                                               .minorant.min_value();
                                                       });
    const auto from_grid = parallel_replicas<double>(reps, cfg.workers, cfg.seed, detail::stream_base(8, 1),
                                                     [](long, RngStream& rng) {
                                                         double s = 0;
                                                         double lo = 0;
                                                         for (long i = 0; i < grid; ++i)
                                                         {
                                                             s += rng.normal();
                                                             lo = std::min(lo, s);
                                                         }
                                                         return lo / std::sqrt(static_cast<double>(grid));
                                                     });
    auto r = detail::tagged(ks_two_sample(from_sticks, from_grid, cfg.level), "levy_minorant_minimum_vs_grid", cfg);
    r.params["tol"] = 1e-4;
    r.params["grid_n"] = grid;
    return {r};
}

inline std::vector<StatReport> brownian_ppp(const SuiteConfig& cfg)
{
    const long reps = detail::replicas(cfg, 10000);
    constexpr double min_length = 1e-4;
    struct Sample
    {
        std::vector<double> scaled_slopes;
        double total{0};
    };
    const auto draws = parallel_replicas<Sample>(reps, cfg.workers, cfg.seed, detail::stream_base(9),
                                                 [](long, RngStream& rng) {
                                                     const auto set = sample_ppp_exp_levy(LevySpec::brownian(), 1.0, min_length, rng);
                                                     Sample s;
                                                     for (const auto& p : set.points)
                                                         s.scaled_slopes.push_back(p.slope() * std::sqrt(p.length));
                                                     s.total = set.total_length() + set.truncation.missing_mass_bound;
                                                     return s;
                                                 });
    std::vector<double> slopes;
    std::vector<double> totals;
    for (const auto& s : draws)
    {
        slopes.insert(slopes.end(), s.scaled_slopes.begin(), s.scaled_slopes.end());
        totals.push_back(s.total);
    }
    auto a = detail::tagged(ks_one_sample(slopes, DistSpec::normal(), cfg.level), "brownian_ppp_scaled_slopes", cfg);
    auto b = detail::tagged(ks_one_sample(totals, DistSpec::exponential(1.0), cfg.level), "brownian_ppp_total_length", cfg);
    a.params["replicas"] = reps;
    b.params["min_length"] = min_length;
    return {a, b};
}

inline std::vector<StatReport> meander(const SuiteConfig& cfg)
{
    std::vector<StatReport> out;
    const long rho_draws = detail::replicas(cfg, 100000);
    const auto rho0 = parallel_replicas<double>(rho_draws, cfg.workers, cfg.seed, detail::stream_base(10, 0),
                                                [](long, RngStream& rng) { return tau_rho_sequence(1.0, 1, rng).rhos[0]; });
    out.push_back(detail::tagged(ks_one_sample(rho0, DistSpec::rayleigh(), cfg.level), "meander_rho0_rayleigh", cfg));

    const long reps = cfg.samples ? std::max(10L, *cfg.samples / 20) : 5000;
    constexpr long grid = 1L << 14;
    const auto c_tau_rho = parallel_replicas<double>(reps, cfg.workers, cfg.seed, detail::stream_base(10, 1),
                                                     [](long, RngStream& rng) {
                                                         const auto seq = tau_rho_adaptive(1.0, rng, 1e-8, 10000);
                                                         return evaluate(minorant_from_tau_rho(seq, true), 0.5);
                                                     });
    const auto c_grid = parallel_replicas<double>(reps, cfg.workers, cfg.seed, detail::stream_base(10, 2),
                                                  [](long, RngStream& rng) {
                                                      const auto path = simulate_meander_grid(grid, rng);
                                                      return evaluate(lower_hull(path.times, path.values), 0.5);
                                                  });
    auto r = detail::tagged(ks_two_sample(c_tau_rho, c_grid, cfg.level), "meander_minorant_half_vs_grid", cfg);
    r.params["grid_n"] = grid;
    out.push_back(std::move(r));
    return out;
}

inline std::vector<StatReport> meander_chi_square(const SuiteConfig& cfg)
{
    const long reps = detail::replicas(cfg, 1000000);
    const auto x = parallel_replicas<double>(reps, cfg.workers, cfg.seed, detail::stream_base(11),
                                             [](long, RngStream& rng) { return bewid_lhs_sample(rng); });
    return {detail::tagged(ks_one_sample(x, DistSpec::chi_square_1(), cfg.level), "meander_first_coordinate_chi2", cfg)};
}

//! Finite proxy for dense slopes (alpha = 1) vs isolated slopes (alpha = 2).
inline std::vector<StatReport> stable_slopes(const SuiteConfig& cfg)
{
    constexpr long n_sticks = 10000;
    const SlopeWindow window{-1.0, 1.0};
    RngStream cauchy_rng(cfg.seed, detail::stream_base(12, 0));
    RngStream brownian_rng(cfg.seed, detail::stream_base(12, 1));
    const long cauchy = slope_window_count(LevySpec::cauchy(), n_sticks, window, cauchy_rng);
    const long brownian = slope_window_count(LevySpec::brownian(), n_sticks, window, brownian_rng);
    auto a = detail::exact_report("stable_slopes_cauchy_window_count", cauchy >= 4500 && cauchy <= 5500,
                                  static_cast<double>(cauchy), n_sticks, cfg);
    a.params = {{"lower", 4500}, {"upper", 5500}};
    auto b = detail::exact_report("stable_slopes_brownian_window_count", brownian <= 100, static_cast<double>(brownian),
                                  n_sticks, cfg);
    b.params = {{"upper", 100}};
    return {a, b};
}

inline std::vector<StatReport> infinite_walk(const SuiteConfig& cfg)
{
    constexpr long max_length = 5;
    const long reps = detail::replicas(cfg, 100000);
    const auto draws = parallel_replicas<std::array<long, max_length>>(
        reps, cfg.workers, cfg.seed, detail::stream_base(13), [](long, RngStream& rng) {
            const auto set = sample_ppp_infinite_walk(DistSpec::normal(1.0, 1.0), max_length, rng);
            std::array<long, max_length> c{};
            for (const auto& p : set.points)
                ++c[static_cast<std::size_t>(std::lround(p.length) - 1)];
            return c;
        });
    std::vector<StatReport> out;
    for (long j = 1; j <= max_length; ++j)
    {
        std::vector<long> c;
        c.reserve(draws.size());
        for (const auto& d : draws)
            c.push_back(d[static_cast<std::size_t>(j - 1)]);
        out.push_back(detail::tagged(poisson_dispersion(c, 0.5 / static_cast<double>(j), cfg.level),
                                     "infinite_walk_count_length_" + std::to_string(j), cfg));
    }
    return out;
}

/*!
 * Structural invariants of walk minorants: contiguity from t = 0, strictly
 * increasing slopes, C <= path with equality at vertices, and vertex
 * agreement with the quadratic pairwise oracle.
 */
inline std::vector<StatReport> structure(const SuiteConfig& cfg)
{
    const long reps = detail::replicas(cfg, 10000);
    const auto violations = parallel_replicas<long>(reps, cfg.workers, cfg.seed, detail::stream_base(14, 0),
                                                    [](long, RngStream& rng) {
                                                        const long n = rng.uniform_int(1, 200);
                                                        const auto walk = sample_walk(DistSpec::normal(), n, rng);
                                                        const auto m = minorant_of(walk);
                                                        long bad = 0;
                                                        if (m.faces.front().left_time != 0.0)
                                                            ++bad;
                                                        for (std::size_t i = 1; i < m.faces.size(); ++i)
                                                        {
                                                            if (m.faces[i].left_time != m.faces[i - 1].right_time)
                                                                ++bad;
                                                            if (!(m.faces[i - 1].slope < m.faces[i].slope))
                                                                ++bad;
                                                        }
                                                        std::size_t next_contact = 0;
                                                        for (std::size_t j = 0; j < walk.sums.size(); ++j)
                                                        {
                                                            const double c = evaluate(m, static_cast<double>(j));
                                                            const bool is_contact = next_contact < m.contact_indices.size()
                                                                                    && m.contact_indices[next_contact] == j;
                                                            if (is_contact)
                                                            {
                                                                ++next_contact;
                                                                if (c != walk.sums[j])
                                                                    ++bad;
                                                            }
                                                            else if (c > walk.sums[j] + 1e-9 * (1.0 + std::abs(walk.sums[j])))
                                                                ++bad;
                                                        }
                                                        return bad;
                                                    });
    const auto mismatches = parallel_replicas<long>(reps, cfg.workers, cfg.seed, detail::stream_base(14, 1),
                                                    [](long, RngStream& rng) {
                                                        const long n = rng.uniform_int(1, 50);
                                                        const auto walk = sample_walk(DistSpec::normal(), n, rng);
                                                        std::vector<double> times(walk.sums.size());
                                                        for (std::size_t j = 0; j < times.size(); ++j)
                                                            times[j] = static_cast<double>(j);
                                                        const auto oracle = pairwise_hull_vertices<double>(times, walk.sums);
                                                        return minorant_of(walk).contact_indices == oracle ? 0L : 1L;
                                                    });
    long v = 0;
    long mm = 0;
    for (long x : violations)
        v += x;
    for (long x : mismatches)
        mm += x;
    auto a = detail::exact_report("structure_invariants", v == 0, static_cast<double>(v), reps, cfg);
    a.params = {{"max_n", 200}};
    auto b = detail::exact_report("structure_vs_pairwise_oracle", mm == 0, static_cast<double>(mm), reps, cfg);
    b.params = {{"max_n", 50}};
    return {a, b};
}
}  // namespace suites

//! Registered verification suites, in acceptance-criterion order.
inline const std::vector<Suite>& registered_suites()
{
    static const std::vector<Suite> all{
        {"partition-law", "exact ranked face-length law over all orderings, n in 3..7", suites::partition_law},
        {"bijection-3214", "exhaustive 3214 bijection for generic rational increments, n <= 6", suites::bijection_3214},
        {"face-length-3214", "d - g uniform on {1..20} for Gaussian walks", suites::face_length_3214},
        {"permutation-law", "stick-breaking partition law equals cycle-type law, n <= 12", suites::permutation_law},
        {"cauchy-composition", "Cauchy walk composition law (1/k!) prod 1/n_i, n = 6", suites::cauchy_composition},
        {"geometric-ppp", "geometric-horizon face point process", suites::geometric_ppp},
        {"spitzer", "Spitzer identity, normal increments", suites::spitzer},
        {"levy-minimum", "stick-breaking Brownian minorant minimum vs grid walk", suites::levy_minimum},
        {"brownian-ppp", "exponential-horizon Brownian face point process", suites::brownian_ppp},
        {"meander", "(tau, rho) description of the meander minorant", suites::meander},
        {"meander-chi-square", "first-coordinate meander identity is chi-square(1)", suites::meander_chi_square},
        {"stable-slopes", "slope window counts, Cauchy vs Brownian", suites::stable_slopes},
        {"infinite-walk", "infinite-horizon Gaussian walk face counts", suites::infinite_walk},
        {"structure", "structural invariants and pairwise hull oracle", suites::structure},
    };
    return all;
}

inline const Suite* find_suite(const std::string& name)
{
    for (const auto& s : registered_suites())
        if (s.name == name)
            return &s;
    return nullptr;
}
}  // namespace cmin
