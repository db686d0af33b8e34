#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "cmin/stats.hpp"
#include "cmin/stickbreak_ppp.hpp"

using namespace cmin;

TEST(Kolmogorov, KnownQuantiles)
{
    EXPECT_NEAR(kolmogorov_survival(1.0), 0.26999967, 1e-7);
    EXPECT_NEAR(kolmogorov_survival(1.36), 0.0494, 5e-4);
    EXPECT_NEAR(kolmogorov_survival(1.95), 0.0010, 1e-4);
    EXPECT_EQ(kolmogorov_survival(0.0), 1.0);
    // both branches agree where they meet
    EXPECT_NEAR(kolmogorov_survival(1.1799999), kolmogorov_survival(1.18), 1e-6);
}

TEST(KsOneSample, ThreePointStatistic)
{
    const double d = ks_statistic({0.25, 0.5, 0.75}, [](double x) { return cdf(DistSpec::uniform(), x); });
    EXPECT_DOUBLE_EQ(d, 0.25);
}

TEST(KsOneSample, QuantileConstruction)
{
    const std::size_t n = 40;
    std::vector<double> x;
    for (std::size_t i = 1; i <= n; ++i)
        x.push_back((static_cast<double>(i) - 0.5) / n);
    const auto r = ks_one_sample(x, DistSpec::uniform());
    EXPECT_NEAR(r.statistic, 0.5 / n, 1e-15);
    EXPECT_TRUE(r.passed);
}

TEST(KsOneSample, UniformDrawsPass)
{
    RngStream rng(100);
    std::vector<double> x(100000);
    for (auto& v : x)
        v = rng.uniform();
    const auto r = ks_one_sample(x, DistSpec::uniform());
    ASSERT_TRUE(r.p_value.has_value());
    EXPECT_GE(*r.p_value, 0.001);
}

TEST(KsOneSample, ShiftedDrawsFail)
{
    RngStream rng(101);
    std::vector<double> x(20000);
    for (auto& v : x)
        v = rng.normal() + 0.1;
    EXPECT_FALSE(ks_one_sample(x, DistSpec::normal()).passed);
}

TEST(KsOneSample, TooFewSamples)
{
    EXPECT_THROW(ks_one_sample(std::vector<double>{0.1, 0.2}, DistSpec::uniform()), DomainError);
}

TEST(KsTwoSample, IdenticalAndDisjoint)
{
    std::vector<double> a;
    for (int i = 0; i < 20; ++i)
        a.push_back(i * 0.1);
    EXPECT_EQ(ks_two_sample(a, a).statistic, 0.0);
    const std::vector<double> zeros(12, 0.0);
    const std::vector<double> ones(12, 1.0);
    const auto r = ks_two_sample(zeros, ones);
    EXPECT_EQ(r.statistic, 1.0);
    EXPECT_FALSE(r.passed);
}

TEST(KsTwoSample, NormalVsRescaledStable)
{
    RngStream rng(102);
    std::vector<double> a(20000);
    std::vector<double> b(20000);
    for (auto& v : a)
        v = rng.normal();
    for (auto& v : b)
        v = sample(DistSpec::stable(2.0), rng) / std::sqrt(2.0);
    EXPECT_TRUE(ks_two_sample(a, b).passed);
}

TEST(KsTwoSample, ShortInput)
{
    const std::vector<double> few{1, 2, 3};
    const std::vector<double> many(20, 1.0);
    EXPECT_THROW(ks_two_sample(few, many), DomainError);
}

TEST(ChiSquare, Examples)
{
    const std::vector<double> half{0.5, 0.5};
    const auto a = chi_square_gof(std::vector<long>{5, 5}, half);
    EXPECT_EQ(a.statistic, 0.0);
    EXPECT_EQ(*a.p_value, 1.0);
    const auto b = chi_square_gof(std::vector<long>{10, 0}, half);
    EXPECT_EQ(b.statistic, 10.0);
    EXPECT_NEAR(*b.p_value, std::erfc(std::sqrt(5.0)), 1e-12);
}

TEST(ChiSquare, ProbabilityMismatch)
{
    EXPECT_THROW(chi_square_gof(std::vector<long>{5, 5}, std::vector<double>{0.5, 0.4}), DomainError);
    EXPECT_THROW(chi_square_gof(std::vector<long>{5, 5}, std::vector<double>{1.0}), DomainError);
}

TEST(ChiSquare, PoolsSmallCells)
{
    const auto r = chi_square_gof(std::vector<long>{50, 48, 1, 1}, std::vector<double>{0.49, 0.49, 0.01, 0.01});
    EXPECT_EQ(r.params["pooled_cells"], 2);
    EXPECT_TRUE(r.passed);
}

TEST(Poisson, ConstantCountsFail)
{
    const std::vector<long> c(1000, 2);
    EXPECT_FALSE(poisson_dispersion(c, 2.0).passed);
}

TEST(Poisson, GenuinePoissonPasses)
{
    std::mt19937_64 gen(103);
    std::poisson_distribution<long> pois(std::log(2.0));
    std::vector<long> c(100000);
    for (auto& v : c)
        v = pois(gen);
    EXPECT_TRUE(poisson_dispersion(c, std::log(2.0)).passed);
}

TEST(Poisson, SmallMeanPasses)
{
    std::mt19937_64 gen(104);
    std::poisson_distribution<long> pois(0.05);
    std::vector<long> c(100000);
    for (auto& v : c)
        v = pois(gen);
    EXPECT_TRUE(poisson_dispersion(c, 0.05).passed);
}

TEST(Poisson, WrongMeanFails)
{
    std::mt19937_64 gen(105);
    std::poisson_distribution<long> pois(1.2);
    std::vector<long> c(100000);
    for (auto& v : c)
        v = pois(gen);
    EXPECT_FALSE(poisson_dispersion(c, 1.0).passed);
}

TEST(Poisson, OverdispersedFails)
{
    std::mt19937_64 gen(106);
    std::negative_binomial_distribution<long> nb(2, 0.5);
    std::vector<long> c(100000);
    for (auto& v : c)
        v = nb(gen);
    EXPECT_FALSE(poisson_dispersion(c, 2.0).passed);
}

TEST(Poisson, GeometricPointCounts)
{
    RngStream rng(107);
    const LogarithmicSampler lengths(0.5);
    std::vector<long> c(100000);
    for (auto& v : c)
        v = static_cast<long>(sample_ppp_geometric(DistSpec::uniform(-1, 1), lengths, rng).points.size());
    EXPECT_TRUE(poisson_dispersion(c, std::log(2.0)).passed);
}

TEST(Poisson, Errors)
{
    EXPECT_THROW(poisson_dispersion(std::vector<long>(10, 1), 1.0), DomainError);
    EXPECT_THROW(poisson_dispersion(std::vector<long>(200, 1), 0.0), DomainError);
}

TEST(Spitzer, PassesForNormal)
{
    RngStream rng(108);
    const std::vector<double> t{0.0, 0.5, 1.0, 2.0};
    const auto reports = spitzer_check(DistSpec::normal(), 0.5, t, 60, 20000, rng);
    ASSERT_EQ(reports.size(), 4u);
    for (const auto& r : reports)
        EXPECT_TRUE(r.passed) << r.params.dump();
    EXPECT_NEAR(double(reports[0].params["lhs_re"]), 2.0, 1e-12);
    EXPECT_NEAR(double(reports[0].params["rhs_re"]), 2.0, 1e-12);
    EXPECT_EQ(double(reports[0].params["statistical_tolerance"]), 0.0);
}

TEST(Spitzer, FirstOrderInQ)
{
    // E exp(i t min(Z, 0)) has real part (1 + exp(-t^2/2)) / 2
    RngStream rng(109);
    const double q = 0.01;
    const std::vector<double> t{0.5, 1.0, 2.0};
    const auto reports = spitzer_check(DistSpec::normal(), q, t, 5, 20000, rng);
    for (std::size_t i = 0; i < t.size(); ++i)
    {
        const double first = 1.0 + q * 0.5 * (1.0 + std::exp(-t[i] * t[i] / 2));
        EXPECT_NEAR(double(reports[i].params["lhs_re"]), first, 5e-4);
        EXPECT_NEAR(double(reports[i].params["rhs_re"]), first, 5e-4);
    }
}

TEST(Spitzer, DetectsWrongIdentity)
{
    // a left side built from the wrong walk law must fail: compare normal
    // minima against exponents estimated for a shifted law
    RngStream a(110);
    RngStream b(110);
    const std::vector<double> t{1.0};
    const auto normal = spitzer_check(DistSpec::normal(), 0.5, t, 60, 20000, a);
    const auto shifted = spitzer_check(DistSpec::normal(0.3, 1.0), 0.5, t, 60, 20000, b);
    const std::complex<double> lhs(double(normal[0].params["lhs_re"]), double(normal[0].params["lhs_im"]));
    const std::complex<double> rhs(double(shifted[0].params["rhs_re"]), double(shifted[0].params["rhs_im"]));
    EXPECT_GT(std::abs(lhs - rhs), 3 * double(normal[0].params["statistical_tolerance"]));
}

TEST(Spitzer, ParameterErrors)
{
    RngStream rng(1);
    const std::vector<double> t{1.0};
    EXPECT_THROW(spitzer_check(DistSpec::normal(), 1.0, t, 60, 100, rng), DomainError);
    EXPECT_THROW(spitzer_check(DistSpec::normal(), 0.5, t, 5, 100, rng), DomainError);
    EXPECT_THROW(spitzer_check(DistSpec::normal(), 0.5, t, 60, 1, rng), DomainError);
    EXPECT_THROW(spitzer_check(DistSpec::normal(), 0.5, std::vector<double>{}, 60, 100, rng), DomainError);
}

TEST(Report, JsonSchema)
{
    StatReport r;
    r.test_name = "x";
    r.statistic = 1.5;
    r.p_value = 0.25;
    r.sample_size = 10;
    r.passed = true;
    r.seed = 7;
    const auto j = to_json(r);
    EXPECT_EQ(j.size(), 7u);
    for (const char* key : {"test", "statistic", "p_value", "n", "passed", "seed", "params"})
        EXPECT_TRUE(j.contains(key)) << key;
    r.p_value.reset();
    EXPECT_TRUE(to_json(r)["p_value"].is_null());
    EXPECT_TRUE(to_json(std::vector<StatReport>{r, r}).is_array());
}
