#include <bit>
#include <cstdint>
#include <vector>

#include <gtest/gtest.h>

#include "cmin/oracle.hpp"

using namespace cmin;

namespace
{
std::vector<Rational> ints(std::initializer_list<long> v)
{
    std::vector<Rational> out;
    for (long x : v)
        out.emplace_back(x);
    return out;
}
}  // namespace

TEST(NoTies, Examples)
{
    EXPECT_TRUE(check_no_ties(ints({1, 2, 4})));
    EXPECT_FALSE(check_no_ties(ints({1, 3, 2})));
    EXPECT_TRUE(check_no_ties(ints({5})));
}

TEST(NoTies, CapacityAndEmpty)
{
    std::vector<Rational> big;
    for (long k = 0; k < 21; ++k)
        big.emplace_back(1L << k);
    EXPECT_THROW(check_no_ties(big), CapacityError);
    EXPECT_THROW(check_no_ties(std::vector<Rational>{}), DomainError);
}

TEST(NoTies, AgreesWithPairwiseSubsetComparison)
{
    RngStream rng(110);
    int tied = 0;
    for (int rep = 0; rep < 300; ++rep)
    {
        const std::size_t n = static_cast<std::size_t>(rng.uniform_int(1, 7));
        std::vector<Rational> x;
        for (std::size_t i = 0; i < n; ++i)
            x.emplace_back(rng.uniform_int(-6, 6), rng.uniform_int(1, 3));
        bool distinct = true;
        const std::uint32_t subsets = std::uint32_t{1} << n;
        for (std::uint32_t a = 1; a < subsets && distinct; ++a)
            for (std::uint32_t b = a + 1; b < subsets && distinct; ++b)
            {
                Rational sa(0);
                Rational sb(0);
                for (std::size_t i = 0; i < n; ++i)
                {
                    if (a >> i & 1U)
                        sa += x[i];
                    if (b >> i & 1U)
                        sb += x[i];
                }
                distinct = sa / std::popcount(a) != sb / std::popcount(b);
            }
        tied += !distinct;
        ASSERT_EQ(check_no_ties(x), distinct) << "replica " << rep;
    }
    EXPECT_GT(tied, 0);
    EXPECT_LT(tied, 300);
}

TEST(NoTies, TwentyIncrements)
{
    std::vector<Rational> x;
    for (long k = 0; k < 20; ++k)
        x.emplace_back(Rational(1L << k, 3) - Rational(1, 7));
    EXPECT_FALSE(check_no_ties(x));
    x.back() += Rational(1, 1000003);
    // one perturbed term cannot break the tie among the first nineteen
    EXPECT_FALSE(check_no_ties(x));
}

TEST(CombinatorialLaws, SumToOne)
{
    for (int n = 1; n <= 9; ++n)
    {
        Rational total(0);
        for (const auto& [p, prob] : cycle_type_law(n))
            total += prob;
        EXPECT_EQ(total, Rational(1)) << "n = " << n;
        Rational ctotal(0);
        for (const auto& [c, prob] : cauchy_composition_law(n))
            ctotal += prob;
        EXPECT_EQ(ctotal, Rational(1)) << "n = " << n;
    }
    EXPECT_EQ(cauchy_composition_law(6).size(), 32u);
    EXPECT_EQ(partitions_of(6).size(), 11u);
}

TEST(CombinatorialLaws, CauchyLawValues)
{
    const auto law = cauchy_composition_law(3);
    EXPECT_EQ(law.at({3}), Rational(1, 3));
    EXPECT_EQ(law.at({1, 2}), Rational(1, 4));
    EXPECT_EQ(law.at({1, 1, 1}), Rational(1, 6));
}

TEST(Enumerate, OneTwoFour)
{
    const auto t = enumerate_walk_laws(ints({1, 2, 4}));
    EXPECT_EQ(t.orderings, 6);
    EXPECT_EQ(t.partitions.at({1, 1, 1}), 1);
    EXPECT_EQ(t.partitions.at({2, 1}), 3);
    EXPECT_EQ(t.partitions.at({3}), 2);
    EXPECT_TRUE(t.matches_partition_law);
}

TEST(Enumerate, SingleIncrement)
{
    const auto t = enumerate_walk_laws(ints({-3}));
    EXPECT_EQ(t.orderings, 1);
    EXPECT_EQ(t.partitions.at({1}), 1);
    EXPECT_TRUE(t.matches_partition_law);
}

TEST(Enumerate, SortedOrderingGivesUnitFaces)
{
    const std::vector<Rational> x{Rational(-7, 2), Rational(5, 3), Rational(11, 5), Rational(-13, 7), Rational(17, 11)};
    const auto t = enumerate_walk_laws(x);
    EXPECT_GE(t.compositions.at({1, 1, 1, 1, 1}), 1);
    EXPECT_TRUE(t.matches_partition_law);
}

TEST(Enumerate, TieAndCapacity)
{
    EXPECT_THROW(enumerate_walk_laws(ints({1, 3, 2})), TieError);
    std::vector<Rational> nine;
    for (long k = 0; k < 9; ++k)
        nine.emplace_back(1L << k);
    EXPECT_THROW(enumerate_walk_laws(nine), CapacityError);
}

TEST(Enumerate, TiedIncrementsBreakTheLaw)
{
    // negative control: the tie check exists because the law fails without it
    const auto x = ints({1, 3, 2});
    const auto total = factorial(3);
    std::map<Partition, long> tally;
    std::vector<int> perm{0, 1, 2};
    do
    {
        std::vector<Rational> o;
        for (int i : perm)
            o.push_back(x[static_cast<std::size_t>(i)]);
        auto p = integer_composition(minorant_of(make_walk(o)));
        std::sort(p.begin(), p.end(), std::greater<int>());
        ++tally[p];
    } while (std::next_permutation(perm.begin(), perm.end()));
    bool matches = true;
    for (const auto& [p, prob] : cycle_type_law(3))
        matches = matches && Rational(tally[p]) == total * prob;
    EXPECT_FALSE(matches);
}

TEST(Bijection3214, Examples)
{
    EXPECT_TRUE(verify_3214_bijection(ints({1, 2, 4})));
    EXPECT_TRUE(verify_3214_bijection(ints({7})));
    EXPECT_THROW(verify_3214_bijection(ints({1, 3, 2})), TieError);
    EXPECT_THROW(verify_3214_bijection(ints({1, 2, 4, 8, 16, 32, 64})), CapacityError);
}

TEST(StickLaw, ThreeExact)
{
    const auto s = stick_break_exact_law(3);
    EXPECT_EQ(s.law.at({3}), Rational(1, 3));
    EXPECT_EQ(s.law.at({2, 1}), Rational(1, 2));
    EXPECT_EQ(s.law.at({1, 1, 1}), Rational(1, 6));
    EXPECT_TRUE(s.matches_cycle_law);
}

TEST(StickLaw, Bounds)
{
    EXPECT_THROW(stick_break_exact_law(13), CapacityError);
    EXPECT_THROW(stick_break_exact_law(0), DomainError);
    EXPECT_TRUE(stick_break_exact_law(1).matches_cycle_law);
}

TEST(PairwiseOracle, SmallCases)
{
    const std::vector<double> t{0, 1, 2};
    EXPECT_EQ(pairwise_hull_vertices<double>(t, std::vector<double>{0, -1, 0}), (std::vector<std::size_t>{0, 1, 2}));
    EXPECT_EQ(pairwise_hull_vertices<double>(t, std::vector<double>{0, 1, 0}), (std::vector<std::size_t>{0, 2}));
    EXPECT_EQ(pairwise_hull_vertices<double>(t, std::vector<double>{0, 1, 2}), (std::vector<std::size_t>{0, 2}));
    const std::vector<double> one{0};
    EXPECT_THROW(pairwise_hull_vertices<double>(one, one), DomainError);
}
