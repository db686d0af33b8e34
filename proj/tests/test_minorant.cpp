#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "cmin/minorant.hpp"
#include "cmin/oracle.hpp"

using namespace cmin;

namespace
{
Minorant<double> hull_of(const std::vector<double>& inc)
{
    return minorant_of(make_walk(inc));
}

std::vector<double> grid_times(std::size_t n)
{
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i)
        t[i] = static_cast<double>(i);
    return t;
}
}  // namespace

TEST(LowerHull, SingleStep)
{
    const auto m = hull_of({1.0});
    ASSERT_EQ(m.face_count(), 1u);
    EXPECT_EQ(m.faces[0].length, 1.0);
    EXPECT_EQ(m.faces[0].increment, 1.0);
}

TEST(LowerHull, ConvexPathKeepsEveryStep)
{
    const auto m = hull_of({-2, -1, 0, 3});
    ASSERT_EQ(m.face_count(), 4u);
    const std::vector<double> slopes{-2, -1, 0, 3};
    for (std::size_t i = 0; i < 4; ++i)
        EXPECT_EQ(m.faces[i].slope, slopes[i]);
}

TEST(LowerHull, TwoFaceExample)
{
    const auto m = hull_of({1, -3, 2, -1});
    ASSERT_EQ(m.face_count(), 2u);
    EXPECT_EQ(m.faces[0].length, 2.0);
    EXPECT_EQ(m.faces[0].increment, -2.0);
    EXPECT_EQ(m.faces[1].length, 2.0);
    EXPECT_EQ(m.faces[1].increment, 1.0);
    EXPECT_EQ(m.contact_indices, (std::vector<std::size_t>{0, 2, 4}));

    const std::vector<double> sums{0, 1, -2, 0, -1};
    const auto times = grid_times(5);
    EXPECT_EQ(pairwise_hull_vertices<double>(times, sums), m.contact_indices);
}

TEST(LowerHull, CollinearPointsAreNotVertices)
{
    const auto m = hull_of({1, 1, 1});
    ASSERT_EQ(m.face_count(), 1u);
    EXPECT_EQ(m.faces[0].length, 3.0);
}

TEST(LowerHull, UnsortedTimes)
{
    const std::vector<double> t{0, 2, 1};
    const std::vector<double> v{0, 1, 2};
    EXPECT_THROW(lower_hull(t, v), DomainError);
}

TEST(LowerHull, SizeMismatch)
{
    const std::vector<double> t{0, 1, 2};
    const std::vector<double> v{0, 1};
    EXPECT_THROW(lower_hull(t, v), DomainError);
}

TEST(LowerHull, ExactRationalMatchesPairwiseOracle)
{
    // small integer steps produce many collinear triples
    RngStream rng(40);
    for (int rep = 0; rep < 2000; ++rep)
    {
        const long n = rng.uniform_int(1, 25);
        std::vector<Rational> inc;
        for (long i = 0; i < n; ++i)
            inc.emplace_back(rng.uniform_int(-3, 3), rng.uniform_int(1, 2));
        const auto walk = make_walk(inc);
        std::vector<Rational> times;
        for (std::size_t i = 0; i < walk.sums.size(); ++i)
            times.emplace_back(static_cast<long>(i));
        const auto oracle = pairwise_hull_vertices<Rational>(times, walk.sums);
        ASSERT_EQ(minorant_of(walk).contact_indices, oracle) << "replica " << rep;
    }
}

TEST(LowerHull, RealTimesMatchPairwiseOracle)
{
    RngStream rng(41);
    for (int rep = 0; rep < 500; ++rep)
    {
        const std::size_t n = static_cast<std::size_t>(rng.uniform_int(2, 60));
        std::vector<double> t{0.0};
        std::vector<double> v{0.0};
        for (std::size_t i = 1; i < n; ++i)
        {
            t.push_back(t.back() + rng.exponential());
            v.push_back(v.back() + rng.normal());
        }
        const auto m = lower_hull(t, v);
        ASSERT_EQ(m.contact_indices, pairwise_hull_vertices<double>(t, v));
    }
}

TEST(Decompose, TwoFaceExample)
{
    const auto d = decompose(hull_of({1, -3, 2, -1}));
    EXPECT_EQ(d.composition, (std::vector<double>{2, 2}));
    EXPECT_EQ(d.partition, (std::vector<double>{2, 2}));
    EXPECT_EQ(d.slopes, (std::vector<double>{-1, 0.5}));
}

TEST(Decompose, SingleFace)
{
    const auto m = hull_of({3, -1, 1});
    const auto d = decompose(m);
    EXPECT_EQ(d.composition, (std::vector<double>{3}));
    EXPECT_EQ(d.partition, (std::vector<double>{3}));
    EXPECT_EQ(integer_composition(m), (std::vector<int>{3}));
}

TEST(Decompose, ConvexIncrements)
{
    EXPECT_EQ(integer_composition(hull_of({-2, -1, 0, 3})), (std::vector<int>{1, 1, 1, 1}));
}

TEST(Decompose, PartitionIsRanked)
{
    const auto d = decompose(hull_of({-1, 5, -4, 1, 1, 1}));
    EXPECT_TRUE(std::is_sorted(d.partition.rbegin(), d.partition.rend()));
    double total = 0;
    for (double l : d.composition)
        total += l;
    EXPECT_EQ(total, 6.0);
}

TEST(Evaluate, ContactsAndOrigin)
{
    const auto w = make_walk(std::vector<double>{1, -3, 2, -1});
    const auto m = minorant_of(w);
    EXPECT_EQ(evaluate(m, 0.0), 0.0);
    for (std::size_t k : m.contact_indices)
        EXPECT_EQ(evaluate(m, static_cast<double>(k)), w.sums[k]);
    EXPECT_DOUBLE_EQ(evaluate(m, 1.0), -1.0);
    EXPECT_DOUBLE_EQ(evaluate(m, 3.0), -1.5);
}

TEST(Evaluate, OutOfRange)
{
    const auto m = hull_of({1, -3, 2, -1});
    EXPECT_THROW(evaluate(m, -0.1), DomainError);
    EXPECT_THROW(evaluate(m, 4.1), DomainError);
}

TEST(Evaluate, ConvexInTime)
{
    RngStream rng(42);
    const auto w = sample_walk(DistSpec::normal(), 40, rng);
    const auto m = minorant_of(w);
    const double h = 0.37;
    for (double t = h; t + h <= 40.0; t += 0.23)
    {
        const double mid = evaluate(m, t);
        const double chord = 0.5 * (evaluate(m, t - h) + evaluate(m, t + h));
        EXPECT_LE(mid, chord + 1e-12);
    }
}

TEST(ChainFaces, ContiguousFromStart)
{
    const std::vector<std::pair<double, double>> pieces{{0.5, -1.0}, {0.2, 0.1}, {0.3, 0.2}};
    const auto m = chain_faces(std::span<const std::pair<double, double>>(pieces));
    ASSERT_EQ(m.face_count(), 3u);
    EXPECT_EQ(m.start_time(), 0.0);
    EXPECT_DOUBLE_EQ(m.end_time(), 1.0);
    EXPECT_DOUBLE_EQ(m.contact_values.back(), -0.7);
    EXPECT_DOUBLE_EQ(m.min_value(), -1.0);
}

TEST(FaceCsv, Format)
{
    std::ostringstream os;
    write_face_csv(os, hull_of({1, -3, 2, -1}));
    EXPECT_EQ(os.str(),
              "face_index,left_time,right_time,length,increment,slope\n"
              "0,0,2,2,-2,-1\n"
              "1,2,4,2,1,0.5\n");
}
