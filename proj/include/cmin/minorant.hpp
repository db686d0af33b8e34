#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "walk.hpp"

namespace cmin
{
//---------------------------------------------------------------------------//
/*!
 * One maximal linear piece of a convex minorant.
 *
 * length = right_time - left_time > 0 and slope = increment / length.
 */
template<class Real = double>
struct Face
{
    Real left_time;
    Real right_time;
    Real length;
    Real increment;
    Real slope;
};

/*!
 * Piecewise-linear convex function on [contact_times.front(),
 * contact_times.back()], stored as its faces in time order.
 *
 * contact_times/contact_values list the vertices (one more entry than
 * faces). contact_indices is filled when the minorant was built from a
 * sampled path and gives the position of each vertex in that path.
 */
template<class Real = double>
struct Minorant
{
    std::vector<Face<Real>> faces;
    std::vector<Real> contact_times;
    std::vector<Real> contact_values;
    std::vector<std::size_t> contact_indices;

    std::size_t face_count() const { return faces.size(); }
    Real start_time() const { return contact_times.front(); }
    Real end_time() const { return contact_times.back(); }

    //! Smallest vertex value, which is the minimum of the function.
    Real min_value() const { return *std::min_element(contact_values.begin(), contact_values.end()); }
};

//! Lengths in time order, ranked lengths (non-increasing) and slopes.
template<class Real = double>
struct FaceDecomposition
{
    std::vector<Real> composition;
    std::vector<Real> partition;
    std::vector<Real> slopes;
};

namespace detail
{
template<class Real>
Face<Real> make_face(const Real& t0, const Real& v0, const Real& t1, const Real& v1)
{
    Face<Real> f{t0, t1, t1 - t0, v1 - v0, Real(0)};
    f.slope = f.increment / f.length;
    return f;
}
}  // namespace detail

//---------------------------------------------------------------------------//
/*!
 * Greatest convex minorant of the points (times[i], values[i]).
 *
 * Single monotone-chain scan over the time-sorted points. Turns are
 * compared exactly (no tolerance); collinear vertices are dropped so every
 * face is maximal.
 */
template<class Real>
Minorant<Real> lower_hull(std::span<const Real> times, std::span<const Real> values)
{
    using detail::require;
    require<DomainError>(times.size() == values.size(), "lower_hull: times and values differ in length");
    require<DomainError>(times.size() >= 2, "lower_hull: need at least two points");
    require<DomainError>(times[0] == Real(0) && values[0] == Real(0), "lower_hull: path must start at (0, 0)");
    for (std::size_t i = 1; i < times.size(); ++i)
        require<DomainError>(times[i - 1] < times[i], "lower_hull: times must be strictly increasing");

    std::vector<std::size_t> hull;
    hull.reserve(times.size());
    for (std::size_t i = 0; i < times.size(); ++i)
    {
        while (hull.size() >= 2)
        {
            const std::size_t a = hull[hull.size() - 2];
            const std::size_t b = hull.back();
            const Real cross = (times[b] - times[a]) * (values[i] - values[a])
                               - (values[b] - values[a]) * (times[i] - times[a]);
            if (cross > Real(0))
                break;
            hull.pop_back();
        }
        hull.push_back(i);
    }

    Minorant<Real> m;
    m.contact_indices = hull;
    m.faces.reserve(hull.size() - 1);
    for (std::size_t k = 0; k < hull.size(); ++k)
    {
        m.contact_times.push_back(times[hull[k]]);
        m.contact_values.push_back(values[hull[k]]);
        if (k > 0)
        {
            const std::size_t a = hull[k - 1];
            const std::size_t b = hull[k];
            m.faces.push_back(detail::make_face(times[a], values[a], times[b], values[b]));
        }
    }
    return m;
}

template<class Real>
Minorant<Real> lower_hull(const std::vector<Real>& times, const std::vector<Real>& values)
{
    return lower_hull(std::span<const Real>(times), std::span<const Real>(values));
}

//! Convex minorant of a walk on the integer grid 0..n.
template<class Real>
Minorant<Real> minorant_of(const WalkPath<Real>& walk)
{
    std::vector<Real> times;
    times.reserve(walk.sums.size());
    for (std::size_t j = 0; j < walk.sums.size(); ++j)
        times.push_back(Real(static_cast<long>(j)));
    return lower_hull(std::span<const Real>(times), std::span<const Real>(walk.sums));
}

/*!
 * Chain faces given as (length, increment) pairs, in the given order, into a
 * contiguous piecewise-linear function starting at (start_time, start_value).
 *
 * Caller is responsible for the order; convexity holds iff slopes increase.
 */
template<class Real>
Minorant<Real> chain_faces(std::span<const std::pair<Real, Real>> pieces,
                           Real start_time = Real(0),
                           Real start_value = Real(0))
{
    detail::require<DomainError>(!pieces.empty(), "chain_faces: no faces");
    Minorant<Real> m;
    Real t = start_time;
    Real v = start_value;
    m.contact_times.push_back(t);
    m.contact_values.push_back(v);
    for (const auto& [length, increment] : pieces)
    {
        detail::require<DomainError>(length > Real(0), "chain_faces: face length must be > 0");
        Face<Real> f{t, t + length, length, increment, increment / length};
        t = f.right_time;
        v = v + increment;
        m.faces.push_back(f);
        m.contact_times.push_back(t);
        m.contact_values.push_back(v);
    }
    return m;
}

template<class Real>
FaceDecomposition<Real> decompose(const Minorant<Real>& m)
{
    FaceDecomposition<Real> d;
    for (const auto& f : m.faces)
    {
        d.composition.push_back(f.length);
        d.slopes.push_back(f.slope);
    }
    d.partition = d.composition;
    std::sort(d.partition.begin(), d.partition.end(), std::greater<Real>());
    return d;
}

//! Face lengths of an integer-grid minorant, in time order.
template<class Real>
std::vector<int> integer_composition(const Minorant<Real>& m)
{
    std::vector<int> out;
    if (!m.contact_indices.empty())
    {
        for (std::size_t k = 1; k < m.contact_indices.size(); ++k)
            out.push_back(static_cast<int>(m.contact_indices[k] - m.contact_indices[k - 1]));
        return out;
    }
    for (const auto& f : m.faces)
        out.push_back(static_cast<int>(static_cast<double>(f.length) + 0.5));
    return out;
}

//! Value of the minorant at time t; vertices return their stored value.
template<class Real>
Real evaluate(const Minorant<Real>& m, const Real& t)
{
    detail::require<DomainError>(!(t < m.start_time()) && !(m.end_time() < t), "evaluate: t outside the minorant's span");
    auto it = std::upper_bound(m.contact_times.begin(), m.contact_times.end(), t);
    std::size_t k = static_cast<std::size_t>(it - m.contact_times.begin());
    if (k == 0)
        k = 1;
    if (m.contact_times[k - 1] == t)
        return m.contact_values[k - 1];
    if (k >= m.contact_times.size())
        return m.contact_values.back();
    const auto& f = m.faces[k - 1];
    return m.contact_values[k - 1] + f.slope * (t - f.left_time);
}

//! Face CSV: face_index,left_time,right_time,length,increment,slope with
//! 17 significant digits.
inline void write_face_csv(std::ostream& os, const Minorant<double>& m)
{
    os << "face_index,left_time,right_time,length,increment,slope\n";
    char buf[256];
    for (std::size_t i = 0; i < m.faces.size(); ++i)
    {
        const auto& f = m.faces[i];
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%.17g,%.17g\n", i, f.left_time, f.right_time,
                      f.length, f.increment, f.slope);
        os << buf;
    }
}
}  // namespace cmin
