#pragma once

#include <cstddef>
#include <vector>

#include "errors.hpp"
#include "minorant.hpp"
#include "walk.hpp"

namespace cmin
{
//! Endpoints g < u <= d of the minorant face that contains step u.
struct StraddlingFace
{
    std::size_t g;
    std::size_t d;
};

template<class Real>
struct TransformRecord
{
    std::size_t u;
    std::size_t g;
    std::size_t d;
    std::size_t m;  //!< d - g
    WalkPath<Real> output;
};

template<class Real>
struct InverseResult
{
    WalkPath<Real> walk;
    std::size_t u;
};

template<class Real>
struct CyclicShift
{
    std::vector<Real> shifted;
    std::size_t shift;
};

/*!
 * Face of an integer-grid minorant straddling index u, with the convention
 * g < u <= d: a vertex u belongs to the face on its left.
 */
template<class Real>
StraddlingFace straddling_face(const Minorant<Real>& m, std::size_t u)
{
    const auto& c = m.contact_indices;
    detail::require<DomainError>(c.size() >= 2, "straddling_face: minorant has no grid contact indices");
    detail::require<DomainError>(u >= 1 && u <= c.back(), "straddling_face: u must lie in 1..n");
    // first contact index >= u
    std::size_t k = 1;
    while (c[k] < u)
        ++k;
    return {c[k - 1], c[k]};
}

namespace detail
{
template<class Real>
void append_block(std::vector<Real>& out, const std::vector<Real>& x, std::size_t from, std::size_t to)
{
    // path fragment [from, to] carries increments X_{from+1}..X_{to}
    out.insert(out.end(), x.begin() + static_cast<std::ptrdiff_t>(from), x.begin() + static_cast<std::ptrdiff_t>(to));
}

/*!
 * Unique index k in [0, last] minimising S_k - k * slope for the walk with
 * the given increments (prefix sums over [begin, begin + len)). Throws
 * TieError if the minimum is attained twice.
 */
template<class Real>
std::size_t raised_line_contact(const std::vector<Real>& x,
                                std::size_t begin,
                                std::size_t last,
                                const Real& slope_num,
                                const Real& slope_den)
{
    // Compare S_k * den - k * num to stay exact for rational input.
    Real s(0);
    Real best = Real(0);
    std::size_t arg = 0;
    bool tie = false;
    for (std::size_t k = 1; k <= last; ++k)
    {
        s = s + x[begin + k - 1];
        const Real h = s * slope_den - Real(static_cast<long>(k)) * slope_num;
        if (h < best)
        {
            best = h;
            arg = k;
            tie = false;
        }
        else if (h == best)
        {
            tie = true;
        }
    }
    if (tie)
        throw TieError("raised line touches the path at two indices");
    return arg;
}
}  // namespace detail

/*!
 * The 3214 transform: cut the walk at 0 <= g < u <= d <= n, where (g, d) is
 * the minorant face straddling u, and concatenate the increment blocks in
 * the order [u,d], [g,u], [0,g], [d,n].
 */
template<class Real>
TransformRecord<Real> transform_3214(const WalkPath<Real>& walk, std::size_t u)
{
    const std::size_t n = walk.steps();
    detail::require<DomainError>(u >= 1 && u <= n, "transform_3214: u must lie in 1..n");
    const auto face = straddling_face(minorant_of(walk), u);
    const auto& x = walk.increments;

    std::vector<Real> out;
    out.reserve(n);
    detail::append_block(out, x, u, face.d);
    detail::append_block(out, x, face.g, u);
    detail::append_block(out, x, 0, face.g);
    detail::append_block(out, x, face.d, n);
    return {u, face.g, face.d, face.d - face.g, make_walk(out)};
}

/*!
 * Inverse of the 3214 transform given the transformed walk and m = d - g.
 *
 * The first m increments hold blocks 3|2 and the rest blocks 1|4. Both
 * splits are found by raising a line of slope S'_m / m under the
 * respective piece: under 3|2 the contact is searched in [0, m-1], under
 * 1|4 in [0, n-m].
 */
template<class Real>
InverseResult<Real> inverse_3214(const WalkPath<Real>& walk2, std::size_t m)
{
    const std::size_t n = walk2.steps();
    detail::require<DomainError>(m >= 1 && m <= n, "inverse_3214: m must lie in 1..n");
    const auto& y = walk2.increments;
    const Real num = walk2.sums[m];
    const Real den = Real(static_cast<long>(m));

    const std::size_t len3 = detail::raised_line_contact(y, 0, m - 1, num, den);
    const std::size_t len1 = detail::raised_line_contact(y, m, n - m, num, den);
    const std::size_t len2 = m - len3;

    std::vector<Real> x;
    x.reserve(n);
    detail::append_block(x, y, m, m + len1);   // block 1
    detail::append_block(x, y, len3, m);       // block 2
    detail::append_block(x, y, 0, len3);       // block 3
    detail::append_block(x, y, m + len1, n);   // block 4
    return {make_walk(x), len1 + len2};
}

/*!
 * Rotation of the increments whose walk has a one-face minorant: start
 * right after the unique index minimising S_k - k * S_n / n, k in [0, n-1].
 */
template<class Real>
CyclicShift<Real> cyclic_shift_to_excursion(const std::vector<Real>& increments)
{
    detail::require<DomainError>(!increments.empty(), "cyclic_shift_to_excursion: empty sequence");
    const std::size_t n = increments.size();
    Real total(0);
    for (const auto& v : increments)
        total = total + v;
    const std::size_t shift
        = detail::raised_line_contact(increments, 0, n - 1, total, Real(static_cast<long>(n)));

    CyclicShift<Real> r{{}, shift};
    r.shifted.reserve(n);
    detail::append_block(r.shifted, increments, shift, n);
    detail::append_block(r.shifted, increments, 0, shift);
    return r;
}
}  // namespace cmin
