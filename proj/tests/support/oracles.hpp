#pragma once

// Independent reference implementations used only by the tests. Nothing
// here shares code with the enumeration, histogram or Xi fast paths.

#include <cstdint>
#include <functional>
#include <vector>

#include "lattheta/lattheta.hpp"

namespace oracle
{

using lattheta::IntegralLattice;
using lattheta::LatticeVector;
using lattheta::Rational;

inline std::int64_t quad2(const IntegralLattice &lat, const LatticeVector &v, const LatticeVector &w)
{
    std::int64_t s = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < w.size(); ++j)
            s += v[i] * lat.gram2()[i][j].get_si() * w[j];
    return s;
}

/// Every coordinate vector in the box [-radius, radius]^n with norm <= bound.
inline std::vector<std::vector<LatticeVector>> box_shells(const IntegralLattice &lat, std::int64_t bound, int radius)
{
    const std::size_t n = lat.rank();
    std::vector<std::vector<LatticeVector>> shells(static_cast<std::size_t>(bound) + 1);
    LatticeVector v(n, -radius);
    while (true) {
        const std::int64_t k = quad2(lat, v, v) / 2;
        if (k <= bound)
            shells[static_cast<std::size_t>(k)].push_back(v);
        std::size_t i = 0;
        while (i < n && v[i] == radius) {
            v[i] = -radius;
            ++i;
        }
        if (i == n)
            break;
        ++v[i];
    }
    for (auto &s : shells)
        std::sort(s.begin(), s.end());
    return shells;
}

/// p_m(c) ||v||^{2m} ||w||^{2m} from the cosine form, using c^2 = t^2/(4ab)
/// so only even powers of c appear.
inline Rational pair_term_by_cosine(long n, long m, std::int64_t a, std::int64_t b, std::int64_t t)
{
    if (a == 0 || b == 0)
        return m == 0 ? Rational(1) : Rational(0);
    const auto pm = lattheta::pm_poly(n, m);
    const Rational c2 = lattheta::make_rational(t * t, 4 * a * b);
    Rational p = 0;
    for (long k = 0; k <= m; ++k)
        p += pm[static_cast<std::size_t>(k)] * lattheta::pow_rat(c2, static_cast<unsigned long>(m - k));
    return p * lattheta::pow_rat(Rational(a * b), static_cast<unsigned long>(m));
}

/// Double loop over all pairs, no histograms.
inline lattheta::QSeries naive_pair(const IntegralLattice &lat, const std::vector<std::vector<LatticeVector>> &shells,
                                    long m, std::size_t order)
{
    lattheta::QSeries s(order);
    const long n = static_cast<long>(lat.rank());
    for (std::size_t k1 = 0; k1 <= order; ++k1)
        for (std::size_t k2 = 0; k1 + k2 <= order; ++k2)
            for (const auto &v : shells[k1])
                for (const auto &w : shells[k2])
                    s[k1 + k2] += pair_term_by_cosine(n, m, static_cast<std::int64_t>(k1), static_cast<std::int64_t>(k2),
                                                      quad2(lat, v, w));
    return s;
}

/// The Xi cubic form from rational inner products.
inline Rational xi(const IntegralLattice &lat, const LatticeVector &u, const LatticeVector &v, const LatticeVector &w)
{
    const Rational n(static_cast<long>(lat.rank()));
    auto ip = [&](const LatticeVector &x, const LatticeVector &y) { return lattheta::make_rational(quad2(lat, x, y), 2); };
    const Rational uu = ip(u, u), vv = ip(v, v), ww = ip(w, w);
    const Rational vw = ip(v, w), uw = ip(u, w), uv = ip(u, v);
    return 2 * uu * vv * ww - n * (uu * vw * vw + vv * uw * uw + ww * uv * uv) + n * n * vw * uw * uv;
}

inline lattheta::QSeries naive_triple(const IntegralLattice &lat, const std::vector<std::vector<LatticeVector>> &shells,
                                      std::size_t order)
{
    lattheta::QSeries s(order);
    const Rational n(static_cast<long>(lat.rank()));
    for (std::size_t k1 = 0; k1 <= order; ++k1)
        for (std::size_t k2 = 0; k1 + k2 <= order; ++k2)
            for (std::size_t k3 = 0; k1 + k2 + k3 <= order; ++k3)
                for (const auto &u : shells[k1])
                    for (const auto &v : shells[k2])
                        for (const auto &w : shells[k3])
                            s[k1 + k2 + k3] += n * xi(lat, u, v, w);
    return s;
}

/// The closed integer sum for delta_m, evaluated with <v,w> as a
/// rational and the factorial quotient formed directly.
inline Rational delta_by_display(long n, long m, Rational a, Rational b, Rational ip)
{
    Rational s = 0;
    for (long k = 0; k <= m; ++k) {
        Rational term = Rational(lattheta::factorial(2 * m)) /
                        Rational(lattheta::factorial(2 * m - 2 * k) * lattheta::factorial(k));
        term *= Rational(lattheta::pow_int(2, 2 * m - k));
        term *= lattheta::pow_rat(ip, 2 * m - 2 * k) * lattheta::pow_rat(a * b, k);
        for (long l = k; l < m; ++l)
            term *= n + 4 * m - 4 - 2 * l;
        s += (k % 2 == 0) ? term : Rational(-term);
    }
    return s;
}

} // namespace oracle
