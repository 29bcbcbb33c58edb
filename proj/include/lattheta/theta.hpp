#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "harmonic.hpp"
#include "lattice.hpp"
#include "poly.hpp"
#include "qseries.hpp"
#include "rational.hpp"

namespace lattheta
{

enum class Normalization
{
    Pair,    // sum_h Theta_h^2 over an orthonormal harmonic basis
    Triple,  // n^4 (n+2)(n+4) times the raw (1,1,1) invariant
    General, // the raw sum over orthonormal bases with the sphere integral
};

inline const char *to_string(Normalization n) noexcept
{
    switch (n) {
    case Normalization::Pair: return "pair";
    case Normalization::Triple: return "triple";
    case Normalization::General: return "general";
    }
    return "?";
}

struct InvariantRequest
{
    std::vector<unsigned> degrees; // non-decreasing m_1 <= ... <= m_k
    std::size_t order = 0;
    Normalization normalization = Normalization::General;
};

struct ComputeOptions
{
    unsigned threads = 1;
    /// Upper bound on the number of multi-index tuples theta_general may visit.
    std::uint64_t tuple_budget = 5'000'000;
};

/// Columns are the Euclidean coordinates of the basis vectors; B^T B must
/// equal the Gram matrix A/2.
using Embedding = RationalMatrix;

inline ModularMeta theta_meta(const IntegralLattice &lat, Rational weight, bool character = false)
{
    return {std::move(weight), lat.level(), character};
}

inline ShellTable shells_for(const IntegralLattice &lat, std::size_t order)
{
    return enumerate_shells(lat, static_cast<std::int64_t>(order));
}

/// sum_v q^{||v||^2}
inline QSeries theta_series(const ShellTable &shells, std::size_t order)
{
    QSeries s(order);
    for (std::size_t k = 0; k <= order; ++k)
        s[k] = static_cast<unsigned long>(shells.shell_size(static_cast<std::int64_t>(k)));
    s.set_meta(theta_meta(shells.lattice(), make_rational(static_cast<long>(shells.lattice().rank()), 2)));
    return s;
}

inline QSeries theta_series(const IntegralLattice &lat, std::size_t order)
{
    return theta_series(shells_for(lat, order), order);
}

/// Euclidean basis when A/2 has a rational factorization B^T B (all LDL
/// pivots are rational squares); nullopt otherwise.
inline std::optional<Embedding> rational_embedding(const IntegralLattice &lat)
{
    const std::size_t n = lat.rank();
    const RationalMatrix &q = lat.ldl();
    Embedding b(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!is_square(q(i, i)))
            return std::nullopt;
        const Rational s = sqrt_exact(q(i, i));
        b(i, i) = s;
        for (std::size_t j = i + 1; j < n; ++j)
            b(i, j) = s * q(i, j);
    }
    return b;
}

inline void check_embedding(const IntegralLattice &lat, const Embedding &b)
{
    if (b.cols() != lat.rank() || b.rows() != lat.rank())
        throw Error(ErrorKind::RankMismatch, "embedding has the wrong shape");
    if (b.transpose() * b != lat.gram())
        throw Error(ErrorKind::NoRationalEmbedding, "embedding does not reproduce the Gram matrix");
}

/// Sum_v h(v) q^{||v||^2} where h is written in lattice coordinates, i.e.
/// h(v) is evaluated on the integer coordinate vector directly.
inline QSeries spherical_theta_coords(const ShellTable &shells, const Poly &h, std::size_t order)
{
    if (h.rank() != shells.lattice().rank())
        throw Error(ErrorKind::RankMismatch, "polynomial rank differs from lattice rank");
    QSeries s(order);
    for (std::size_t k = 0; k <= order; ++k) {
        Rational acc = 0;
        for (const auto &v : shells.shell(static_cast<std::int64_t>(k)))
            acc += h.evaluate(std::span<const std::int64_t>(v));
        s[k] = acc;
    }
    return s;
}

/// Sum_v h(v) q^{||v||^2} for h in Euclidean coordinates. Needs a rational
/// embedding: the one supplied, else one derived from A/2 when it exists.
inline QSeries spherical_theta(const ShellTable &shells, const Poly &h, std::size_t order,
                               const std::optional<Embedding> &embedding = std::nullopt)
{
    const IntegralLattice &lat = shells.lattice();
    if (h.rank() != lat.rank())
        throw Error(ErrorKind::RankMismatch, "polynomial rank differs from lattice rank");
    std::optional<Embedding> b = embedding;
    if (!b)
        b = rational_embedding(lat);
    if (!b)
        throw Error(ErrorKind::NoRationalEmbedding,
                    "lattice '" + lat.name() + "' has no rational Euclidean basis; supply an embedding");
    check_embedding(lat, *b);
    QSeries s = spherical_theta_coords(shells, h.substitute_linear(*b), order);
    if (auto d = h.homogeneous_degree())
        s.set_meta(theta_meta(lat, Rational(static_cast<long>(*d)) + make_rational(static_cast<long>(lat.rank()), 2)));
    return s;
}

inline QSeries spherical_theta(const IntegralLattice &lat, const Poly &h, std::size_t order,
                               const std::optional<Embedding> &embedding = std::nullopt)
{
    return spherical_theta(shells_for(lat, order), h, order, embedding);
}

/// (2m)! 2^{2m} prod_{l=0}^{m-1} (n + 4m - 4 - 2l)
inline Integer pair_scale(long n, long m)
{
    Integer s = factorial(static_cast<unsigned long>(2 * m)) * pow_int(2, static_cast<unsigned long>(2 * m));
    for (long l = 0; l < m; ++l)
        s *= n + 4 * m - 4 - 2 * l;
    return s;
}

/// p_m(cos) ||v||^{2m} ||w||^{2m} written through a = ||v||^2, b = ||w||^2
/// and t = 2<v,w>; no cosine is ever formed.
inline Rational pair_contribution(const std::vector<Rational> &pm, long m, std::int64_t a, std::int64_t b,
                                  std::int64_t t)
{
    const Rational half_t = make_rational(t, 2);
    const Integer ab = Integer(a) * Integer(b);
    Rational s = 0;
    for (long k = 0; k <= m; ++k) {
        const auto coeff = pm[static_cast<std::size_t>(k)];
        const Rational term = coeff * pow_rat(half_t, static_cast<unsigned long>(2 * m - 2 * k)) *
                              Rational(pow_int(ab, static_cast<unsigned long>(k)));
        s += term;
    }
    return s;
}

/// delta_m(v, w) = pair_scale(n, m) * p_m(cos) ||v||^{2m} ||w||^{2m}, summed
/// directly in integers:
/// sum_k (-1)^k (2m)!/((2m-2k)! k!) 2^k t^{2m-2k} (ab)^k prod_{l=k}^{m-1}(n+4m-4-2l).
inline Integer delta_pair_scaled(const IntegralLattice &lat, const LatticeVector &v, const LatticeVector &w, long m)
{
    const long n = static_cast<long>(lat.rank());
    const Integer t = inner2(lat, v, w);
    const Integer ab = Integer(norm(lat, v)) * Integer(norm(lat, w));
    const Integer f2m = factorial(static_cast<unsigned long>(2 * m));
    Integer s = 0;
    for (long k = 0; k <= m; ++k) {
        Integer term = f2m / (factorial(static_cast<unsigned long>(2 * m - 2 * k)) * factorial(static_cast<unsigned long>(k)));
        term *= pow_int(2, static_cast<unsigned long>(k));
        term *= pow_int(t, static_cast<unsigned long>(2 * m - 2 * k));
        term *= pow_int(ab, static_cast<unsigned long>(k));
        for (long l = k; l < m; ++l)
            term *= n + 4 * m - 4 - 2 * l;
        s += (k % 2 == 0) ? term : Integer(-term);
    }
    return s;
}

/// Theta_{m,m} = sum_h Theta_h^2, accumulated per pair-histogram bucket.
inline QSeries theta_pair(const ShellTable &shells, long m, std::size_t order, const ComputeOptions &opts = {})
{
    const IntegralLattice &lat = shells.lattice();
    const long n = static_cast<long>(lat.rank());
    const auto pm = pm_poly(n, m);
    const auto top = static_cast<std::int64_t>(order);
    shells.precompute_histograms(top, opts.threads);
    QSeries s(order);
    for (std::int64_t k1 = 0; k1 <= top; ++k1)
        for (std::int64_t k2 = 0; k1 + k2 <= top; ++k2) {
            if (shells.shell(k1).empty() || shells.shell(k2).empty())
                continue;
            Rational acc = 0;
            for (const auto &[t, count] : shells.pair_histogram(k1, k2))
                acc += pair_contribution(pm, m, k1, k2, t) * Rational(static_cast<unsigned long>(count));
            s[static_cast<std::size_t>(k1 + k2)] += acc;
        }
    s.set_meta(theta_meta(lat, Rational(4 * m + n)));
    return s;
}

inline QSeries theta_pair(const IntegralLattice &lat, long m, std::size_t order, const ComputeOptions &opts = {})
{
    return theta_pair(shells_for(lat, order), m, order, opts);
}

/// Xi(u,v,w) = 2|u|^2|v|^2|w|^2 - n(|u|^2<v,w>^2 + |v|^2<u,w>^2 + |w|^2<u,v>^2)
///             + n^2 <v,w><u,w><u,v>
inline Rational xi_triple(const IntegralLattice &lat, const LatticeVector &u, const LatticeVector &v,
                          const LatticeVector &w)
{
    const Integer n = static_cast<long>(lat.rank());
    const Integer a = norm(lat, u), b = norm(lat, v), c = norm(lat, w);
    const Integer tvw = inner2(lat, v, w), tuw = inner2(lat, u, w), tuv = inner2(lat, u, v);
    // 8 Xi is integral
    const Integer eight_xi = 16 * a * b * c - 2 * n * (a * tvw * tvw + b * tuw * tuw + c * tuv * tuv) +
                             n * n * tvw * tuw * tuv;
    return make_rational(eight_xi, 8);
}

/// n * sum_{|u|^2+|v|^2+|w|^2 = k} Xi(u,v,w), summed as integers 8 Xi.
inline QSeries theta_triple(const ShellTable &shells, std::size_t order)
{
    const IntegralLattice &lat = shells.lattice();
    const std::size_t n = lat.rank();
    const auto nn = static_cast<std::int64_t>(n);
    const auto top = static_cast<std::int64_t>(order);
    std::vector<Integer> eight(order + 1, 0);
    std::vector<std::int64_t> au(n), av(n);
    for (std::int64_t k1 = 1; k1 <= top; ++k1)
        for (std::int64_t k2 = 1; k1 + k2 < top; ++k2)
            for (std::int64_t k3 = 1; k1 + k2 + k3 <= top; ++k3) {
                const auto &s1 = shells.shell(k1);
                const auto &s2 = shells.shell(k2);
                const auto &s3 = shells.shell(k3);
                if (s1.empty() || s2.empty() || s3.empty())
                    continue;
                __int128 acc = 0;
                for (const auto &u : s1) {
                    for (std::size_t j = 0; j < n; ++j) {
                        std::int64_t s = 0;
                        for (std::size_t i = 0; i < n; ++i)
                            s += u[i] * lat.a(i, j);
                        au[j] = s;
                    }
                    for (const auto &v : s2) {
                        std::int64_t tuv = 0;
                        for (std::size_t j = 0; j < n; ++j) {
                            std::int64_t s = 0;
                            for (std::size_t i = 0; i < n; ++i)
                                s += v[i] * lat.a(i, j);
                            av[j] = s;
                            tuv += au[j] * v[j];
                        }
                        const __int128 base = 16 * static_cast<__int128>(k1 * k2 * k3) - 2 * nn * k3 * tuv * tuv;
                        for (const auto &w : s3) {
                            std::int64_t tuw = 0, tvw = 0;
                            for (std::size_t j = 0; j < n; ++j) {
                                tuw += au[j] * w[j];
                                tvw += av[j] * w[j];
                            }
                            acc += base - 2 * static_cast<__int128>(nn) * (k1 * tvw * tvw + k2 * tuw * tuw) +
                                   static_cast<__int128>(nn * nn) * tvw * tuw * tuv;
                        }
                    }
                }
                // split the 128-bit sum into two 64-bit halves for GMP
                const bool neg = acc < 0;
                unsigned __int128 mag = neg ? static_cast<unsigned __int128>(-acc) : static_cast<unsigned __int128>(acc);
                Integer big = static_cast<unsigned long>(mag >> 64);
                big <<= 64;
                big += static_cast<unsigned long>(mag & ~0UL);
                eight[static_cast<std::size_t>(k1 + k2 + k3)] += neg ? Integer(-big) : big;
            }
    QSeries s(order);
    for (std::size_t k = 0; k <= order; ++k)
        s[k] = make_rational(eight[k] * static_cast<long>(n), 8);
    s.set_meta(theta_meta(lat, make_rational(static_cast<long>(n) + 12, 2), true));
    return s;
}

inline QSeries theta_triple(const IntegralLattice &lat, std::size_t order)
{
    return theta_triple(shells_for(lat, order), order);
}

inline Integer binomial_count(std::size_t n, unsigned d)
{
    return binomial_truncated(static_cast<long>(n + d) - 1, static_cast<long>(d));
}

namespace detail
{

// Shared driver for both evaluation routes of the general invariant:
// theta(I) is the spherical theta series of the projected basis element
// for multi-index I, and moment(J) integrates the product of the dual
// basis elements (before the 1/I! weights) over the sphere.
template <typename ThetaOf, typename MomentOf>
QSeries general_sum(std::size_t n, const std::vector<unsigned> &degrees, std::size_t order,
                    const ComputeOptions &opts, ThetaOf &&theta_of, MomentOf &&moment_of)
{
    Integer tuples = 1;
    for (unsigned m : degrees)
        tuples *= binomial_count(n, 2 * m);
    if (tuples > Integer(static_cast<unsigned long>(opts.tuple_budget)))
        throw Error(ErrorKind::ResourceLimit, tuples.get_str() + " multi-index tuples exceed the budget of " +
                                                  std::to_string(opts.tuple_budget));

    std::vector<std::vector<MultiIndex>> bases;
    std::vector<std::vector<Rational>> weights;
    std::vector<std::vector<const QSeries *>> series;
    std::map<MultiIndex, QSeries> memo;
    for (unsigned m : degrees) {
        bases.push_back(multi_indices(n, 2 * m));
        weights.emplace_back();
        series.emplace_back();
        for (const auto &idx : bases.back()) {
            weights.back().push_back(make_rational(1, index_factorial(idx)));
            auto it = memo.find(idx);
            if (it == memo.end())
                it = memo.emplace(idx, theta_of(idx)).first;
            series.back().push_back(&it->second);
        }
    }

    const std::size_t k = degrees.size();
    QSeries total(order);
    std::vector<std::size_t> pick(k, 0);
    while (true) {
        MultiIndex sum(n, 0);
        Rational weight = 1;
        bool zero = false;
        for (std::size_t l = 0; l < k; ++l) {
            sum = sum + bases[l][pick[l]];
            weight *= weights[l][pick[l]];
            if (series[l][pick[l]]->is_zero())
                zero = true;
        }
        if (!zero) {
            const Rational moment = moment_of(sum);
            if (moment != 0) {
                QSeries prod = *series[0][pick[0]];
                for (std::size_t l = 1; l < k; ++l)
                    prod = prod * *series[l][pick[l]];
                total += prod * (weight * moment);
            }
        }
        bool done = true;
        for (std::size_t l = k; l-- > 0;) {
            if (++pick[l] < bases[l].size()) {
                done = false;
                break;
            }
            pick[l] = 0;
        }
        if (done)
            break;
    }
    return total;
}

inline ModularMeta general_meta(const IntegralLattice &lat, const std::vector<unsigned> &degrees)
{
    long msum = 0;
    for (unsigned m : degrees)
        msum += m;
    const long k = static_cast<long>(degrees.size());
    return theta_meta(lat, make_rational(static_cast<long>(lat.rank()) * k, 2) + Rational(2 * msum), k % 2 == 1);
}

inline void check_degrees(const std::vector<unsigned> &degrees)
{
    if (degrees.empty())
        throw Error(ErrorKind::RankMismatch, "at least one degree is required");
}

} // namespace detail

/// Theta_{m_1..m_k} as the sum over monomial tuples (I_1..I_k), |I_l| = 2m_l,
/// of prod_l Theta_{P_harm(z^{I_l})} times the sphere average of
/// prod_l y^{I_l}/I_l!. The basis z^I is the lattice-coordinate monomial
/// basis and y = B^T x its dual linear forms, so the computation needs only
/// the Gram matrix and stays exact for lattices with no rational embedding.
inline QSeries theta_general(const ShellTable &shells, const std::vector<unsigned> &degrees, std::size_t order,
                             const ComputeOptions &opts = {})
{
    detail::check_degrees(degrees);
    const IntegralLattice &lat = shells.lattice();
    const std::size_t n = lat.rank();
    const RationalMatrix g = lat.gram();
    RationalMatrix ginv = lat.inverse_gram2();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            ginv(i, j) *= 2;
    const Metric metric = Metric::skew(g, ginv);
    SkewSphereMoments moments(g);

    QSeries s = detail::general_sum(
        n, degrees, order, opts,
        [&](const MultiIndex &idx) {
            const Poly h = harmonic_project(Poly::monomial(idx), degree(idx), metric);
            return spherical_theta_coords(shells, h, order);
        },
        [&](const MultiIndex &sum) { return moments.average(sum); });
    s.set_meta(detail::general_meta(lat, degrees));
    return s;
}

inline QSeries theta_general(const IntegralLattice &lat, const std::vector<unsigned> &degrees, std::size_t order,
                             const ComputeOptions &opts = {})
{
    return theta_general(shells_for(lat, order), degrees, order, opts);
}

/// The same invariant evaluated literally in Euclidean coordinates through
/// an explicit rational embedding: Theta_{P_harm(x^I)} with the standard
/// monomial sphere integrals.
inline QSeries theta_general_embedded(const ShellTable &shells, const std::vector<unsigned> &degrees,
                                      std::size_t order, const Embedding &embedding, const ComputeOptions &opts = {})
{
    detail::check_degrees(degrees);
    const IntegralLattice &lat = shells.lattice();
    check_embedding(lat, embedding);
    const std::size_t n = lat.rank();
    const auto nl = static_cast<long>(n);
    const Metric euclid = Metric::euclidean(n);
    QSeries s = detail::general_sum(
        n, degrees, order, opts,
        [&](const MultiIndex &idx) {
            const Poly h = harmonic_project(Poly::monomial(idx), degree(idx), euclid);
            return spherical_theta(shells, h, order, embedding);
        },
        [&](const MultiIndex &sum) { return spherical_integral(nl, sum); });
    s.set_meta(detail::general_meta(lat, degrees));
    return s;
}

/// prod_{j=0}^{2m-1} 1/(n + 2j): ratio of the sphere product to the
/// differential pairing on Harm_{2m}.
inline Rational harmonic_sphere_ratio(long n, long m)
{
    Integer d = 1;
    for (long j = 0; j < 2 * m; ++j)
        d *= n + 2 * j;
    return make_rational(1, d);
}

/// n^4 (n+2)(n+4)
inline Integer triple_scale(long n)
{
    return pow_int(n, 4) * (n + 2) * (n + 4);
}

/// Dispatch on the requested normalization. Pair needs degrees (m, m),
/// Triple needs (1, 1, 1).
inline QSeries compute_invariant(const ShellTable &shells, const InvariantRequest &req, const ComputeOptions &opts = {})
{
    detail::check_degrees(req.degrees);
    const auto &d = req.degrees;
    switch (req.normalization) {
    case Normalization::Pair:
        if (d.size() == 1 && d[0] == 0)
            return theta_series(shells, req.order);
        if (d.size() != 2 || d[0] != d[1])
            throw Error(ErrorKind::RankMismatch, "pair normalization needs degrees m,m");
        return theta_pair(shells, d[0], req.order, opts);
    case Normalization::Triple:
        if (d != std::vector<unsigned>{1, 1, 1})
            throw Error(ErrorKind::RankMismatch, "triple normalization needs degrees 1,1,1");
        return theta_triple(shells, req.order);
    case Normalization::General:
        if (d.size() == 1 && d[0] == 0)
            return theta_series(shells, req.order);
        return theta_general(shells, d, req.order, opts);
    }
    return {};
}

/// Normalization the command line uses when none is requested.
inline Normalization default_normalization(const std::vector<unsigned> &degrees)
{
    if (degrees.size() == 2 && degrees[0] == degrees[1])
        return Normalization::Pair;
    if (degrees == std::vector<unsigned>{1, 1, 1})
        return Normalization::Triple;
    return Normalization::General;
}

struct IntegrityCheck
{
    bool pass = true;
    std::optional<std::size_t> first_bad; // q-power of the first non-integer
    Rational offending;
};

struct IntegralityReport
{
    long m = 0;
    std::int64_t min_norm = 0;
    IntegrityCheck pair;                  // pair_scale * q^{-2 l0} * Theta_{m,m}
    std::optional<IntegrityCheck> triple; // 8/n * Theta_{1,1,1}
    bool pass() const { return pair.pass && (!triple || triple->pass); }
};

inline IntegrityCheck check_integral(const QSeries &s)
{
    IntegrityCheck c;
    for (std::size_t k = 0; k <= s.order(); ++k)
        if (!is_integer(s[k])) {
            c.pass = false;
            c.first_bad = k;
            c.offending = s[k];
            break;
        }
    return c;
}

/// `triple_order` caps the (cubic-cost) triple check separately; zero
/// skips it.
inline IntegralityReport integrality_report(const ShellTable &shells, long m, std::size_t order,
                                            const ComputeOptions &opts = {},
                                            std::optional<std::size_t> triple_order = std::nullopt)
{
    const IntegralLattice &lat = shells.lattice();
    const long n = static_cast<long>(lat.rank());
    IntegralityReport r;
    r.m = m;
    r.min_norm = shells.min_norm();

    const QSeries pair = theta_pair(shells, m, order, opts) * Rational(pair_scale(n, m));
    // divide by q^{2 l0}: every coefficient below 2 l0 must vanish
    const auto shift = static_cast<std::size_t>(2 * r.min_norm);
    QSeries shifted(order);
    for (std::size_t k = 0; k <= order; ++k) {
        if (k < shift) {
            if (pair[k] != 0 && r.pair.pass) {
                r.pair.pass = false;
                r.pair.first_bad = k;
                r.pair.offending = pair[k];
            }
            continue;
        }
        shifted[k - shift] = pair[k];
    }
    if (r.pair.pass)
        r.pair = check_integral(shifted);

    const std::size_t torder = std::min(order, triple_order.value_or(order));
    if (torder > 0)
        r.triple = check_integral(theta_triple(shells, torder) * make_rational(8, n));
    return r;
}

inline IntegralityReport integrality_report(const IntegralLattice &lat, long m, std::size_t order,
                                            const ComputeOptions &opts = {},
                                            std::optional<std::size_t> triple_order = std::nullopt)
{
    return integrality_report(shells_for(lat, order), m, order, opts, triple_order);
}

} // namespace lattheta
