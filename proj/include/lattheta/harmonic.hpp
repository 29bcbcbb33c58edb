#pragma once

#include <cstddef>
#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "error.hpp"
#include "poly.hpp"
#include "rational.hpp"

namespace lattheta
{

/// a_{k,m} = 2^k k! prod_{l=1}^{k} (n + 4m - 2k - 2l), the squared norm
/// factor of r^{2k} Harm_{2m-2k} inside A_{2m}.
inline Integer a_km(long n, long k, long m)
{
    Integer a = pow_int(2, static_cast<unsigned long>(k)) * factorial(static_cast<unsigned long>(k));
    for (long l = 1; l <= k; ++l)
        a *= n + 4 * m - 2 * k - 2 * l;
    return a;
}

/// b_{k,d,m} = prod_{l=0}^{k-1} (2l - 2d)(n - 2 + 2d - 2l + 2m), the
/// eigenvalue of r^{2k} Delta^k on r^{2d} Harm_m. Zero exactly when k > d.
inline Integer b_kdm(long n, long k, long d, long m)
{
    Integer b = 1;
    for (long l = 0; l < k; ++l)
        b *= Integer(2 * l - 2 * d) * Integer(n - 2 + 2 * d - 2 * l + 2 * m);
    return b;
}

/// Coefficients r_{k,m} of P_harm,m = sum_k r_{k,m} r^{2k} Delta^k.
struct HarmonicProjector
{
    long rank = 0;
    long degree = 0;
    std::vector<Rational> coeffs;
};

/// r_{k,m} = 1 / (2^k k! prod_{l=0}^{k-1} (n + 2m - 4 - 2l)).
inline HarmonicProjector projector(long n, long m)
{
    HarmonicProjector p{n, m, {}};
    Integer denom = 1;
    p.coeffs.emplace_back(1);
    for (long k = 1; k <= m / 2; ++k) {
        const long l = k - 1;
        const long factor = n + 2 * m - 4 - 2 * l;
        if (factor == 0)
            throw Error(ErrorKind::SingularProjector, "n + 2m - 4 - 2l vanishes for n=" + std::to_string(n) +
                                                          ", m=" + std::to_string(m) + ", l=" + std::to_string(l));
        denom *= Integer(2 * k) * factor;
        p.coeffs.push_back(make_rational(1, denom));
    }
    return p;
}

/// The projector coefficients from the defining recurrence
/// r_{d,m} = -1/b_{d,d,m-2d} sum_{k<d} r_{k,m} b_{k,d,m-2d}, kept
/// independent of the closed form so the two can be compared.
inline std::vector<Rational> projector_by_recurrence(long n, long m)
{
    std::vector<Rational> r{Rational(1)};
    for (long d = 1; d <= m / 2; ++d) {
        Rational s = 0;
        for (long k = 0; k < d; ++k)
            s += r[static_cast<std::size_t>(k)] * Rational(b_kdm(n, k, d, m - 2 * d));
        const Integer bdd = b_kdm(n, d, d, m - 2 * d);
        if (bdd == 0)
            throw Error(ErrorKind::SingularProjector, "b_{d,d,m-2d} vanishes");
        r.push_back(-s / Rational(bdd));
    }
    return r;
}

/// Geometry of the coordinate system the polynomials live in. The default
/// is Euclidean; a lattice basis B gives x = B z with metric G = B^T B,
/// so r^2 = z^T G z and the Laplacian uses G^{-1}.
struct Metric
{
    std::size_t rank = 0;
    std::optional<RationalMatrix> gram;
    std::optional<RationalMatrix> gram_inverse;

    static Metric euclidean(std::size_t n) { return {n, std::nullopt, std::nullopt}; }

    static Metric skew(const RationalMatrix &g, const RationalMatrix &ginv) { return {g.rows(), g, ginv}; }

    Poly r2() const { return gram ? Poly::quadratic_form(*gram) : Poly::r2(rank); }
    Poly laplace(const Poly &f) const { return gram_inverse ? laplacian(f, *gram_inverse) : laplacian(f); }
};

/// P_harm,m(f) = sum_k r_{k,m} r^{2k} Delta^k f for f homogeneous of degree m.
inline Poly harmonic_project(const Poly &f, unsigned m, const Metric &metric)
{
    if (!f.is_homogeneous_of(m))
        throw Error(ErrorKind::NotHomogeneous, "polynomial is not homogeneous of degree " + std::to_string(m));
    if (f.is_zero())
        return f;
    const auto proj = projector(static_cast<long>(metric.rank), m);
    const Poly r2 = metric.r2();
    Poly out = f;
    Poly lap = f;
    Poly rpow = Poly::constant(f.rank(), 1);
    for (std::size_t k = 1; k < proj.coeffs.size(); ++k) {
        lap = metric.laplace(lap);
        rpow = rpow * r2;
        if (lap.is_zero())
            break;
        out += rpow * lap * proj.coeffs[k];
    }
    return out;
}

inline Poly harmonic_project(const Poly &f)
{
    auto d = f.homogeneous_degree();
    if (!d) {
        if (f.is_zero())
            return f;
        throw Error(ErrorKind::NotHomogeneous, "polynomial mixes degrees");
    }
    return harmonic_project(f, *d, Metric::euclidean(f.rank()));
}

/// prod_{j=0}^{d-1} (n + 2j): the Gaussian moment of r^{2d} in rank n.
inline Integer sphere_normalizer(long n, unsigned d)
{
    Integer p = 1;
    for (unsigned j = 0; j < d; ++j)
        p *= n + 2 * static_cast<long>(j);
    return p;
}

inline Integer double_factorial_odd(unsigned a)
{
    // (2a - 1)!!
    Integer p = 1;
    for (unsigned j = 1; j <= a; ++j)
        p *= 2 * j - 1;
    return p;
}

/// Average of x^I over the unit sphere S^{n-1} with the normalized measure.
inline Rational spherical_integral(long n, const MultiIndex &idx)
{
    unsigned half = 0;
    Integer num = 1;
    for (unsigned e : idx) {
        if (e % 2 != 0)
            return 0;
        num *= double_factorial_odd(e / 2);
        half += e / 2;
    }
    return make_rational(num, sphere_normalizer(n, half));
}

/// Sphere averages of monomials y^J for y = B^T x, i.e. linear forms with
/// covariance `gram`: Isserlis moments divided by the r^{2d} moment.
/// Thread-safe memo.
class SkewSphereMoments
{
public:
    explicit SkewSphereMoments(RationalMatrix gram) : gram_(std::move(gram)) {}

    Rational average(const MultiIndex &idx)
    {
        const unsigned d = degree(idx);
        if (d % 2 != 0)
            return 0;
        return gaussian(idx) / Rational(sphere_normalizer(static_cast<long>(gram_.rows()), d / 2));
    }

    /// E[y^J] for y ~ N(0, gram).
    Rational gaussian(const MultiIndex &idx)
    {
        if (degree(idx) % 2 != 0)
            return 0;
        {
            std::lock_guard lock(mutex_);
            auto it = memo_.find(idx);
            if (it != memo_.end())
                return it->second;
        }
        Rational value;
        std::size_t first = 0;
        while (first < idx.size() && idx[first] == 0)
            ++first;
        if (first == idx.size()) {
            value = 1;
        } else {
            MultiIndex rest = idx;
            --rest[first];
            value = 0;
            for (std::size_t j = 0; j < idx.size(); ++j) {
                if (rest[j] == 0 || gram_(first, j) == 0)
                    continue;
                MultiIndex sub = rest;
                const unsigned mult = sub[j];
                --sub[j];
                value += gram_(first, j) * mult * gaussian(sub);
            }
        }
        std::lock_guard lock(mutex_);
        memo_.emplace(idx, value);
        return value;
    }

private:
    RationalMatrix gram_;
    std::mutex mutex_;
    std::map<MultiIndex, Rational> memo_;
};

/// p_m(c) as coefficients of c^{2m-2k}, k = 0..m:
/// (-1)^k / ((2m-2k)! k! 2^k prod_{l<k} (n + 4m - 4 - 2l)).
inline std::vector<Rational> pm_poly(long n, long m)
{
    std::vector<Rational> out;
    Integer prod = 1;
    for (long k = 0; k <= m; ++k) {
        if (k > 0) {
            const long factor = n + 4 * m - 4 - 2 * (k - 1);
            if (factor == 0)
                throw Error(ErrorKind::SingularCoefficient, "n + 4m - 4 - 2l vanishes for n=" + std::to_string(n) +
                                                                ", m=" + std::to_string(m));
            prod *= factor;
        }
        const Integer den = factorial(static_cast<unsigned long>(2 * m - 2 * k)) *
                            factorial(static_cast<unsigned long>(k)) * pow_int(2, static_cast<unsigned long>(k)) * prod;
        out.push_back(make_rational(k % 2 == 0 ? 1 : -1, den));
    }
    return out;
}

/// Expand an even polynomial given by pm_poly-style coefficients into a
/// dense list indexed by the power of c.
inline std::vector<Rational> even_poly_dense(const std::vector<Rational> &coeffs)
{
    const std::size_t m = coeffs.size() - 1;
    std::vector<Rational> dense(2 * m + 1);
    for (std::size_t k = 0; k <= m; ++k)
        dense[2 * m - 2 * k] = coeffs[k];
    return dense;
}

/// q_{d,w} = sum_{k=0}^{d} (-1)^k binom(d,k) binom(w+k, d-1), with
/// binom(top, .) = 0 for negative top. Vanishes for w != -1; at w = -1
/// the sum evaluates to (-1)^d.
inline Integer q_dw(long d, long w)
{
    Integer s = 0;
    for (long k = 0; k <= d; ++k) {
        Integer t = binomial_truncated(d, k) * binomial_truncated(w + k, d - 1);
        s += (k % 2 == 0) ? t : Integer(-t);
    }
    return s;
}

/// xi_{r,w} = sum_{p=0}^{r} (-1)^{r-p} (w + 2p - 2r) binom(w, r-p)
/// binom(w + p - 2r - 1, p) with the polynomial binomial binom(z, k) =
/// z(z-1)...(z-k+1)/k!. Equals w for r = 0 and 0 for r >= 1.
inline Integer xi_rw(long r, long w)
{
    Integer s = 0;
    for (long p = 0; p <= r; ++p) {
        Integer t = Integer(w + 2 * p - 2 * r) * binomial_general(w, r - p) * binomial_general(w + p - 2 * r - 1, p);
        s += ((r - p) % 2 == 0) ? t : Integer(-t);
    }
    return s;
}

/// sum_{k=0}^{d} prod_{l=k}^{d-1} 1/((2l-2d)(n-2+2m-2d-2l)) * r_{k,m};
/// zero for every d >= 1 whenever the factors are defined.
inline Rational projector_recurrence_residual(long n, long m, long d)
{
    Rational s = 0;
    Integer rden = 1;
    for (long k = 0; k <= d; ++k) {
        if (k > 0)
            rden *= Integer(2 * k) * Integer(n + 2 * m - 4 - 2 * (k - 1));
        Integer pden = 1;
        for (long l = k; l < d; ++l)
            pden *= Integer(2 * l - 2 * d) * Integer(n - 2 + 2 * m - 2 * d - 2 * l);
        if (pden == 0 || rden == 0)
            throw Error(ErrorKind::SingularCoefficient, "vanishing factor in projector recurrence");
        s += make_rational(1, pden * rden);
    }
    return s;
}

/// dim Harm_m = binom(n+m-1, n-1) - binom(n+m-3, n-1).
inline Integer harmonic_dimension(long n, long m)
{
    return binomial_truncated(n + m - 1, n - 1) - binomial_truncated(n + m - 3, n - 1);
}

/// dim ker(Delta: A_m -> A_{m-2}) by exact rank of the Laplacian on the
/// monomial basis.
inline std::size_t harmonic_dimension_by_rank(std::size_t n, unsigned m)
{
    const auto src = multi_indices(n, m);
    if (m < 2)
        return src.size();
    const auto dst = multi_indices(n, m - 2);
    std::map<MultiIndex, std::size_t> row;
    for (std::size_t i = 0; i < dst.size(); ++i)
        row[dst[i]] = i;
    RationalMatrix mat(dst.size(), src.size());
    for (std::size_t j = 0; j < src.size(); ++j) {
        const Poly lap = laplacian(Poly::monomial(src[j]));
        for (const auto &[idx, c] : lap.terms())
            mat(row.at(idx), j) = c;
    }
    return src.size() - mat.rank();
}

} // namespace lattheta
