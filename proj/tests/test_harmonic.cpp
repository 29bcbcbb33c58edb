#include <gtest/gtest.h>

#include <random>

#include "lattheta/lattheta.hpp"

using namespace lattheta;

namespace
{

Poly random_homogeneous(std::size_t n, unsigned d, std::mt19937_64 &rng)
{
    std::uniform_int_distribution<int> coef(-5, 5);
    Poly p(n);
    for (const auto &idx : multi_indices(n, d))
        p.add_term(idx, make_rational(coef(rng), 1 + std::abs(coef(rng))));
    return p;
}

Poly x(std::size_t n, std::size_t i) { return Poly::variable(n, i); }

} // namespace

TEST(Pairing, Examples)
{
    const Poly x1x2 = x(2, 0) * x(2, 1);
    const Poly x1sq = x(2, 0) * x(2, 0);
    EXPECT_EQ(diff_pairing(x1x2, x1x2), 1);
    EXPECT_EQ(diff_pairing(x1sq, x1sq), 2);
    EXPECT_EQ(diff_pairing(x1x2, x1sq), 0);
    for (std::size_t n = 1; n <= 6; ++n)
        EXPECT_EQ(diff_pairing(Poly::r2(n), Poly::r2(n)), 2 * static_cast<long>(n));
}

TEST(Pairing, PositiveDefiniteAndAdjoint)
{
    std::mt19937_64 rng(11);
    for (std::size_t n = 1; n <= 4; ++n)
        for (unsigned d = 0; d <= 6; ++d) {
            const Poly f = random_homogeneous(n, d, rng);
            if (!f.is_zero()) {
                EXPECT_GT(diff_pairing(f, f), 0);
            }
            if (d >= 2) {
                const Poly p = random_homogeneous(n, d - 2, rng);
                EXPECT_EQ(diff_pairing(Poly::r2(n) * p, f), diff_pairing(p, laplacian(f) * Rational(-1)));
            }
        }
}

TEST(Laplacian, Examples)
{
    EXPECT_EQ(laplacian(x(2, 0) * x(2, 0)), Poly::constant(2, -2));
    EXPECT_TRUE(laplacian(x(2, 0) * x(2, 1)).is_zero());
    for (std::size_t n = 1; n <= 5; ++n)
        EXPECT_EQ(laplacian(Poly::r2(n)), Poly::constant(n, -2 * static_cast<long>(n)));
}

TEST(Structure, ConstantsExamples)
{
    EXPECT_EQ(a_km(8, 0, 3), 1);
    EXPECT_EQ(a_km(8, 1, 1), 16);
    EXPECT_EQ(a_km(2, 2, 2), 64);
    for (long n = 1; n <= 6; ++n)
        for (long m = 0; m <= 4; ++m) {
            EXPECT_EQ(b_kdm(n, 0, 2, m), 1);
            EXPECT_EQ(b_kdm(n, 4, 2, m), 0);
            EXPECT_EQ(b_kdm(n, 1, 1, m), -2 * (n + 2 * m));
        }
}

TEST(Projector, Displays)
{
    for (long n = 2; n <= 8; ++n) {
        EXPECT_EQ(projector(n, 2).coeffs, (std::vector<Rational>{1, make_rational(1, 2 * n)}));
        EXPECT_EQ(projector(n, 4).coeffs,
                  (std::vector<Rational>{1, make_rational(1, 2 * (n + 4)), make_rational(1, 8 * (n + 2) * (n + 4))}));
        EXPECT_EQ(projector(n, 6).coeffs,
                  (std::vector<Rational>{1, make_rational(1, 2 * (n + 8)), make_rational(1, 8 * (n + 6) * (n + 8)),
                                         make_rational(1, 48 * (n + 4) * (n + 6) * (n + 8))}));
    }
    try {
        projector(0, 2);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::SingularProjector);
    }
}

TEST(Projector, RecurrenceMatchesClosedForm)
{
    for (long n = 2; n <= 8; ++n)
        for (long m = 0; m <= 12; ++m)
            EXPECT_EQ(projector_by_recurrence(n, m), projector(n, m).coeffs) << n << "," << m;
}

TEST(Projector, Examples)
{
    const std::size_t n = 3;
    const Poly x1x2 = x(n, 0) * x(n, 1);
    EXPECT_EQ(harmonic_project(x1x2), x1x2);
    EXPECT_EQ(harmonic_project(x(n, 0) * x(n, 0)), x(n, 0) * x(n, 0) - Poly::r2(n) * Rational(1, 3));
    EXPECT_TRUE(harmonic_project(Poly::r2(n)).is_zero());
    try {
        harmonic_project(x(n, 0) + x1x2);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotHomogeneous);
    }
}

TEST(Projector, Properties)
{
    std::mt19937_64 rng(3);
    for (std::size_t n = 2; n <= 8; ++n)
        for (unsigned m = 0; m <= (n <= 4 ? 6u : 4u); ++m) {
            const Poly f = random_homogeneous(n, m, rng);
            const Poly p = harmonic_project(f);
            EXPECT_TRUE(laplacian(p).is_zero()) << n << "," << m;
            EXPECT_EQ(harmonic_project(p), p);
        }
    // r^{2d} h projects to zero
    for (std::size_t n = 2; n <= 5; ++n) {
        const Poly h = x(n, 0) * x(n, 1);
        for (unsigned d = 1; d <= 2; ++d)
            EXPECT_TRUE(harmonic_project(Poly::r2(n).pow(d) * h).is_zero());
    }
}

TEST(Projector, BIdentity)
{
    for (std::size_t n = 2; n <= 5; ++n) {
        const Poly h = x(n, 0) * x(n, 1);
        for (long k = 0; k <= 3; ++k)
            for (long d = 0; d <= 3; ++d) {
                const Poly f = Poly::r2(n).pow(static_cast<unsigned>(d)) * h;
                Poly g = f;
                for (long i = 0; i < k; ++i)
                    g = laplacian(g);
                g = Poly::r2(n).pow(static_cast<unsigned>(k)) * g;
                EXPECT_EQ(g, f * Rational(b_kdm(static_cast<long>(n), k, d, 2)));
            }
    }
}

TEST(Harm, Dimension)
{
    for (long n = 1; n <= 4; ++n)
        for (long m = 0; m <= 6; ++m)
            EXPECT_EQ(harmonic_dimension(n, m), harmonic_dimension_by_rank(static_cast<std::size_t>(n), m));
    EXPECT_EQ(harmonic_dimension(3, 2), 5);
    EXPECT_EQ(harmonic_dimension(1, 2), 0);
}

TEST(Sphere, Integrals)
{
    for (long n = 3; n <= 10; ++n) {
        const Rational c = make_rational(1, n * (n + 2) * (n + 4));
        MultiIndex six(n, 0), four_two(n, 0), two3(n, 0);
        six[0] = 6;
        four_two[0] = 4;
        four_two[1] = 2;
        two3[0] = two3[1] = two3[2] = 2;
        EXPECT_EQ(spherical_integral(n, six), 15 * c);
        EXPECT_EQ(spherical_integral(n, four_two), 3 * c);
        EXPECT_EQ(spherical_integral(n, two3), c);
        EXPECT_EQ(spherical_integral(n, MultiIndex(n, 0)), 1);
        MultiIndex odd(n, 0);
        odd[1] = 3;
        odd[0] = 1;
        EXPECT_EQ(spherical_integral(n, odd), 0);
    }
    for (long n = 1; n <= 6; ++n) {
        Rational s = 0;
        for (long i = 0; i < n; ++i) {
            MultiIndex e(n, 0);
            e[i] = 2;
            s += spherical_integral(n, e);
        }
        EXPECT_EQ(s, 1);
        // r^2 = 1 on the sphere
        for (unsigned a = 0; a <= 4; ++a)
            for (const auto &half : multi_indices(n, a)) {
                MultiIndex idx(n);
                for (long i = 0; i < n; ++i)
                    idx[i] = 2 * half[i];
                Rational termwise = 0;
                for (long i = 0; i < n; ++i) {
                    MultiIndex j = idx;
                    j[i] += 2;
                    termwise += spherical_integral(n, j);
                }
                EXPECT_EQ(termwise, spherical_integral(n, idx));
            }
    }
}

TEST(Sphere, SkewMomentsReduceToEuclidean)
{
    RationalMatrix id(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
        id(i, i) = 1;
    SkewSphereMoments m(id);
    for (unsigned d = 0; d <= 6; ++d)
        for (const auto &idx : multi_indices(3, d))
            EXPECT_EQ(m.average(idx), spherical_integral(3, idx));
}

TEST(Pm, Examples)
{
    EXPECT_EQ(pm_poly(5, 0), (std::vector<Rational>{1}));
    for (long n = 1; n <= 8; ++n) {
        EXPECT_EQ(pm_poly(n, 1), (std::vector<Rational>{Rational(1, 2), make_rational(-1, 2 * n)}));
        EXPECT_EQ(pm_poly(n, 2), (std::vector<Rational>{Rational(1, 24), make_rational(-1, 4 * (n + 4)),
                                                        make_rational(1, 8 * (n + 4) * (n + 2))}));
    }
}

TEST(Pm, ImplicitDefinition)
{
    for (long n = 1; n <= 10; ++n)
        for (long m = 0; m <= 8; ++m) {
            std::vector<Rational> lhs(2 * m + 1);
            for (long k = 0; k <= m; ++k) {
                const auto p = even_poly_dense(pm_poly(n, m - k));
                const Rational a(a_km(n, k, m));
                for (std::size_t i = 0; i < p.size(); ++i)
                    lhs[i] += p[i] / a;
            }
            std::vector<Rational> rhs(2 * m + 1);
            rhs[2 * m] = make_rational(1, factorial(2 * m));
            EXPECT_EQ(lhs, rhs) << n << "," << m;
        }
}

TEST(Combinatorics, Qdw)
{
    EXPECT_EQ(q_dw(3, 4), 0);
    EXPECT_EQ(q_dw(2, -1), 1);
    EXPECT_EQ(q_dw(1, -1), -1);
    for (long d = 1; d <= 8; ++d)
        for (long w = -12; w <= 12; ++w)
            EXPECT_EQ(q_dw(d, w), w == -1 ? Integer(d % 2 == 0 ? 1 : -1) : Integer(0)) << d << "," << w;
}

TEST(Combinatorics, Xirw)
{
    EXPECT_EQ(xi_rw(0, 7), 7);
    EXPECT_EQ(xi_rw(1, 3), 0);
    EXPECT_EQ(xi_rw(2, -4), 0);
    for (long w = -12; w <= 12; ++w) {
        EXPECT_EQ(xi_rw(0, w), w);
        for (long r = 1; r <= 8; ++r)
            EXPECT_EQ(xi_rw(r, w), 0) << r << "," << w;
    }
}

TEST(Combinatorics, RecurrenceResidual)
{
    for (long n = 2; n <= 12; ++n)
        for (long m = 0; m <= 12; ++m)
            for (long d = 1; d <= 6; ++d) {
                try {
                    EXPECT_EQ(projector_recurrence_residual(n, m, d), 0) << n << "," << m << "," << d;
                } catch (const Error &e) {
                    EXPECT_EQ(e.kind(), ErrorKind::SingularCoefficient);
                }
            }
}
