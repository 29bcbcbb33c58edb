#include <gtest/gtest.h>

#include "lattheta/lattheta.hpp"

using namespace lattheta;

namespace
{

QSeries series(std::initializer_list<long> c)
{
    std::vector<Rational> v;
    for (long x : c)
        v.emplace_back(x);
    return QSeries(v);
}

} // namespace

TEST(QSeries, Arithmetic)
{
    const auto one_plus_q = series({1, 1, 0});
    EXPECT_EQ(one_plus_q * one_plus_q, series({1, 2, 1}));
    EXPECT_TRUE((one_plus_q * QSeries(2)).is_zero());
    EXPECT_EQ(one_plus_q + one_plus_q, series({2, 2, 0}));
    EXPECT_TRUE((one_plus_q - one_plus_q).is_zero());
    EXPECT_EQ(one_plus_q * Rational(1, 2), QSeries({Rational(1, 2), Rational(1, 2), Rational(0)}));
}

TEST(QSeries, ProductTruncatesToSmallerOrder)
{
    const auto f = series({1, 1, 1, 1});
    const auto g = series({1, 1});
    EXPECT_EQ((f * g).order(), 1u);
    EXPECT_EQ((f + g).order(), 1u);
    EXPECT_EQ(f.truncate(2), series({1, 1, 1}));
}

TEST(QSeries, DeltaSquared)
{
    const auto d = delta_series(4);
    EXPECT_EQ(d[0], 0);
    EXPECT_EQ(d[1], 1);
    EXPECT_EQ(d[2], -24);
    EXPECT_EQ(d[3], 252);
    EXPECT_EQ(d[4], -1472);
    EXPECT_EQ(d * d, series({0, 0, 1, -48, 1080}));
}

TEST(QSeries, Sigma)
{
    EXPECT_EQ(sigma(7, 1), 1);
    EXPECT_EQ(sigma(3, 2), 9);
    EXPECT_EQ(sigma(5, 4), 1057);
    EXPECT_EQ(sigma(0, 12), 6);
}

TEST(QSeries, Eisenstein)
{
    const auto g8 = eisenstein(8, 3);
    EXPECT_EQ(g8[0], Rational(1, 480));
    EXPECT_EQ(g8[1], 1);
    EXPECT_EQ(g8[2], 129);
    EXPECT_EQ(eisenstein(6, 1)[0], Rational(-1, 504));
    EXPECT_EQ(eisenstein(10, 1)[0], Rational(-1, 264));
    try {
        eisenstein(4, 2);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::UnsupportedWeight);
    }
}

TEST(Rational, ParseAndPrint)
{
    EXPECT_EQ(parse_rational("-3/6"), Rational(-1, 2));
    EXPECT_EQ(to_string(Rational(3, 896)), "3/896");
    EXPECT_EQ(to_string(Rational(4)), "4");
    EXPECT_THROW(parse_rational("1/0"), Error);
    EXPECT_THROW(parse_rational("abc"), Error);
}
