#pragma once

#include <cctype>
#include <cstdint>
#include <regex>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "error.hpp"

namespace lattheta
{

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(const Integer &num, const Integer &den)
{
    Rational r(num, den);
    r.canonicalize();
    return r;
}

/// "p/q", or "p" for integers.
inline std::string to_string(const Rational &r)
{
    return r.get_str();
}

inline Rational parse_rational(const std::string &text)
{
    static const std::regex form(R"(\s*[-+]?[0-9]+(/[0-9]+)?\s*)");
    if (!std::regex_match(text, form))
        throw Error(ErrorKind::ParseError, "'" + text + "' is not a rational number");
    const auto slash = text.find('/');
    if (slash != std::string::npos && Integer(text.substr(slash + 1)) == 0)
        throw Error(ErrorKind::ParseError, "zero denominator in '" + text + "'");
    std::string clean;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)) && c != '+')
            clean += c;
    Rational r(clean, 10);
    r.canonicalize();
    return r;
}

inline bool is_integer(const Rational &r)
{
    return r.get_den() == 1;
}

inline Integer factorial(unsigned long n)
{
    Integer f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return f;
}

inline Integer pow_int(const Integer &base, unsigned long e)
{
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Rational pow_rat(const Rational &base, unsigned long e)
{
    Integer num = pow_int(base.get_num(), e);
    Integer den = pow_int(base.get_den(), e);
    return make_rational(num, den);
}

/// Ordinary binomial for a non-negative top; zero whenever top < 0 or
/// bottom is outside [0, top].
inline Integer binomial_truncated(long top, long bottom)
{
    if (top < 0 || bottom < 0 || bottom > top) {
        return 0;
    }
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(top), static_cast<unsigned long>(bottom));
    return r;
}

/// binom(z, k) = z(z-1)...(z-k+1)/k! for any integer z and k >= 0.
inline Integer binomial_general(long top, long bottom)
{
    if (bottom < 0) {
        return 0;
    }
    Integer r;
    mpz_bin_ui(r.get_mpz_t(), Integer(top).get_mpz_t(), static_cast<unsigned long>(bottom));
    return r;
}

inline Integer gcd(const Integer &a, const Integer &b)
{
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Integer lcm(const Integer &a, const Integer &b)
{
    Integer l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

inline Integer isqrt(const Integer &a)
{
    Integer r;
    mpz_sqrt(r.get_mpz_t(), a.get_mpz_t());
    return r;
}

inline bool is_square(const Rational &r)
{
    return r >= 0 && mpz_perfect_square_p(r.get_num().get_mpz_t()) != 0 &&
           mpz_perfect_square_p(r.get_den().get_mpz_t()) != 0;
}

inline Rational sqrt_exact(const Rational &r)
{
    return make_rational(isqrt(r.get_num()), isqrt(r.get_den()));
}

inline Integer floor_of(const Rational &r)
{
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
    return q;
}

inline Integer ceil_of(const Rational &r)
{
    Integer q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
    return q;
}

/// Dense row-major matrix of exact rationals, only as much as the lattice
/// and harmonic code needs.
class RationalMatrix
{
public:
    RationalMatrix() = default;
    RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Rational &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rational &operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    friend bool operator==(const RationalMatrix &, const RationalMatrix &) = default;

    RationalMatrix transpose() const
    {
        RationalMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                t(j, i) = (*this)(i, j);
        return t;
    }

    friend RationalMatrix operator*(const RationalMatrix &a, const RationalMatrix &b)
    {
        RationalMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                if (a(i, k) == 0)
                    continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    c(i, j) += a(i, k) * b(k, j);
            }
        return c;
    }

    /// Rank by fraction-exact Gaussian elimination.
    std::size_t rank() const
    {
        RationalMatrix m = *this;
        std::size_t r = 0;
        for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
            std::size_t p = r;
            while (p < rows_ && m(p, c) == 0)
                ++p;
            if (p == rows_)
                continue;
            for (std::size_t j = 0; j < cols_; ++j)
                std::swap(m(r, j), m(p, j));
            for (std::size_t i = r + 1; i < rows_; ++i) {
                if (m(i, c) == 0)
                    continue;
                Rational f = m(i, c) / m(r, c);
                for (std::size_t j = c; j < cols_; ++j)
                    m(i, j) -= f * m(r, j);
            }
            ++r;
        }
        return r;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

} // namespace lattheta
