#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "error.hpp"
#include "rational.hpp"

namespace lattheta
{

/// Modular-form bookkeeping attached to a series. Not verified, only carried.
struct ModularMeta
{
    Rational weight;
    Integer level = 1;
    bool character = false; // (D/.) nebentypus flag

    friend bool operator==(const ModularMeta &, const ModularMeta &) = default;
};

/// Truncated power series sum_{k=0}^{K} c_k q^k with exact coefficients.
class QSeries
{
public:
    QSeries() : coeffs_(1) {}
    explicit QSeries(std::size_t order) : coeffs_(order + 1) {}
    explicit QSeries(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs))
    {
        if (coeffs_.empty())
            coeffs_.resize(1);
    }

    static QSeries constant(const Rational &c, std::size_t order)
    {
        QSeries s(order);
        s.coeffs_[0] = c;
        return s;
    }

    std::size_t order() const noexcept { return coeffs_.size() - 1; }
    const std::vector<Rational> &coeffs() const noexcept { return coeffs_; }

    const Rational &operator[](std::size_t k) const { return coeffs_.at(k); }
    Rational &operator[](std::size_t k) { return coeffs_.at(k); }

    const std::optional<ModularMeta> &meta() const noexcept { return meta_; }
    void set_meta(ModularMeta m) { meta_ = std::move(m); }

    bool is_zero() const
    {
        return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational &c) { return c == 0; });
    }

    QSeries truncate(std::size_t order) const
    {
        order = std::min(order, this->order());
        QSeries s(std::vector<Rational>(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(order + 1)));
        s.meta_ = meta_;
        return s;
    }

    QSeries &operator+=(const QSeries &g)
    {
        coeffs_.resize(std::min(coeffs_.size(), g.coeffs_.size()));
        for (std::size_t k = 0; k < coeffs_.size(); ++k)
            coeffs_[k] += g.coeffs_[k];
        return *this;
    }

    QSeries &operator-=(const QSeries &g)
    {
        coeffs_.resize(std::min(coeffs_.size(), g.coeffs_.size()));
        for (std::size_t k = 0; k < coeffs_.size(); ++k)
            coeffs_[k] -= g.coeffs_[k];
        return *this;
    }

    QSeries &operator*=(const Rational &c)
    {
        for (auto &x : coeffs_)
            x *= c;
        return *this;
    }

    friend QSeries operator+(QSeries f, const QSeries &g) { return f += g; }
    friend QSeries operator-(QSeries f, const QSeries &g) { return f -= g; }
    friend QSeries operator*(QSeries f, const Rational &c) { return f *= c; }
    friend QSeries operator*(const Rational &c, QSeries f) { return f *= c; }

    /// Cauchy product truncated at the smaller order.
    friend QSeries operator*(const QSeries &f, const QSeries &g)
    {
        const std::size_t order = std::min(f.order(), g.order());
        QSeries h(order);
        for (std::size_t i = 0; i <= order; ++i) {
            if (f.coeffs_[i] == 0)
                continue;
            for (std::size_t j = 0; i + j <= order; ++j)
                h.coeffs_[i + j] += f.coeffs_[i] * g.coeffs_[j];
        }
        return h;
    }

    QSeries &operator*=(const QSeries &g) { return *this = *this * g; }

    /// Coefficient equality; metadata is ignored.
    friend bool operator==(const QSeries &f, const QSeries &g) { return f.coeffs_ == g.coeffs_; }

private:
    std::vector<Rational> coeffs_;
    std::optional<ModularMeta> meta_;
};

/// sum_{d | n} d^k
inline Integer sigma(unsigned long k, unsigned long n)
{
    Integer s = 0;
    for (unsigned long d = 1; d * d <= n; ++d) {
        if (n % d != 0)
            continue;
        s += pow_int(Integer(d), k);
        const unsigned long e = n / d;
        if (e != d)
            s += pow_int(Integer(e), k);
    }
    return s;
}

/// G_k with the constant term -B_k/(2k): 1/480 for k=8, -1/504 for k=6,
/// -1/264 for k=10.
inline QSeries eisenstein(unsigned weight, std::size_t order)
{
    Rational c0;
    switch (weight) {
    case 6: c0 = Rational(-1, 504); break;
    case 8: c0 = Rational(1, 480); break;
    case 10: c0 = Rational(-1, 264); break;
    default: throw Error(ErrorKind::UnsupportedWeight, "eisenstein weight " + std::to_string(weight));
    }
    QSeries g(order);
    g[0] = c0;
    for (std::size_t n = 1; n <= order; ++n)
        g[n] = sigma(weight - 1, n);
    g.set_meta({Rational(weight), 1, false});
    return g;
}

/// q * prod_{n>=1} (1-q^n)^24, truncated.
inline QSeries delta_series(std::size_t order)
{
    // prod (1-q^n) is Euler's pentagonal series; raise it to the 24th power.
    std::vector<Integer> euler(order + 1, 0);
    for (long j = 0;; ++j) {
        bool any = false;
        for (long s : {1L, -1L}) {
            if (j == 0 && s == -1)
                continue;
            const long jj = s * j;
            const long e = jj * (3 * jj - 1) / 2;
            if (e >= 0 && static_cast<std::size_t>(e) <= order) {
                euler[static_cast<std::size_t>(e)] += (j % 2 == 0) ? 1 : -1;
                any = true;
            }
        }
        if (!any && j > 0)
            break;
    }
    std::vector<Integer> acc(order + 1, 0);
    acc[0] = 1;
    for (int p = 0; p < 24; ++p) {
        std::vector<Integer> next(order + 1, 0);
        for (std::size_t i = 0; i <= order; ++i) {
            if (acc[i] == 0)
                continue;
            for (std::size_t j = 0; i + j <= order; ++j)
                next[i + j] += acc[i] * euler[j];
        }
        acc = std::move(next);
    }
    QSeries d(order);
    for (std::size_t k = 1; k <= order; ++k)
        d[k] = acc[k - 1];
    d.set_meta({Rational(12), 1, false});
    return d;
}

} // namespace lattheta
