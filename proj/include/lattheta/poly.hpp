#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "error.hpp"
#include "rational.hpp"

namespace lattheta
{

/// Exponent vector I = (i_1, ..., i_n).
using MultiIndex = std::vector<unsigned>;

inline unsigned degree(const MultiIndex &idx) { return std::accumulate(idx.begin(), idx.end(), 0u); }

/// I! = prod i_k!
inline Integer index_factorial(const MultiIndex &idx)
{
    Integer f = 1;
    for (unsigned e : idx)
        f *= factorial(e);
    return f;
}

/// All multi-indices of length n and total degree d, in lexicographic order.
inline std::vector<MultiIndex> multi_indices(std::size_t n, unsigned d)
{
    std::vector<MultiIndex> out;
    MultiIndex cur(n, 0);
    auto fill = [&](auto &&self, std::size_t pos, unsigned left) -> void {
        if (pos + 1 == n) {
            cur[pos] = left;
            out.push_back(cur);
            return;
        }
        for (unsigned e = left + 1; e-- > 0;) {
            cur[pos] = e;
            self(self, pos + 1, left - e);
        }
    };
    if (n == 0) {
        if (d == 0)
            out.emplace_back();
        return out;
    }
    fill(fill, 0, d);
    return out;
}

inline MultiIndex operator+(const MultiIndex &a, const MultiIndex &b)
{
    MultiIndex c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        c[i] = a[i] + b[i];
    return c;
}

/// Sparse polynomial in n variables with rational coefficients. Zero
/// coefficients are never stored.
class Poly
{
public:
    using Terms = std::map<MultiIndex, Rational>;

    explicit Poly(std::size_t rank = 0) : rank_(rank) {}

    static Poly monomial(const MultiIndex &idx, const Rational &c = 1)
    {
        Poly p(idx.size());
        p.add_term(idx, c);
        return p;
    }

    static Poly constant(std::size_t rank, const Rational &c)
    {
        return monomial(MultiIndex(rank, 0), c);
    }

    static Poly variable(std::size_t rank, std::size_t i)
    {
        MultiIndex idx(rank, 0);
        idx.at(i) = 1;
        return monomial(idx);
    }

    /// r^2 = sum x_k^2
    static Poly r2(std::size_t rank)
    {
        Poly p(rank);
        for (std::size_t i = 0; i < rank; ++i) {
            MultiIndex idx(rank, 0);
            idx[i] = 2;
            p.add_term(idx, 1);
        }
        return p;
    }

    /// sum_ij m(i,j) x_i x_j for a symmetric matrix m.
    static Poly quadratic_form(const RationalMatrix &m)
    {
        const std::size_t n = m.rows();
        Poly p(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                MultiIndex idx(n, 0);
                ++idx[i];
                ++idx[j];
                p.add_term(idx, m(i, j));
            }
        return p;
    }

    std::size_t rank() const noexcept { return rank_; }
    const Terms &terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    Rational coeff(const MultiIndex &idx) const
    {
        auto it = terms_.find(idx);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    void add_term(const MultiIndex &idx, const Rational &c)
    {
        if (idx.size() != rank_)
            throw Error(ErrorKind::RankMismatch, "multi-index length does not match polynomial rank");
        if (c == 0)
            return;
        auto [it, inserted] = terms_.try_emplace(idx, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0)
                terms_.erase(it);
        }
    }

    /// Degree if every term has the same degree; nullopt otherwise. The zero
    /// polynomial counts as homogeneous of any degree and reports nullopt.
    std::optional<unsigned> homogeneous_degree() const
    {
        std::optional<unsigned> d;
        for (const auto &[idx, c] : terms_) {
            const unsigned e = degree(idx);
            if (d && *d != e)
                return std::nullopt;
            d = e;
        }
        return d;
    }

    bool is_homogeneous_of(unsigned d) const
    {
        for (const auto &[idx, c] : terms_)
            if (degree(idx) != d)
                return false;
        return true;
    }

    Poly &operator+=(const Poly &g)
    {
        check_same_rank(g);
        for (const auto &[idx, c] : g.terms_)
            add_term(idx, c);
        return *this;
    }

    Poly &operator-=(const Poly &g)
    {
        check_same_rank(g);
        for (const auto &[idx, c] : g.terms_)
            add_term(idx, -c);
        return *this;
    }

    Poly &operator*=(const Rational &c)
    {
        if (c == 0) {
            terms_.clear();
            return *this;
        }
        for (auto &[idx, x] : terms_)
            x *= c;
        return *this;
    }

    friend Poly operator+(Poly f, const Poly &g) { return f += g; }
    friend Poly operator-(Poly f, const Poly &g) { return f -= g; }
    friend Poly operator*(Poly f, const Rational &c) { return f *= c; }
    friend Poly operator*(const Rational &c, Poly f) { return f *= c; }

    friend Poly operator*(const Poly &f, const Poly &g)
    {
        f.check_same_rank(g);
        Poly h(f.rank_);
        for (const auto &[i, a] : f.terms_)
            for (const auto &[j, b] : g.terms_)
                h.add_term(i + j, a * b);
        return h;
    }

    friend bool operator==(const Poly &, const Poly &) = default;

    Poly pow(unsigned e) const
    {
        Poly r = constant(rank_, 1);
        for (unsigned k = 0; k < e; ++k)
            r = r * *this;
        return r;
    }

    /// d/dx_i
    Poly derivative(std::size_t i) const
    {
        Poly d(rank_);
        for (const auto &[idx, c] : terms_) {
            if (idx[i] == 0)
                continue;
            MultiIndex j = idx;
            --j[i];
            d.add_term(j, c * idx[i]);
        }
        return d;
    }

    /// d^2/(dx_i dx_j)
    Poly second_derivative(std::size_t i, std::size_t j) const { return derivative(i).derivative(j); }

    template <typename T> Rational evaluate(std::span<const T> point) const
    {
        if (point.size() != rank_)
            throw Error(ErrorKind::RankMismatch, "evaluation point has wrong length");
        Rational s = 0;
        for (const auto &[idx, c] : terms_) {
            Rational t = c;
            for (std::size_t k = 0; k < rank_; ++k)
                for (unsigned e = 0; e < idx[k]; ++e)
                    t *= point[k];
            s += t;
        }
        return s;
    }

    Rational evaluate(const std::vector<Rational> &point) const { return evaluate(std::span<const Rational>(point)); }

    /// Substitute x = M y, i.e. return the polynomial y -> f(M y).
    Poly substitute_linear(const RationalMatrix &m) const
    {
        std::vector<Poly> images;
        for (std::size_t i = 0; i < rank_; ++i) {
            Poly row(m.cols());
            for (std::size_t j = 0; j < m.cols(); ++j) {
                MultiIndex idx(m.cols(), 0);
                idx[j] = 1;
                row.add_term(idx, m(i, j));
            }
            images.push_back(std::move(row));
        }
        Poly out(m.cols());
        for (const auto &[idx, c] : terms_) {
            Poly t = constant(m.cols(), c);
            for (std::size_t k = 0; k < rank_; ++k)
                if (idx[k] > 0)
                    t = t * images[k].pow(idx[k]);
            out += t;
        }
        return out;
    }

private:
    void check_same_rank(const Poly &g) const
    {
        if (g.rank_ != rank_)
            throw Error(ErrorKind::RankMismatch,
                        "polynomials of rank " + std::to_string(rank_) + " and " + std::to_string(g.rank_));
    }

    std::size_t rank_;
    Terms terms_;
};

/// <g, f> = g(d/dx) f |_0. On monomials <x^I, x^J> = I! [I = J].
inline Rational diff_pairing(const Poly &g, const Poly &f)
{
    if (g.rank() != f.rank())
        throw Error(ErrorKind::RankMismatch, "pairing polynomials of different rank");
    Rational s = 0;
    const auto &small = g.terms().size() <= f.terms().size() ? g.terms() : f.terms();
    const auto &large = g.terms().size() <= f.terms().size() ? f.terms() : g.terms();
    for (const auto &[idx, c] : small) {
        auto it = large.find(idx);
        if (it != large.end())
            s += c * it->second * index_factorial(idx);
    }
    return s;
}

/// Laplacian with a negative sign: -sum_k d^2 f / dx_k^2.
inline Poly laplacian(const Poly &f)
{
    Poly out(f.rank());
    for (const auto &[idx, c] : f.terms()) {
        for (std::size_t k = 0; k < f.rank(); ++k) {
            if (idx[k] < 2)
                continue;
            MultiIndex j = idx;
            j[k] -= 2;
            out.add_term(j, -c * idx[k] * (idx[k] - 1));
        }
    }
    return out;
}

/// The same operator written in skew coordinates z with x = B z: the
/// Euclidean Laplacian becomes -sum_ij ginv(i,j) d_i d_j where
/// ginv = (B^T B)^{-1}.
inline Poly laplacian(const Poly &f, const RationalMatrix &ginv)
{
    const std::size_t n = f.rank();
    Poly out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Poly di = f.derivative(i);
        if (di.is_zero())
            continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (ginv(i, j) == 0)
                continue;
            out -= di.derivative(j) * ginv(i, j);
        }
    }
    return out;
}

} // namespace lattheta
