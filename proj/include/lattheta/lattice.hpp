#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "error.hpp"
#include "rational.hpp"

namespace lattheta
{

/// Coordinates of a lattice vector with respect to the lattice basis.
using LatticeVector = std::vector<std::int64_t>;

/// Square integer matrix A = 2 * Gram, row-major rows.
using Gram2 = std::vector<std::vector<Integer>>;

class IntegralLattice;
IntegralLattice validate_lattice(const Gram2 &gram2, std::string name = {});

/// A positive definite lattice in which every vector has integral norm
/// ||v||^2 = v^T A v / 2. Only constructible through validate_lattice.
class IntegralLattice
{
public:
    std::size_t rank() const noexcept { return rank_; }
    const std::string &name() const noexcept { return name_; }
    const Gram2 &gram2() const noexcept { return gram2_; }

    /// A(i, j) as a machine integer; the validator rejects entries that do
    /// not fit.
    std::int64_t a(std::size_t i, std::size_t j) const noexcept { return gram64_[i * rank_ + j]; }

    const Integer &discriminant() const noexcept { return discriminant_; }
    const Integer &level() const noexcept { return level_; }

    /// Exact A^{-1}.
    const RationalMatrix &inverse_gram2() const noexcept { return inverse_; }

    /// Gram = A/2 as rationals.
    RationalMatrix gram() const
    {
        RationalMatrix g(rank_, rank_);
        for (std::size_t i = 0; i < rank_; ++i)
            for (std::size_t j = 0; j < rank_; ++j)
                g(i, j) = make_rational(gram2_[i][j], 2);
        return g;
    }

    /// Diagonal pivots d_i and the unit upper-triangular multipliers of
    /// ||v||^2 = sum_i d_i (v_i + sum_{j>i} mu_ij v_j)^2.
    const RationalMatrix &ldl() const noexcept { return ldl_; }

    IntegralLattice with_name(std::string name) const
    {
        IntegralLattice copy = *this;
        copy.name_ = std::move(name);
        return copy;
    }

private:
    friend IntegralLattice validate_lattice(const Gram2 &, std::string);
    IntegralLattice() = default;

    std::size_t rank_ = 0;
    std::string name_;
    Gram2 gram2_;
    std::vector<std::int64_t> gram64_;
    Integer discriminant_;
    Integer level_;
    RationalMatrix inverse_;
    RationalMatrix ldl_;
};

namespace detail
{

// Cohen's quadratic-form decomposition: on exit q(i,i) = d_i and
// q(i,j) = mu_ij for j > i. Returns the index of the first non-positive
// pivot, if any.
inline std::optional<std::size_t> decompose(RationalMatrix &q)
{
    const std::size_t n = q.rows();
    for (std::size_t i = 0; i < n; ++i) {
        if (q(i, i) <= 0)
            return i;
        for (std::size_t j = i + 1; j < n; ++j) {
            q(j, i) = q(i, j);
            q(i, j) /= q(i, i);
        }
        for (std::size_t k = i + 1; k < n; ++k)
            for (std::size_t l = k; l < n; ++l)
                q(k, l) -= q(k, i) * q(i, l);
    }
    return std::nullopt;
}

// Gauss-Jordan inverse; the caller guarantees invertibility.
inline RationalMatrix invert(const RationalMatrix &m)
{
    const std::size_t n = m.rows();
    RationalMatrix a = m;
    RationalMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        inv(i, i) = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (a(p, c) == 0)
            ++p;
        for (std::size_t j = 0; j < n; ++j) {
            std::swap(a(c, j), a(p, j));
            std::swap(inv(c, j), inv(p, j));
        }
        const Rational pivot = a(c, c);
        for (std::size_t j = 0; j < n; ++j) {
            a(c, j) /= pivot;
            inv(c, j) /= pivot;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || a(i, c) == 0)
                continue;
            const Rational f = a(i, c);
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) -= f * a(c, j);
                inv(i, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

} // namespace detail

inline IntegralLattice validate_lattice(const Gram2 &gram2, std::string name)
{
    const std::size_t n = gram2.size();
    if (n == 0)
        throw Error(ErrorKind::NotPositiveDefinite, "empty Gram matrix");
    for (const auto &row : gram2)
        if (row.size() != n)
            throw Error(ErrorKind::RankMismatch, "Gram matrix is not square");
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j)
            if (gram2[i][j] != gram2[j][i])
                throw Error(ErrorKind::NotSymmetric,
                            "A(" + std::to_string(i) + "," + std::to_string(j) + ") != A(" + std::to_string(j) + "," +
                                std::to_string(i) + ")");
        if (mpz_odd_p(gram2[i][i].get_mpz_t()))
            throw Error(ErrorKind::OddDiagonal, "A(" + std::to_string(i) + "," + std::to_string(i) + ") = " +
                                                    gram2[i][i].get_str() + " is odd");
    }

    IntegralLattice lat;
    lat.rank_ = n;
    lat.name_ = std::move(name);
    lat.gram2_ = gram2;

    RationalMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a(i, j) = gram2[i][j];

    RationalMatrix q = lat.gram();
    if (auto bad = detail::decompose(q))
        throw Error(ErrorKind::NotPositiveDefinite, "leading principal minor " + std::to_string(*bad + 1) +
                                                        " is not positive");
    lat.ldl_ = q;

    // det A = 2^n det(Gram) = 2^n prod d_i
    Rational det = 1;
    for (std::size_t i = 0; i < n; ++i)
        det *= 2 * q(i, i);
    lat.discriminant_ = det.get_num();

    for (const auto &row : gram2)
        for (const auto &x : row) {
            if (!x.fits_slong_p())
                throw Error(ErrorKind::ResourceLimit, "Gram entry " + x.get_str() + " exceeds machine range");
            lat.gram64_.push_back(x.get_si());
        }

    lat.inverse_ = detail::invert(a);
    Integer m = 1;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m = lcm(m, lat.inverse_(i, j).get_den());
    bool even = true;
    for (std::size_t i = 0; i < n; ++i) {
        const Rational d = lat.inverse_(i, i) * m;
        if (mpz_odd_p(d.get_num().get_mpz_t()))
            even = false;
    }
    lat.level_ = even ? m : Integer(2 * m);
    return lat;
}

inline Integer discriminant(const IntegralLattice &lat) { return lat.discriminant(); }
inline Integer level(const IntegralLattice &lat) { return lat.level(); }

inline void check_rank(const IntegralLattice &lat, const LatticeVector &v)
{
    if (v.size() != lat.rank())
        throw Error(ErrorKind::RankMismatch,
                    "vector of length " + std::to_string(v.size()) + " for rank " + std::to_string(lat.rank()));
}

/// 2<v,w> = v^T A w.
inline std::int64_t inner2(const IntegralLattice &lat, const LatticeVector &v, const LatticeVector &w)
{
    check_rank(lat, v);
    check_rank(lat, w);
    const std::size_t n = lat.rank();
    std::int64_t s = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (v[i] == 0)
            continue;
        std::int64_t row = 0;
        for (std::size_t j = 0; j < n; ++j)
            row += lat.a(i, j) * w[j];
        s += v[i] * row;
    }
    return s;
}

inline std::int64_t norm(const IntegralLattice &lat, const LatticeVector &v) { return inner2(lat, v, v) / 2; }

/// Gram matrix in the basis given by the columns of U: A -> U^T A U.
inline IntegralLattice change_basis(const IntegralLattice &lat, const std::vector<LatticeVector> &u)
{
    const std::size_t n = lat.rank();
    Gram2 out(n, std::vector<Integer>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Integer s = 0;
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l)
                    s += Integer(u[k][i]) * lat.gram2()[k][l] * Integer(u[l][j]);
            out[i][j] = s;
        }
    return validate_lattice(out, lat.name());
}

/// Histogram of t = v^T A w over all pairs (v, w) in two shells.
using PairHistogram = std::map<std::int64_t, std::uint64_t>;

/// All lattice vectors of norm at most `bound`, grouped by norm, each shell
/// sorted lexicographically. Pair histograms are computed on demand and
/// memoized; the table is otherwise immutable.
class ShellTable
{
public:
    ShellTable(const IntegralLattice &lat, std::int64_t bound, std::vector<std::vector<LatticeVector>> shells)
        : lattice_(lat), bound_(bound), shells_(std::move(shells)), cache_(std::make_shared<Cache>())
    {
    }

    const IntegralLattice &lattice() const noexcept { return lattice_; }
    std::int64_t bound() const noexcept { return bound_; }

    const std::vector<LatticeVector> &shell(std::int64_t k) const { return shells_.at(static_cast<std::size_t>(k)); }
    std::size_t shell_size(std::int64_t k) const { return shell(k).size(); }
    const std::vector<std::vector<LatticeVector>> &shells() const noexcept { return shells_; }

    std::int64_t min_norm() const
    {
        for (std::size_t k = 1; k < shells_.size(); ++k)
            if (!shells_[k].empty())
                return static_cast<std::int64_t>(k);
        return 0;
    }

    /// Histogram of v^T A w for v in shell k1, w in shell k2.
    const PairHistogram &pair_histogram(std::int64_t k1, std::int64_t k2) const
    {
        if (k1 > k2)
            std::swap(k1, k2);
        {
            std::lock_guard lock(cache_->mutex);
            auto it = cache_->histograms.find({k1, k2});
            if (it != cache_->histograms.end())
                return it->second;
        }
        PairHistogram h = build_histogram(k1, k2);
        std::lock_guard lock(cache_->mutex);
        return cache_->histograms.emplace(std::make_pair(k1, k2), std::move(h)).first->second;
    }

    /// Fills every histogram with k1 + k2 <= max_total, spreading cells
    /// across `threads` workers.
    void precompute_histograms(std::int64_t max_total, unsigned threads = 1) const
    {
        std::vector<std::pair<std::int64_t, std::int64_t>> cells;
        for (std::int64_t k1 = 0; k1 <= max_total && k1 <= bound_; ++k1)
            for (std::int64_t k2 = k1; k1 + k2 <= max_total && k2 <= bound_; ++k2)
                cells.emplace_back(k1, k2);
        if (threads <= 1) {
            for (auto [a, b] : cells)
                pair_histogram(a, b);
            return;
        }
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t c = t; c < cells.size(); c += threads)
                    pair_histogram(cells[c].first, cells[c].second);
            });
        for (auto &th : pool)
            th.join();
    }

private:
    struct Cache
    {
        std::mutex mutex;
        std::map<std::pair<std::int64_t, std::int64_t>, PairHistogram> histograms;
    };

    PairHistogram build_histogram(std::int64_t k1, std::int64_t k2) const
    {
        const std::size_t n = lattice_.rank();
        const auto &s1 = shell(k1);
        const auto &s2 = shell(k2);
        PairHistogram h;
        std::vector<std::int64_t> av(n);
        std::unordered_map<std::int64_t, std::uint64_t> local;
        for (const auto &v : s1) {
            for (std::size_t j = 0; j < n; ++j) {
                std::int64_t s = 0;
                for (std::size_t i = 0; i < n; ++i)
                    s += v[i] * lattice_.a(i, j);
                av[j] = s;
            }
            for (const auto &w : s2) {
                std::int64_t t = 0;
                for (std::size_t j = 0; j < n; ++j)
                    t += av[j] * w[j];
                ++local[t];
            }
        }
        for (auto [t, c] : local)
            h[t] += c;
        return h;
    }

    IntegralLattice lattice_;
    std::int64_t bound_;
    std::vector<std::vector<LatticeVector>> shells_;
    std::shared_ptr<Cache> cache_;
};

namespace detail
{

struct Enumerator
{
    const IntegralLattice &lat;
    const RationalMatrix &q;
    std::int64_t bound;
    std::size_t n;
    LatticeVector x;
    std::vector<std::vector<LatticeVector>> shells;

    void recurse(std::size_t level, const Rational &remaining)
    {
        const std::size_t i = level - 1;
        Rational centre = 0;
        for (std::size_t j = i + 1; j < n; ++j)
            if (x[j] != 0)
                centre += q(i, j) * x[j];
        // need d_i (x_i + centre)^2 <= remaining
        const Rational slack = remaining / q(i, i);
        const Integer r = isqrt(ceil_of(slack)) + 1;
        const Integer lo = floor_of(-centre) - r;
        const Integer hi = ceil_of(-centre) + r;
        for (long xi = lo.get_si(); xi <= hi.get_si(); ++xi) {
            const Rational shifted = centre + xi;
            const Rational used = q(i, i) * shifted * shifted;
            if (used > remaining)
                continue;
            x[i] = xi;
            if (i == 0) {
                const std::int64_t k = norm(lat, x);
                if (k <= bound)
                    shells[static_cast<std::size_t>(k)].push_back(x);
            } else {
                recurse(i, remaining - used);
            }
        }
        x[i] = 0;
    }
};

} // namespace detail

/// Fincke-Pohst style depth-first enumeration with exact rational bounds.
inline ShellTable enumerate_shells(const IntegralLattice &lat, std::int64_t bound)
{
    if (bound < 0)
        bound = 0;
    detail::Enumerator e{lat, lat.ldl(), bound, lat.rank(), LatticeVector(lat.rank(), 0),
                         std::vector<std::vector<LatticeVector>>(static_cast<std::size_t>(bound) + 1)};
    e.recurse(lat.rank(), Rational(bound));
    for (auto &s : e.shells)
        std::sort(s.begin(), s.end());
    return ShellTable(lat, bound, std::move(e.shells));
}

} // namespace lattheta
