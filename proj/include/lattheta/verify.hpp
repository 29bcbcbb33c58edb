#pragma once

#include <chrono>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "catalog.hpp"
#include "harmonic.hpp"
#include "lattice.hpp"
#include "qseries.hpp"
#include "theta.hpp"

namespace lattheta::verify
{

enum class Status
{
    Pass,
    Fail,
    Skip,
};

inline const char *to_string(Status s) noexcept
{
    switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Skip: return "skip";
    }
    return "?";
}

struct CheckResult
{
    std::string id;
    std::string title;
    Status status = Status::Pass;
    std::string detail;
    double seconds = 0;
};

/// Accumulates the first few mismatches of a check.
class Findings
{
public:
    void fail(const std::string &what)
    {
        ++count_;
        if (count_ <= 5)
            text_ << (count_ > 1 ? "; " : "") << what;
    }

    template <typename A, typename B> void expect_eq(const A &got, const B &want, const std::string &what)
    {
        if (!(got == want)) {
            std::ostringstream o;
            o << what << ": got " << got << ", want " << want;
            fail(o.str());
        }
    }

    void expect(bool ok, const std::string &what)
    {
        if (!ok)
            fail(what);
    }

    bool ok() const { return count_ == 0; }
    std::string summary() const
    {
        if (count_ <= 5)
            return text_.str();
        return text_.str() + "; ... " + std::to_string(count_ - 5) + " more";
    }

private:
    std::size_t count_ = 0;
    std::ostringstream text_;
};

/// U = product of random elementary column operations; det U = +-1.
inline std::vector<LatticeVector> random_unimodular(std::size_t n, std::mt19937_64 &rng, int steps = 6)
{
    std::vector<LatticeVector> u(n, LatticeVector(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        u[i][i] = 1;
    if (n == 1) {
        if (rng() % 2)
            u[0][0] = -1;
        return u;
    }
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::uniform_int_distribution<int> mult(-2, 2);
    for (int s = 0; s < steps; ++s) {
        const std::size_t i = pick(rng);
        std::size_t j = pick(rng);
        if (i == j)
            j = (j + 1) % n;
        const int op = static_cast<int>(rng() % 4);
        if (op == 0) {
            for (std::size_t r = 0; r < n; ++r)
                std::swap(u[r][i], u[r][j]);
        } else if (op == 1) {
            for (std::size_t r = 0; r < n; ++r)
                u[r][i] = -u[r][i];
        } else {
            int c = mult(rng);
            if (c == 0)
                c = 1;
            for (std::size_t r = 0; r < n; ++r)
                u[r][i] += c * u[r][j];
        }
    }
    return u;
}

/// A rank-3 lattice with no extra symmetry, so its degree-2 spherical theta
/// series do not vanish.
inline IntegralLattice skew_rank3()
{
    return validate_lattice({{2, 1, 0}, {1, 4, 1}, {0, 1, 6}}, "skew3");
}

/// Stored theta coefficients q^0..q^4 of the built-in lattices.
inline std::vector<long> catalog_golden(const std::string &name)
{
    if (name == "a2")
        return {1, 6, 0, 6, 6};
    if (name == "d4")
        return {1, 24, 24, 96, 24};
    if (name == "e8")
        return {1, 240, 2160, 6720, 17520};
    if (name.size() > 1 && name[0] == 'z') {
        // (1 + 2q + 2q^4)^n
        const std::size_t n = std::stoul(name.substr(1));
        std::vector<long> acc{1, 0, 0, 0, 0};
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<long> next(5, 0);
            for (std::size_t a = 0; a < 5; ++a)
                for (std::size_t b : {0u, 1u, 4u})
                    if (a + b < 5)
                        next[a + b] += acc[a] * (b == 0 ? 1 : 2);
            acc = next;
        }
        return acc;
    }
    return {};
}

inline Findings check_catalog(const std::vector<CatalogEntry> &entries)
{
    Findings f;
    for (const auto &e : entries) {
        try {
            const IntegralLattice lat = validate_lattice(e.lattice.gram2(), e.name);
            const auto golden = catalog_golden(e.name);
            const QSeries t = theta_series(lat, 4);
            for (std::size_t k = 0; k < golden.size(); ++k)
                f.expect_eq(t[k], Rational(golden[k]), e.name + " theta q^" + std::to_string(k));
            if (e.embedding)
                f.expect(e.embedding->transpose() * *e.embedding == lat.gram(), e.name + " embedding");
        } catch (const Error &err) {
            f.fail(e.name + ": " + err.what());
        }
    }
    return f;
}

struct Criterion
{
    std::string id;
    std::string title;
    std::size_t order; // smallest q-order budget the check needs
    std::function<Findings()> run;
};

inline std::vector<Criterion> criteria()
{
    std::vector<Criterion> out;

    out.push_back({"catalog", "built-in lattices validate and match stored theta coefficients", 4,
                   [] { return check_catalog(builtin_catalog()); }});

    out.push_back({"1", "E8 q^2 coefficients of Theta_{m,m} for m = 1..9", 2, [] {
                       Findings f;
                       const auto t0 = std::chrono::steady_clock::now();
                       const ShellTable sh = enumerate_shells(catalog_e8().lattice, 2);
                       const std::vector<Rational> want = {0,
                                                           0,
                                                           0,
                                                           Rational(3, 896),
                                                           0,
                                                           Rational(7, 316293120),
                                                           Rational(1, 30057431040),
                                                           Rational(1, 22235892940800),
                                                           Rational(1, 21727643959296000)};
                       for (long m = 1; m <= 9; ++m)
                           f.expect_eq(theta_pair(sh, m, 2)[2], want[static_cast<std::size_t>(m - 1)],
                                       "a_{" + std::to_string(m) + "," + std::to_string(m) + ",2}");
                       const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                       f.expect(secs < 10.0, "runtime " + std::to_string(secs) + " s exceeds 10 s");
                       return f;
                   }});

    out.push_back({"2", "Theta_{4,4,E8} = 3/896 Delta^2 through q^5", 5, [] {
                       Findings f;
                       const QSeries d = delta_series(5);
                       const QSeries want = d * d * Rational(3, 896);
                       const QSeries got = theta_pair(catalog_e8().lattice, 4, 5);
                       for (std::size_t k = 0; k <= 5; ++k)
                           f.expect_eq(got[k], want[k], "q^" + std::to_string(k));
                       return f;
                   }});

    out.push_back({"3", "Theta_{6,6,E8} = 7/658944 G8 Delta^2 through q^4", 4, [] {
                       Findings f;
                       const QSeries d = delta_series(4);
                       const QSeries want = eisenstein(8, 4) * d * d * Rational(7, 658944);
                       const QSeries got = theta_pair(catalog_e8().lattice, 6, 4);
                       for (std::size_t k = 0; k <= 4; ++k)
                           f.expect_eq(got[k], want[k], "q^" + std::to_string(k));
                       return f;
                   }});

    out.push_back({"4", "Theta_{7,7}, Theta_{8,8}, Theta_{9,9} of E8 at q^2, q^3", 3, [] {
                       Findings f;
                       const ShellTable sh = enumerate_shells(catalog_e8().lattice, 3);
                       const QSeries d = delta_series(3);
                       const QSeries d2 = d * d;
                       const QSeries g6 = eisenstein(6, 3), g8 = eisenstein(8, 3), g10 = eisenstein(10, 3);
                       const std::vector<std::pair<long, QSeries>> cases = {
                           {7, g6 * g6 * d2 * Rational(9, 1064960)},
                           {8, g8 * g8 * d2 * Rational(1, 96509952)},
                           {9, g10 * g10 * d2 * Rational(11, 3429236736000)},
                       };
                       for (const auto &[m, want] : cases) {
                           const QSeries got = theta_pair(sh, m, 3);
                           for (std::size_t k : {2u, 3u})
                               f.expect_eq(got[k], want[k], "m=" + std::to_string(m) + " q^" + std::to_string(k));
                       }
                       return f;
                   }});

    out.push_back({"5", "Theta_{m,m,E8} = 0 for m in {1,2,3,5} through q^5", 5, [] {
                       Findings f;
                       const ShellTable sh = enumerate_shells(catalog_e8().lattice, 5);
                       for (long m : {1L, 2L, 3L, 5L}) {
                           const QSeries got = theta_pair(sh, m, 5);
                           for (std::size_t k = 0; k <= 5; ++k)
                               f.expect_eq(got[k], Rational(0), "m=" + std::to_string(m) + " q^" + std::to_string(k));
                       }
                       return f;
                   }});

    out.push_back({"6", "delta_m integrality on 10^4 samples and scaled Theta_{m,m} in Z[[q]] to q^6", 6, [] {
                       Findings f;
                       std::vector<IntegralLattice> lats;
                       for (std::size_t n = 1; n <= 4; ++n)
                           lats.push_back(catalog_zn(n).lattice);
                       lats.push_back(catalog_a2().lattice);
                       lats.push_back(catalog_d4().lattice);
                       lats.push_back(catalog_e8().lattice);
                       std::mt19937_64 rng(20240601);
                       std::uniform_int_distribution<long> coord(-3, 3);
                       std::uniform_int_distribution<long> mdist(1, 4);
                       for (int s = 0; s < 10000; ++s) {
                           const auto &lat = lats[static_cast<std::size_t>(s) % lats.size()];
                           LatticeVector v(lat.rank()), w(lat.rank());
                           for (auto &x : v)
                               x = coord(rng);
                           for (auto &x : w)
                               x = coord(rng);
                           const long m = mdist(rng);
                           const Integer delta = delta_pair_scaled(lat, v, w, m);
                           const Rational via_pm =
                               pair_contribution(pm_poly(static_cast<long>(lat.rank()), m), m, norm(lat, v),
                                                 norm(lat, w), inner2(lat, v, w)) *
                               Rational(pair_scale(static_cast<long>(lat.rank()), m));
                           f.expect(is_integer(via_pm), lat.name() + " delta via p_m not integral: " + lattheta::to_string(via_pm));
                           f.expect_eq(Rational(delta), via_pm, lat.name() + " delta routes");
                       }
                       for (const auto &lat : lats) {
                           const ShellTable sh = enumerate_shells(lat, 6);
                           for (long m = 1; m <= 4; ++m) {
                               const auto rep = integrality_report(sh, m, 6, {}, 0);
                               if (!rep.pair.pass)
                                   f.fail(lat.name() + " m=" + std::to_string(m) + " q^" +
                                          std::to_string(*rep.pair.first_bad) + " = " + lattheta::to_string(rep.pair.offending));
                           }
                       }
                       return f;
                   }});

    out.push_back({"7", "8/n Theta_{1,1,1} in Z[[q]] to q^4", 4, [] {
                       Findings f;
                       for (const auto &lat : {catalog_zn(2).lattice, catalog_zn(3).lattice, catalog_a2().lattice,
                                               catalog_d4().lattice, skew_rank3()}) {
                           const QSeries t = theta_triple(lat, 4) * make_rational(8, static_cast<long>(lat.rank()));
                           const auto c = check_integral(t);
                           if (!c.pass)
                               f.fail(lat.name() + " q^" + std::to_string(*c.first_bad) + " = " + lattheta::to_string(c.offending));
                       }
                       return f;
                   }});

    out.push_back({"8", "general route equals the pair and triple routes", 4, [] {
                       Findings f;
                       const std::vector<std::pair<IntegralLattice, long>> pair_cases = {
                           {catalog_zn(2).lattice, 1}, {catalog_zn(2).lattice, 2}, {catalog_a2().lattice, 1},
                           {catalog_a2().lattice, 2},  {catalog_zn(3).lattice, 1}, {skew_rank3(), 1},
                       };
                       for (const auto &[lat, m] : pair_cases) {
                           const ShellTable sh = enumerate_shells(lat, 4);
                           const long n = static_cast<long>(lat.rank());
                           const QSeries general = theta_general(sh, {unsigned(m), unsigned(m)}, 4);
                           const QSeries pair = theta_pair(sh, m, 4) * harmonic_sphere_ratio(n, m);
                           f.expect(general == pair, lat.name() + " (m,m) with m=" + std::to_string(m));
                       }
                       for (const auto &lat : {catalog_zn(2).lattice, catalog_a2().lattice, catalog_zn(3).lattice,
                                               skew_rank3()}) {
                           const ShellTable sh = enumerate_shells(lat, 3);
                           const long n = static_cast<long>(lat.rank());
                           const QSeries general = theta_general(sh, {1, 1, 1}, 3) * Rational(triple_scale(n));
                           f.expect(general == theta_triple(sh, 3), lat.name() + " (1,1,1)");
                       }
                       return f;
                   }});

    out.push_back({"9", "combinatorial identities", 0, [] {
                       Findings f;
                       for (long d = 1; d <= 8; ++d)
                           for (long w = -12; w <= 12; ++w) {
                               const Integer q = q_dw(d, w);
                               if (w == -1) {
                                   f.expect(abs(q) == 1, "|q_{d,-1}| != 1 at d=" + std::to_string(d));
                                   f.expect_eq(q, Integer(d % 2 == 0 ? 1 : -1), "q_{d,-1} sign (-1)^d, d=" + std::to_string(d));
                               } else {
                                   f.expect_eq(q, Integer(0), "q_{" + std::to_string(d) + "," + std::to_string(w) + "}");
                               }
                           }
                       for (long r = 0; r <= 8; ++r)
                           for (long w = -12; w <= 12; ++w)
                               f.expect_eq(xi_rw(r, w), Integer(r == 0 ? w : 0),
                                           "xi_{" + std::to_string(r) + "," + std::to_string(w) + "}");
                       for (long n = 1; n <= 12; ++n)
                           for (long m = 0; m <= 12; ++m)
                               for (long d = 1; d <= 6; ++d) {
                                   try {
                                       f.expect_eq(projector_recurrence_residual(n, m, d), Rational(0),
                                                   "combi-1 n=" + std::to_string(n) + " m=" + std::to_string(m) +
                                                       " d=" + std::to_string(d));
                                   } catch (const Error &) {
                                       // a factor vanishes; the identity is not defined there
                                   }
                               }
                       for (long n = 1; n <= 10; ++n)
                           for (long m = 0; m <= 8; ++m) {
                               std::vector<Rational> lhs(2 * static_cast<std::size_t>(m) + 1);
                               for (long k = 0; k <= m; ++k) {
                                   const auto p = even_poly_dense(pm_poly(n, m - k));
                                   const Rational inv_a = make_rational(1, a_km(n, k, m));
                                   for (std::size_t i = 0; i < p.size(); ++i)
                                       lhs[i] += p[i] * inv_a;
                               }
                               std::vector<Rational> rhs(lhs.size());
                               rhs.back() = make_rational(1, factorial(static_cast<unsigned long>(2 * m)));
                               f.expect(lhs == rhs, "p_m implicit identity n=" + std::to_string(n) + " m=" + std::to_string(m));
                           }
                       return f;
                   }});

    out.push_back({"10", "harmonic projector coefficients, idempotence and Harm dimensions", 0, [] {
                       Findings f;
                       for (long n = 2; n <= 8; ++n) {
                           f.expect(projector(n, 2).coeffs == std::vector<Rational>{1, make_rational(1, 2 * n)},
                                    "P_2 n=" + std::to_string(n));
                           f.expect(projector(n, 4).coeffs ==
                                        std::vector<Rational>{1, make_rational(1, 2 * (n + 4)),
                                                              make_rational(1, 8 * (n + 2) * (n + 4))},
                                    "P_4 n=" + std::to_string(n));
                           f.expect(projector(n, 6).coeffs ==
                                        std::vector<Rational>{1, make_rational(1, 2 * (n + 8)),
                                                              make_rational(1, 8 * (n + 6) * (n + 8)),
                                                              make_rational(1, 48 * (n + 4) * (n + 6) * (n + 8))},
                                    "P_6 n=" + std::to_string(n));
                       }
                       std::mt19937_64 rng(77);
                       std::uniform_int_distribution<long> c(-5, 5);
                       for (std::size_t n = 1; n <= 4; ++n)
                           for (unsigned m = 0; m <= 6; ++m) {
                               const Metric metric = Metric::euclidean(n);
                               for (int trial = 0; trial < 3; ++trial) {
                                   Poly p(n);
                                   for (const auto &idx : multi_indices(n, m))
                                       if (rng() % 2)
                                           p.add_term(idx, make_rational(c(rng), 1 + rng() % 3));
                                   const Poly h = harmonic_project(p, m, metric);
                                   const std::string tag = "n=" + std::to_string(n) + " m=" + std::to_string(m);
                                   f.expect(laplacian(h).is_zero(), "Delta P != 0 " + tag);
                                   f.expect(harmonic_project(h, m, metric) == h, "P P != P " + tag);
                               }
                               f.expect_eq(Integer(static_cast<unsigned long>(harmonic_dimension_by_rank(n, m))),
                                           harmonic_dimension(static_cast<long>(n), m),
                                           "dim Harm n=" + std::to_string(n) + " m=" + std::to_string(m));
                           }
                       return f;
                   }});

    out.push_back({"11", "spherical monomial integrals", 0, [] {
                       Findings f;
                       for (long n = 3; n <= 10; ++n) {
                           const Integer d = Integer(n) * (n + 2) * (n + 4);
                           MultiIndex six(static_cast<std::size_t>(n), 0), four_two = six, two3 = six;
                           six[0] = 6;
                           four_two[0] = 4;
                           four_two[1] = 2;
                           two3[0] = two3[1] = two3[2] = 2;
                           f.expect_eq(spherical_integral(n, six), make_rational(15, d), "x^6 n=" + std::to_string(n));
                           f.expect_eq(spherical_integral(n, four_two), make_rational(3, d), "x^4y^2 n=" + std::to_string(n));
                           f.expect_eq(spherical_integral(n, two3), make_rational(1, d), "x^2y^2z^2 n=" + std::to_string(n));
                       }
                       // n = 2 has no third coordinate; only the first two values exist there
                       f.expect_eq(spherical_integral(2, {6, 0}), Rational(5, 16), "x^6 n=2");
                       f.expect_eq(spherical_integral(2, {4, 2}), Rational(1, 16), "x^4y^2 n=2");
                       std::mt19937_64 rng(11);
                       for (int t = 0; t < 1000; ++t) {
                           const std::size_t n = 1 + rng() % 8;
                           MultiIndex idx(n);
                           for (auto &e : idx)
                               e = static_cast<unsigned>(rng() % 7);
                           idx[rng() % n] |= 1u; // force one odd exponent
                           f.expect_eq(spherical_integral(static_cast<long>(n), idx), Rational(0), "odd exponent");
                       }
                       return f;
                   }});

    out.push_back({"12", "invariants unchanged under 100 random unimodular basis changes", 4, [] {
                       Findings f;
                       std::mt19937_64 rng(4242);
                       for (const auto &lat : {catalog_zn(2).lattice, catalog_zn(3).lattice, catalog_zn(4).lattice,
                                               catalog_a2().lattice, catalog_d4().lattice, skew_rank3()}) {
                           const std::size_t K = 4;
                           const ShellTable base = enumerate_shells(lat, K);
                           const QSeries t0 = theta_series(base, K);
                           const QSeries p1 = theta_pair(base, 1, K), p2 = theta_pair(base, 2, K);
                           const QSeries tr = theta_triple(base, K);
                           const QSeries g11 = theta_general(base, {1, 1}, K);
                           const QSeries g111 = theta_general(base, {1, 1, 1}, K);
                           for (int trial = 0; trial < 100; ++trial) {
                               const IntegralLattice moved = change_basis(lat, random_unimodular(lat.rank(), rng));
                               const ShellTable sh = enumerate_shells(moved, K);
                               const std::string tag = lat.name() + " trial " + std::to_string(trial);
                               f.expect(discriminant(moved) == discriminant(lat) && level(moved) == level(lat),
                                        tag + " D/N");
                               f.expect(theta_series(sh, K) == t0, tag + " theta");
                               f.expect(theta_pair(sh, 1, K) == p1, tag + " pair m=1");
                               f.expect(theta_pair(sh, 2, K) == p2, tag + " pair m=2");
                               f.expect(theta_triple(sh, K) == tr, tag + " triple");
                               f.expect(theta_general(sh, {1, 1}, K) == g11, tag + " general (1,1)");
                               f.expect(theta_general(sh, {1, 1, 1}, K) == g111, tag + " general (1,1,1)");
                           }
                       }
                       return f;
                   }});

    return out;
}

/// Runs every criterion whose order requirement fits within `order_budget`.
inline std::vector<CheckResult> run(std::size_t order_budget,
                                    const std::function<void(const CheckResult &)> &on_result = {})
{
    std::vector<CheckResult> results;
    for (const auto &c : criteria()) {
        CheckResult r{c.id, c.title, Status::Skip, {}, 0};
        if (c.order <= order_budget) {
            const auto t0 = std::chrono::steady_clock::now();
            try {
                const Findings f = c.run();
                r.status = f.ok() ? Status::Pass : Status::Fail;
                r.detail = f.summary();
            } catch (const std::exception &e) {
                r.status = Status::Fail;
                r.detail = std::string("exception: ") + e.what();
            }
            r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        } else {
            r.detail = "needs order " + std::to_string(c.order);
        }
        if (on_result)
            on_result(r);
        results.push_back(std::move(r));
    }
    return results;
}

} // namespace lattheta::verify
