#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "lattice.hpp"
#include "theta.hpp"

namespace lattheta
{

struct CatalogEntry
{
    std::string name;
    IntegralLattice lattice;
    std::string provenance;
    std::optional<Embedding> embedding; // rational Euclidean basis, when one exists
};

namespace detail
{

// Maps R^{2k} to itself with |M x|^2 = |x|^2 / 2, pairing coordinates as
// ((x+y)/2, (x-y)/2). Turns norm-2 root systems into norm-1 bases with
// rational coordinates.
inline RationalMatrix halving_rotation(std::size_t dim)
{
    RationalMatrix m(dim, dim);
    for (std::size_t i = 0; i + 1 < dim; i += 2) {
        m(i, i) = Rational(1, 2);
        m(i, i + 1) = Rational(1, 2);
        m(i + 1, i) = Rational(1, 2);
        m(i + 1, i + 1) = Rational(-1, 2);
    }
    return m;
}

// Columns of `roots` are simple roots of norm 2 in standard coordinates.
inline CatalogEntry from_roots(std::string name, const RationalMatrix &roots, std::string provenance)
{
    const RationalMatrix b = halving_rotation(roots.rows()) * roots;
    const RationalMatrix g = b.transpose() * b;
    Gram2 a(g.rows(), std::vector<Integer>(g.cols()));
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j)
            a[i][j] = Rational(g(i, j) * 2).get_num();
    return {name, validate_lattice(a, name), std::move(provenance), b};
}

inline RationalMatrix columns(const std::vector<std::vector<Rational>> &cols)
{
    RationalMatrix m(cols.front().size(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < cols[j].size(); ++i)
            m(i, j) = cols[j][i];
    return m;
}

} // namespace detail

/// Z^n with A = 2 I.
inline CatalogEntry catalog_zn(std::size_t n)
{
    Gram2 a(n, std::vector<Integer>(n, 0));
    RationalMatrix b(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        a[i][i] = 2;
        b(i, i) = 1;
    }
    const std::string name = "z" + std::to_string(n);
    return {name, validate_lattice(a, name), "cubic lattice, A = 2 I", b};
}

inline CatalogEntry catalog_a2()
{
    return {"a2", validate_lattice({{2, 1}, {1, 2}}, "a2"), "hexagonal lattice, minimal norm 1", std::nullopt};
}

inline CatalogEntry catalog_d4()
{
    using R = Rational;
    // e1-e2, e2-e3, e3-e4, e3+e4
    const auto roots = detail::columns({{R(1), R(-1), R(0), R(0)},
                                        {R(0), R(1), R(-1), R(0)},
                                        {R(0), R(0), R(1), R(-1)},
                                        {R(0), R(0), R(1), R(1)}});
    return detail::from_roots("d4", roots, "D4 root lattice scaled to minimal norm 1");
}

inline CatalogEntry catalog_e8()
{
    using R = Rational;
    const R h(1, 2);
    std::vector<std::vector<Rational>> cols;
    cols.push_back({h, -h, -h, -h, -h, -h, -h, h});
    cols.push_back({R(1), R(1), R(0), R(0), R(0), R(0), R(0), R(0)});
    for (std::size_t i = 0; i + 1 < 7; ++i) {
        std::vector<Rational> c(8, R(0));
        c[i] = -1;
        c[i + 1] = 1;
        cols.push_back(c);
    }
    return detail::from_roots("e8", detail::columns(cols), "E8 root lattice scaled to minimal norm 1 (even unimodular A)");
}

inline std::vector<CatalogEntry> builtin_catalog()
{
    std::vector<CatalogEntry> out;
    for (std::size_t n = 1; n <= 8; ++n)
        out.push_back(catalog_zn(n));
    out.push_back(catalog_a2());
    out.push_back(catalog_d4());
    out.push_back(catalog_e8());
    return out;
}

/// Looks up "zN" (any N >= 1), "a2", "d4", "e8"; case-insensitive.
inline std::optional<CatalogEntry> find_catalog(std::string name)
{
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
    if (name.size() > 1 && name[0] == 'z' &&
        std::all_of(name.begin() + 1, name.end(), [](unsigned char c) { return std::isdigit(c); })) {
        const auto n = std::stoul(name.substr(1));
        if (n >= 1 && n <= 64)
            return catalog_zn(n);
        return std::nullopt;
    }
    if (name == "a2")
        return catalog_a2();
    if (name == "d4")
        return catalog_d4();
    if (name == "e8")
        return catalog_e8();
    return std::nullopt;
}

} // namespace lattheta
