#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "error.hpp"
#include "lattice.hpp"
#include "qseries.hpp"
#include "rational.hpp"

namespace lattheta
{

namespace detail
{

inline std::string line_col(const std::string &text, std::size_t byte)
{
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline Integer json_integer(const nlohmann::json &j, const std::string &where)
{
    if (j.is_number_integer())
        return Integer(std::to_string(j.get<std::int64_t>()));
    if (j.is_number_unsigned())
        return Integer(std::to_string(j.get<std::uint64_t>()));
    if (j.is_string()) {
        Integer z;
        if (z.set_str(j.get<std::string>(), 10) == 0)
            return z;
    }
    throw Error(ErrorKind::ParseError, where + " is not an integer");
}

} // namespace detail

/// {"name": string, "rank": n, "gram2": [[integers]]}. Large entries may be
/// given as decimal strings.
inline IntegralLattice parse_lattice_json(const std::string &text, const std::string &fallback_name = {})
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw Error(ErrorKind::ParseError, detail::line_col(text, e.byte > 0 ? e.byte - 1 : 0) + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("gram2") || !doc["gram2"].is_array())
        throw Error(ErrorKind::ParseError, "expected an object with a \"gram2\" array");
    Gram2 a;
    for (std::size_t i = 0; i < doc["gram2"].size(); ++i) {
        const auto &row = doc["gram2"][i];
        if (!row.is_array())
            throw Error(ErrorKind::ParseError, "gram2[" + std::to_string(i) + "] is not an array");
        a.emplace_back();
        for (std::size_t j = 0; j < row.size(); ++j)
            a.back().push_back(detail::json_integer(row[j], "gram2[" + std::to_string(i) + "][" + std::to_string(j) + "]"));
    }
    if (doc.contains("rank")) {
        if (!doc["rank"].is_number_unsigned() || doc["rank"].get<std::size_t>() != a.size())
            throw Error(ErrorKind::ParseError, "\"rank\" does not match the size of gram2");
    }
    std::string name = fallback_name;
    if (doc.contains("name") && doc["name"].is_string())
        name = doc["name"].get<std::string>();
    return validate_lattice(a, name);
}

inline IntegralLattice parse_lattice_file(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::ParseError, "cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_lattice_json(buf.str(), path.stem().string());
}

inline nlohmann::json lattice_to_json(const IntegralLattice &lat)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const auto &row : lat.gram2()) {
        nlohmann::json r = nlohmann::json::array();
        for (const auto &x : row)
            r.push_back(x.get_si());
        rows.push_back(r);
    }
    return {{"name", lat.name()}, {"rank", lat.rank()}, {"gram2", rows}};
}

/// {"order": K, "coeffs": ["p/q", ...], "weight": w, "level": N}
inline nlohmann::json qseries_to_json(const QSeries &s)
{
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto &c : s.coeffs())
        coeffs.push_back(to_string(c));
    nlohmann::json j = {{"order", s.order()}, {"coeffs", coeffs}};
    if (const auto &m = s.meta()) {
        j["weight"] = to_string(m->weight);
        j["level"] = m->level.get_str();
        j["character"] = m->character;
    }
    return j;
}

inline QSeries qseries_from_json(const nlohmann::json &j)
{
    if (!j.contains("coeffs") || !j["coeffs"].is_array())
        throw Error(ErrorKind::ParseError, "series without \"coeffs\"");
    std::vector<Rational> c;
    for (const auto &x : j["coeffs"])
        c.push_back(parse_rational(x.get<std::string>()));
    QSeries s(std::move(c));
    if (j.contains("order") && j["order"].get<std::size_t>() != s.order())
        throw Error(ErrorKind::ParseError, "\"order\" does not match the coefficient count");
    if (j.contains("weight")) {
        ModularMeta m;
        m.weight = parse_rational(j["weight"].get<std::string>());
        if (j.contains("level"))
            m.level = Integer(j["level"].get<std::string>());
        m.character = j.value("character", false);
        s.set_meta(m);
    }
    return s;
}

/// FNV-1a over the canonical text of (A, B); stable across runs and hosts.
inline std::uint64_t shell_cache_key(const IntegralLattice &lat, std::int64_t bound)
{
    std::string canon = std::to_string(lat.rank()) + ":";
    for (const auto &row : lat.gram2())
        for (const auto &x : row)
            canon += x.get_str() + ",";
    canon += ";" + std::to_string(bound);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : canon) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline constexpr int shell_cache_version = 1;

inline std::string hex64(std::uint64_t v)
{
    std::ostringstream o;
    o << std::hex << std::setw(16) << std::setfill('0') << v;
    return o.str();
}

inline void write_shell_cache(const ShellTable &t, std::ostream &out)
{
    const auto &lat = t.lattice();
    out << "lattheta-shell-cache " << shell_cache_version << "\n";
    out << "key " << hex64(shell_cache_key(lat, t.bound())) << "\n";
    out << "rank " << lat.rank() << " bound " << t.bound() << "\n";
    for (std::int64_t k = 0; k <= t.bound(); ++k) {
        out << "shell " << k << " " << t.shell_size(k) << "\n";
        for (const auto &v : t.shell(k)) {
            for (std::size_t i = 0; i < v.size(); ++i)
                out << (i ? " " : "") << v[i];
            out << "\n";
        }
    }
}

inline ShellTable read_shell_cache(const IntegralLattice &lat, std::int64_t bound, std::istream &in)
{
    auto fail = [](const std::string &why) -> Error { return Error(ErrorKind::CacheError, why); };
    std::string tag, word;
    int version = 0;
    if (!(in >> tag >> version) || tag != "lattheta-shell-cache")
        throw fail("not a shell cache");
    if (version != shell_cache_version)
        throw fail("cache version " + std::to_string(version) + " is not supported");
    std::string key;
    if (!(in >> word >> key) || word != "key" || key != hex64(shell_cache_key(lat, bound)))
        throw fail("cache key does not match lattice and bound");
    std::size_t rank = 0;
    std::int64_t b = 0;
    std::string w2;
    if (!(in >> word >> rank >> w2 >> b) || rank != lat.rank() || b != bound)
        throw fail("cache header does not match");
    std::vector<std::vector<LatticeVector>> shells(static_cast<std::size_t>(bound) + 1);
    for (std::int64_t k = 0; k <= bound; ++k) {
        std::int64_t kk = 0;
        std::size_t count = 0;
        if (!(in >> word >> kk >> count) || word != "shell" || kk != k)
            throw fail("truncated cache");
        auto &s = shells[static_cast<std::size_t>(k)];
        s.reserve(count);
        for (std::size_t c = 0; c < count; ++c) {
            LatticeVector v(rank);
            for (auto &x : v)
                if (!(in >> x))
                    throw fail("truncated cache");
            if (norm(lat, v) != k)
                throw fail("cached vector has the wrong norm");
            s.push_back(std::move(v));
        }
    }
    return ShellTable(lat, bound, std::move(shells));
}

/// Loads the shells from `dir` when a matching cache exists, otherwise
/// enumerates and writes one. An empty dir disables caching.
inline ShellTable cached_shells(const IntegralLattice &lat, std::int64_t bound, const std::filesystem::path &dir)
{
    if (dir.empty())
        return enumerate_shells(lat, bound);
    const auto file = dir / ("shells-" + hex64(shell_cache_key(lat, bound)) + ".txt");
    if (std::filesystem::exists(file)) {
        std::ifstream in(file);
        try {
            return read_shell_cache(lat, bound, in);
        } catch (const Error &) {
            // stale or corrupt: fall through and rebuild
        }
    }
    ShellTable t = enumerate_shells(lat, bound);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (!ec) {
        const auto tmp = file.string() + ".tmp";
        {
            std::ofstream out(tmp);
            write_shell_cache(t, out);
        }
        std::filesystem::rename(tmp, file, ec);
    }
    return t;
}

} // namespace lattheta
