// Command-line front end for the lattheta library.
//
//   lattheta compute --lattice e8 --degrees 4,4 --order 4
//   lattheta compare --lattice z2 --other a2 --degrees-list "0;1,1" --order 6
//   lattheta verify --order-budget 6 --report report.json
//   lattheta catalog

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lattheta/lattheta.hpp"
#include "lattheta/verify.hpp"

namespace fs = std::filesystem;
using namespace lattheta;

namespace
{

constexpr int exit_ok = 0;
constexpr int exit_verify_failed = 1;
constexpr int exit_input = 2;
constexpr int exit_resource = 3;

struct CommonOptions
{
    std::string cache_dir;
    bool no_cache = false;
    unsigned threads = 1;
};

fs::path resolve_cache_dir(const CommonOptions &o)
{
    if (o.no_cache)
        return {};
    if (!o.cache_dir.empty())
        return o.cache_dir;
    if (const char *env = std::getenv("LATTHETA_CACHE_DIR"))
        return env;
    if (const char *xdg = std::getenv("XDG_CACHE_HOME"))
        return fs::path(xdg) / "lattheta";
    if (const char *home = std::getenv("HOME"))
        return fs::path(home) / ".cache" / "lattheta";
    return {};
}

IntegralLattice load_lattice(const std::string &source)
{
    if (auto entry = find_catalog(source))
        return entry->lattice;
    if (fs::exists(source))
        return parse_lattice_file(source);
    throw Error(ErrorKind::ParseError, "'" + source + "' is neither a catalog name nor a readable file");
}

std::vector<unsigned> parse_degrees(const std::string &text)
{
    std::vector<unsigned> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty() || item.find_first_not_of("0123456789 ") != std::string::npos)
            throw Error(ErrorKind::ParseError, "degree '" + item + "' is not a non-negative integer");
        out.push_back(static_cast<unsigned>(std::stoul(item)));
    }
    if (out.empty())
        throw Error(ErrorKind::ParseError, "empty degree list");
    // the invariant is symmetric in its degrees
    std::sort(out.begin(), out.end());
    return out;
}

Normalization parse_normalization(const std::string &text, const std::vector<unsigned> &degrees)
{
    if (text.empty())
        return default_normalization(degrees);
    if (text == "pair")
        return Normalization::Pair;
    if (text == "triple")
        return Normalization::Triple;
    if (text == "general")
        return Normalization::General;
    throw Error(ErrorKind::ParseError, "unknown normalization '" + text + "'");
}

std::string join_degrees(const std::vector<unsigned> &d)
{
    std::string s;
    for (std::size_t i = 0; i < d.size(); ++i)
        s += (i ? "," : "") + std::to_string(d[i]);
    return s;
}

QSeries compute(const IntegralLattice &lat, const std::vector<unsigned> &degrees, std::size_t order,
                Normalization norm, const CommonOptions &common)
{
    const ShellTable shells = cached_shells(lat, static_cast<std::int64_t>(order), resolve_cache_dir(common));
    ComputeOptions opts;
    opts.threads = std::max(1u, common.threads);
    return compute_invariant(shells, {degrees, order, norm}, opts);
}

void render(const QSeries &s, const IntegralLattice &lat, const std::vector<unsigned> &degrees, Normalization norm,
            const std::string &format, bool decimal, std::ostream &out)
{
    if (format == "json") {
        nlohmann::json j = qseries_to_json(s);
        j["invariant"] = degrees;
        j["normalization"] = to_string(norm);
        j["lattice"] = {{"name", lat.name()}, {"hash", hex64(shell_cache_key(lat, 0))}};
        out << j.dump(2) << "\n";
        return;
    }
    if (format == "csv") {
        out << "k,coefficient" << (decimal ? ",approx" : "") << "\n";
        for (std::size_t k = 0; k <= s.order(); ++k) {
            out << k << "," << to_string(s[k]);
            if (decimal)
                out << "," << std::setprecision(17) << s[k].get_d();
            out << "\n";
        }
        return;
    }
    out << "# Theta_{" << join_degrees(degrees) << "} of " << lat.name() << " (" << to_string(norm)
        << " normalization)";
    if (const auto &m = s.meta())
        out << ", weight " << to_string(m->weight) << ", level " << m->level << (m->character ? ", character (D/.)" : "");
    out << "\n";
    for (std::size_t k = 0; k <= s.order(); ++k) {
        out << "q^" << std::left << std::setw(4) << k << std::right << " " << to_string(s[k]);
        if (decimal)
            out << "    (approx " << std::setprecision(12) << s[k].get_d() << ")";
        out << "\n";
    }
}

int run_guarded(const std::function<int()> &body)
{
    try {
        return body();
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == ErrorKind::ResourceLimit ? exit_resource : exit_input;
    }
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Exact theta series and lattice-invariant modular forms"};
    app.require_subcommand(1);

    CommonOptions common;
    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--cache-dir", common.cache_dir, "Directory for shell caches (env LATTHETA_CACHE_DIR)");
        sub->add_flag("--no-cache", common.no_cache, "Always re-enumerate lattice shells");
        sub->add_option("--threads", common.threads, "Worker threads for pair histograms")->check(CLI::PositiveNumber);
    };

    // compute
    std::string lattice_src, degrees_text = "0", norm_text, format = "table";
    std::size_t order = 4;
    bool decimal = false;
    auto *compute_cmd = app.add_subcommand("compute", "Print the q-expansion of one invariant");
    compute_cmd->add_option("--lattice", lattice_src, "Catalog name (z<n>, a2, d4, e8) or JSON file")->required();
    compute_cmd->add_option("--degrees", degrees_text, "Comma list m1,...,mk");
    compute_cmd->add_option("--order", order, "Truncation order K");
    compute_cmd->add_option("--normalization", norm_text, "pair | triple | general")
        ->check(CLI::IsMember({"pair", "triple", "general"}));
    compute_cmd->add_option("--format", format, "table | json | csv")->check(CLI::IsMember({"table", "json", "csv"}));
    compute_cmd->add_flag("--decimal", decimal, "Also print floating-point approximations");
    add_common(compute_cmd);

    // compare
    std::string other_src, degrees_list = "0;1,1";
    auto *compare_cmd = app.add_subcommand("compare", "Compare invariants of two lattices");
    compare_cmd->add_option("--lattice", lattice_src, "First lattice")->required();
    compare_cmd->add_option("--other", other_src, "Second lattice")->required();
    compare_cmd->add_option("--degrees-list", degrees_list, "Semicolon-separated degree lists, e.g. \"0;1,1;1,1,1\"");
    compare_cmd->add_option("--order", order, "Truncation order K");
    add_common(compare_cmd);

    // verify
    std::size_t budget = 6;
    std::string report_path;
    bool verify_json = false;
    auto *verify_cmd = app.add_subcommand("verify", "Replay the identity and integrality checks");
    verify_cmd->add_option("--order-budget", budget, "Skip checks that need a larger q-order");
    verify_cmd->add_option("--report", report_path, "Write the JSON report to this file");
    verify_cmd->add_flag("--json", verify_json, "Print the JSON report on stdout instead of the table");

    auto *catalog_cmd = app.add_subcommand("catalog", "List built-in lattices");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_input;
    }

    if (compute_cmd->parsed()) {
        return run_guarded([&] {
            const IntegralLattice lat = load_lattice(lattice_src);
            const auto degrees = parse_degrees(degrees_text);
            const Normalization norm = parse_normalization(norm_text, degrees);
            const QSeries s = compute(lat, degrees, order, norm, common);
            render(s, lat, degrees, norm, format, decimal, std::cout);
            return exit_ok;
        });
    }

    if (compare_cmd->parsed()) {
        return run_guarded([&] {
            const IntegralLattice a = load_lattice(lattice_src);
            const IntegralLattice b = load_lattice(other_src);
            if (a.rank() != b.rank())
                throw Error(ErrorKind::RankMismatch, "ranks differ: " + std::to_string(a.rank()) + " vs " +
                                                         std::to_string(b.rank()));
            std::vector<std::vector<unsigned>> lists;
            std::stringstream in(degrees_list);
            std::string item;
            while (std::getline(in, item, ';'))
                if (!item.empty())
                    lists.push_back(parse_degrees(item));
            bool separated = false;
            std::cout << "comparing " << a.name() << " and " << b.name() << " to order " << order << "\n";
            for (const auto &d : lists) {
                const Normalization norm = default_normalization(d);
                const QSeries sa = compute(a, d, order, norm, common);
                const QSeries sb = compute(b, d, order, norm, common);
                std::cout << "  Theta_{" << join_degrees(d) << "}: ";
                std::size_t k = 0;
                while (k <= order && sa[k] == sb[k])
                    ++k;
                if (k > order) {
                    std::cout << "equal to order " << order << "\n";
                } else {
                    separated = true;
                    std::cout << "differ at q^" << k << " (" << to_string(sa[k]) << " vs " << to_string(sb[k]) << ")\n";
                }
            }
            std::cout << (separated ? "separated: yes" : "separated: no") << "\n";
            return exit_ok;
        });
    }

    if (verify_cmd->parsed()) {
        const auto results = verify::run(budget, [&](const verify::CheckResult &r) {
            if (verify_json)
                return;
            std::cout << "[" << verify::to_string(r.status) << "] " << std::setw(7) << std::left << r.id << std::right
                      << " " << r.title << std::fixed << std::setprecision(2) << " (" << r.seconds << " s)";
            if (!r.detail.empty())
                std::cout << " -- " << r.detail;
            std::cout << std::defaultfloat << "\n";
        });
        bool ok = true;
        nlohmann::json report = nlohmann::json::array();
        for (const auto &r : results) {
            ok = ok && r.status != verify::Status::Fail;
            report.push_back({{"id", r.id},
                              {"title", r.title},
                              {"status", verify::to_string(r.status)},
                              {"detail", r.detail},
                              {"seconds", r.seconds}});
        }
        const nlohmann::json doc = {{"order_budget", budget}, {"pass", ok}, {"checks", report}};
        if (verify_json)
            std::cout << doc.dump(2) << "\n";
        if (!report_path.empty()) {
            std::ofstream out(report_path);
            out << doc.dump(2) << "\n";
        }
        if (!verify_json)
            std::cout << (ok ? "all checks passed" : "FAILED") << "\n";
        return ok ? exit_ok : exit_verify_failed;
    }

    if (catalog_cmd->parsed()) {
        for (const auto &e : builtin_catalog())
            std::cout << std::left << std::setw(4) << e.name << " rank " << e.lattice.rank() << "  D=" << e.lattice.discriminant()
                      << "  N=" << e.lattice.level() << "  " << e.provenance << "\n";
        std::cout << "z<n> is available for any 1 <= n <= 64\n";
        return exit_ok;
    }
    return exit_input;
}
