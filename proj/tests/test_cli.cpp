#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

namespace
{

struct Run
{
    int code = -1;
    std::string out;
};

Run cli(const std::string &args)
{
    const std::string cmd = std::string(LATTHETA_CLI) + " " + args + " 2>&1";
    Run r;
    FILE *p = popen(cmd.c_str(), "r");
    if (!p)
        return r;
    std::array<char, 4096> buf{};
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), p)) > 0)
        r.out.append(buf.data(), got);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

bool has(const Run &r, const std::string &needle) { return r.out.find(needle) != std::string::npos; }

} // namespace

TEST(Cli, ComputeE8Pair)
{
    const auto r = cli("compute --lattice e8 --degrees 4,4 --order 4 --no-cache");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_TRUE(has(r, "q^2    3/896")) << r.out;
    EXPECT_TRUE(has(r, "weight 24, level 1")) << r.out;
}

TEST(Cli, ComputeZ1PairIsZero)
{
    const auto r = cli("compute --lattice z1 --degrees 1,1 --order 4 --format csv --no-cache");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(r.out, "k,coefficient\n0,0\n1,0\n2,0\n3,0\n4,0\n");
}

TEST(Cli, ComputeA2Theta)
{
    const auto r = cli("compute --lattice a2 --degrees 0 --order 4 --format json --no-cache");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_TRUE(has(r, R"("coeffs": [
    "1",
    "6",
    "0",
    "6",
    "6"
  ])")) << r.out;
    EXPECT_TRUE(has(r, R"("level": "3")")) << r.out;
}

TEST(Cli, ComputeFromFile)
{
    const auto r = cli(std::string("compute --lattice ") + LATTHETA_DATA_DIR +
                       "/lattices/skew3.json --degrees 1,1,1 --order 4 --format csv --no-cache");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_TRUE(has(r, "3,48\n4,-180\n")) << r.out;
}

TEST(Cli, CompareSeparates)
{
    const auto r = cli("compare --lattice z2 --other a2 --order 4 --no-cache");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_TRUE(has(r, "differ at q^1 (4 vs 6)")) << r.out;
    EXPECT_TRUE(has(r, "separated: yes")) << r.out;
}

TEST(Cli, CompareRankMismatch)
{
    const auto r = cli("compare --lattice z2 --other z3 --no-cache");
    EXPECT_EQ(r.code, 2) << r.out;
}

TEST(Cli, InputErrors)
{
    EXPECT_EQ(cli("compute --lattice nosuch --no-cache").code, 2);
    EXPECT_EQ(cli("compute --lattice z2 --degrees a,b --no-cache").code, 2);
    EXPECT_EQ(cli("compute --lattice a2 --degrees 1,2 --normalization pair --no-cache").code, 2);
    EXPECT_EQ(cli("compute").code, 2);
    EXPECT_EQ(cli("frobnicate").code, 2);
    EXPECT_EQ(cli("--help").code, 0);
}

TEST(Cli, ResourceLimit)
{
    const auto r = cli("compute --lattice z8 --degrees 4,4,4 --normalization general --order 1 --no-cache");
    EXPECT_EQ(r.code, 3) << r.out;
    EXPECT_TRUE(has(r, "ResourceLimit")) << r.out;
}

TEST(Cli, VerifyCheapChecks)
{
    const auto r = cli("verify --order-budget 0");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_TRUE(has(r, "all checks passed")) << r.out;
    EXPECT_TRUE(has(r, "[skip]")) << r.out;
}

TEST(Cli, Catalog)
{
    const auto r = cli("catalog");
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(has(r, "e8")) << r.out;
    EXPECT_TRUE(has(r, "D=3  N=3")) << r.out;
}

TEST(Cli, CompareIsospectralPair)
{
    const std::string dir = std::string(LATTHETA_DATA_DIR) + "/lattices/";
    const auto r = cli("compare --lattice " + dir + "iso1729a.json --other " + dir +
                       "iso1729b.json --degrees-list \"0;1,1\" --order 8 --no-cache");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_TRUE(has(r, "Theta_{0}: equal to order 8")) << r.out;
    EXPECT_TRUE(has(r, "Theta_{1,1}: differ at q^6 (-15 vs -8)")) << r.out;
    EXPECT_TRUE(has(r, "separated: yes")) << r.out;
}

TEST(Cli, CompareWithItself)
{
    const auto r = cli("compare --lattice d4 --other d4 --degrees-list \"0;1,1;1,1,1\" --order 4 --no-cache");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_TRUE(has(r, "separated: no")) << r.out;
}
