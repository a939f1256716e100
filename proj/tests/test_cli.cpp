#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "symcrit/criteria/frobenius.hpp"

using namespace symcrit;

namespace {

const std::string kBin = SYMCRIT_BIN;
const std::string kData = SYMCRIT_DATA;

struct Outcome {
    int code = -1;
    std::string out;
};

Outcome run(const std::string& args) {
    Outcome r;
    std::string cmd = "'" + kBin + "' " + args + " 2>/dev/null";
    FILE* f = popen(cmd.c_str(), "r");
    if (!f) return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, f)) > 0) r.out.append(buf, n);
    int st = pclose(f);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::vector<nlohmann::json> json_lines(const std::string& s) {
    std::vector<nlohmann::json> v;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);)
        if (!line.empty()) v.push_back(nlohmann::json::parse(line));
    return v;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string data(const std::string& name) { return "'" + kData + "/" + name + "'"; }

} // namespace

TEST(Cli, AnalyzeExitCodes) {
    Outcome r = run("analyze " + data("anti_pair.curves") + " --ell 11");
    ASSERT_EQ(r.code, 0);
    auto j = json_lines(r.out).at(0);
    EXPECT_EQ(j["report"]["criterion"], "ThmMultiplicative");
    EXPECT_EQ(j["report"]["type"], "anti-symplectic");
    EXPECT_EQ(j["report"]["witnesses"]["h1"], 4);
    EXPECT_EQ(j["report"]["witnesses"]["h2"], 2);

    // both curves are multiplicative at 13 with v(Delta) = 13 and 1
    Outcome k = run("analyze " + data("anti_pair.curves") + " --ell 13");
    ASSERT_EQ(k.code, 0);
    auto kj = json_lines(k.out).at(0);
    EXPECT_EQ(kj["report"]["criterion"], "KrausOesterle");
    EXPECT_EQ(kj["report"]["type"], "anti-symplectic");

    Outcome n = run("analyze " + data("anti_pair.curves") + " --ell 7");
    EXPECT_EQ(n.code, 2);
    EXPECT_EQ(json_lines(n.out).at(0)["report"]["applies"], false);

    EXPECT_EQ(run("analyze " + data("missing.curves") + " --ell 11").code, 1);
    EXPECT_EQ(run("analyze " + data("anti_pair.curves") + " --ell 12").code, 1);
    EXPECT_EQ(run("analyze " + data("anti_pair.curves")).code, 1);
    EXPECT_EQ(run("frobnicate").code, 1);
}

TEST(Cli, TextIsARenderingOfTheSameReport) {
    Outcome r = run("analyze " + data("anti_pair.curves") + " --ell 53 --format text");
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("KrausOesterle at ell = 53, p = 5: anti-symplectic"), std::string::npos);
    EXPECT_NE(r.out.find("v_disc1=3 v_disc2=1"), std::string::npos);
}

TEST(Cli, DispatchMixedPair) {
    Outcome r = run("dispatch " + data("mixed_pair.curves"));
    ASSERT_EQ(r.code, 0);
    auto j = json_lines(r.out).at(0);
    EXPECT_EQ(j["primes"], nlohmann::json::array({31, 167}));
    EXPECT_EQ(j["agreement"], true);
    EXPECT_EQ(j["type"], "symplectic");
    EXPECT_EQ(j["reports"][0]["criterion"], "ThmMixed");
    EXPECT_EQ(j["reports"][0]["witnesses"]["s"], 4);
    EXPECT_EQ(j["reports"][1]["criterion"], "KrausOesterle");

    Outcome a = run("dispatch " + data("anti_pair.curves") + " --ell-range 5-60");
    ASSERT_EQ(a.code, 0);
    auto aj = json_lines(a.out).at(0);
    EXPECT_EQ(aj["type"], "anti-symplectic");
    EXPECT_EQ(run("dispatch " + data("mixed_pair.curves") + " --ell-range 60-5").code, 1);
}

TEST(Cli, Family) {
    Outcome r = run("family 2 '2*11^5' '2/11^5'");
    ASSERT_EQ(r.code, 0);
    auto v = json_lines(r.out);
    ASSERT_EQ(v.size(), 3u);
    EXPECT_EQ(v[0]["curve"], "[-1,-2,-2,-70,-210]");
    EXPECT_EQ(v[1]["t"], "322102");
    EXPECT_EQ(v[2]["t"], "2/161051");
    EXPECT_EQ(run("family 0").code, 1);
    EXPECT_EQ(run("family 2 1/0").code, 1);
}

TEST(Cli, Frobdata) {
    Outcome r = run("frobdata --curve '[0,30,0,30,6]' --ell 31");
    ASSERT_EQ(r.code, 0);
    auto j = json_lines(r.out).at(0);
    EXPECT_EQ(j["h_class"], 1);
    EXPECT_EQ(j["a_ell"], -3);
    // a curve with all of E[5] rational over F_31
    FieldHandle F = TowerField::prime_field(31);
    for (i64 a4 = 0; a4 < 31; ++a4)
        for (i64 a6 = 0; a6 < 31; ++a6) {
            if ((4 * a4 * a4 * a4 + 27 * a6 * a6) % 31 == 0) continue;
            if (rational_kernel_polynomials(WeierstrassCurve(F, 0, 0, 0, a4, a6), 5).size() != 6) continue;
            Outcome s = run("frobdata --curve '[0,0,0," + std::to_string(a4) + "," + std::to_string(a6) + "]' --ell 31");
            EXPECT_EQ(s.code, 2);
            return;
        }
    ADD_FAILURE() << "no curve with scalar Frobenius found";
}

TEST(Cli, SearchIsDeterministic) {
    const std::string a = testing::TempDir() + "search_a.jsonl", b = testing::TempDir() + "search_b.jsonl";
    Outcome r1 = run("search --corpus " + data("congruences.corpus") + " --out '" + a + "' --jobs 4 --seed 7");
    Outcome r2 = run("search --corpus " + data("congruences.corpus") + " --out '" + b + "' --jobs 1 --seed 7");
    ASSERT_EQ(r1.code, 0);
    ASSERT_EQ(r2.code, 0);
    std::string sa = slurp(a), sb = slurp(b);
    EXPECT_FALSE(sa.empty());
    EXPECT_EQ(sa, sb);
    auto lines = json_lines(sa);
    ASSERT_EQ(lines.size(), 6u);
    auto s = lines.back()["summary"];
    EXPECT_EQ(s["pairs"], 5);
    EXPECT_EQ(s["symplectic"], 4);
    EXPECT_EQ(s["anti-symplectic"], 1);
    EXPECT_EQ(s["conflict"], 0);
}

TEST(Cli, SearchExcludesRecordsWithoutConductor) {
    const std::string corpus = testing::TempDir() + "noconductor.corpus";
    std::ofstream(corpus) << "11a1 [0,-1,1,-10,-20] 11 11a\nn [0,0,1,-1,0] - -\n";
    Outcome r = run("search --corpus '" + corpus + "'");
    ASSERT_EQ(r.code, 0);
    auto lines = json_lines(r.out);
    ASSERT_EQ(lines.size(), 1u);
    EXPECT_EQ(lines[0]["summary"]["pairs"], 0);
    std::string cmd = "'" + kBin + "' search --corpus '" + corpus + "' 2>&1 >/dev/null";
    FILE* f = popen(cmd.c_str(), "r");
    char buf[512] = {};
    std::size_t n = fread(buf, 1, sizeof buf - 1, f);
    pclose(f);
    EXPECT_NE(std::string(buf, n).find("no conductor"), std::string::npos);
}
