// End-to-end acceptance checks. One line per criterion:
//   PASS|FAIL|SKIP  <name>  (<seconds> s)  <detail>
// Exit status is nonzero iff some criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "symcrit/congruence/search.hpp"

using namespace symcrit;

namespace {

const std::string kData = SYMCRIT_DATA;

struct Outcome {
    enum { Pass, Fail, Skip } state = Pass;
    std::string detail;
};

// collects failed checks; the first one becomes the detail line
struct Checker {
    std::vector<std::string> failures;
    void operator()(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
    Outcome done(const std::string& ok_detail) const {
        if (failures.empty()) return {Outcome::Pass, ok_detail};
        std::string s = failures.front();
        if (failures.size() > 1) s += " (+" + std::to_string(failures.size() - 1) + " more)";
        return {Outcome::Fail, s};
    }
};

IntegerCurve curve(const std::string& text) { return IntegerCurve(parse_ainvariants(text)); }

i64 witness(const CriterionReport& r, const std::string& key) {
    auto it = r.witnesses.find(key);
    return it != r.witnesses.end() && std::holds_alternative<i64>(it->second) ? std::get<i64>(it->second) : -999;
}

bool is(const CriterionReport& r, SymplecticType t) { return r.applies && r.type && *r.type == t; }

int shell(const std::string& cmd) {
    int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome multiplicative_pair() {
    Checker check;
    IntegerCurve E1 = curve("[0,1,0,-17930962498800,-28929993729305827500]"), E2 = curve("[0,1,0,-7090720,7507005428]");
    LocalData d1 = local_data(E1, 11), d2 = local_data(E2, 11);
    check(d1.kind == ReductionKind::SplitMult && d2.kind == ReductionKind::SplitMult, "not split multiplicative at 11");
    check(d1.v_j == -5 && d2.v_j == -5, "v(j) is not -5");
    // the displayed residues are j~^((ell-1)/p)
    check(powmod(d1.j_unit, 2, 11) == 3 && powmod(d2.j_unit, 2, 11) == 5, "j~^2 is not 3 and 5 mod 11");
    check(is(thm_multiplicative(E1, E2, 5, 11), SymplecticType::AntiSymplectic), "multiplicative criterion at 11 is not anti-symplectic");
    CriterionReport k = ko_criterion(E1, E2, 5, 53);
    check(is(k, SymplecticType::AntiSymplectic), "valuation criterion at 53 is not anti-symplectic");
    check(witness(k, "v_disc1") * witness(k, "v_disc2") % 5 == 3, "valuation product at 53 is not 3 mod 5");
    return check.done("split at 11, v(j) = -5, j~^2 = 3, 5; anti-symplectic at 11 and 53");
}

Outcome family_triple() {
    Checker check;
    IntegerCurve A = family_curve(parse_rational("2*11^5")), B = family_curve(parse_rational("2/11^5")), C = family_curve(Rational(2));
    CriterionReport m = thm_multiplicative(A, B, 5, 11);
    check(is(m, SymplecticType::Symplectic), "multiplicative criterion on the first pair is not symplectic");
    check(witness(m, "h1") == 4 && witness(m, "h2") == 1, "logs are not {4, 1}");
    check(m.witnesses.count("zeta") && std::get<std::string>(m.witnesses.at("zeta")) == "4", "zeta is not 4");
    check(is(thm_mixed(A, C, 5, 11), SymplecticType::Symplectic), "mixed criterion E(2*11^5) vs E(2) is not symplectic");
    check(is(thm_mixed(B, C, 5, 11), SymplecticType::Symplectic), "mixed criterion E(2/11^5) vs E(2) is not symplectic");
    return check.done("logs {4, 1} under zeta = 4; all three verdicts symplectic");
}

Outcome mixed_pair() {
    Checker check;
    WeierstrassCurve W(TowerField::prime_field(31), 0, 30, 0, 30, 6);
    FrobeniusData fd = frobenius_symplectic_data(W, 5);
    check(fd.h_class == 1, "h-class is not +1");
    FieldHandle F = TowerField::prime_field(31);
    check(log_in_mu_p(FieldElement(F, 16), FieldElement(F, 2), 5) == 4, "Log_2(16) is not 4");
    IntegerCurve E = curve("[0,-1,0,-628836,206056040]"), E2 = curve("[0,-1,0,-1,6]");
    CriterionReport m = thm_mixed(E, E2, 5, 31);
    check(is(m, SymplecticType::Symplectic), "mixed criterion at 31 is not symplectic");
    check(witness(m, "s") == 4, "s is not 4");
    check(is(ko_criterion(E, E2, 5, 167), SymplecticType::Symplectic), "valuation criterion at 167 is not symplectic");
    return check.done("h-class +1, s = 4, symplectic at 31 and 167");
}

Outcome sturm() {
    Checker check;
    BigInt a = sturm_bound(227370, 227370), b = sturm_bound(103540, 3340);
    check(a == 108864, "bound for 227370 is " + a.str());
    check(b == 32256, "bound for (103540, 3340) is " + b.str());
    return check.done("108864 and 32256");
}

Outcome stress(bool enabled) {
    if (!enabled) return {Outcome::Skip, "run with --stress (hours)"};
    Checker check;
    FieldHandle F = TowerField::prime_field(73);
    WeierstrassCurve E1(F, 0, 0, 0, -3, 6), E2(F, 0, 0, 0, 55, 5);
    FrobeniusOptions opt;
    opt.max_absolute_degree = std::numeric_limits<std::size_t>::max();
    for (const auto* E : {&E1, &E2}) {
        std::map<int, int> degs;
        for (const auto& [g, m] : factor(division_polynomial(*E, 211)).factors) degs[g.degree()] += m;
        std::string shape;
        for (auto [d, c] : degs) shape += std::to_string(c) + "x" + std::to_string(d) + " ";
        std::cerr << "psi_211 factor degrees: " << shape << "\n";
        check(degs == std::map<int, int>{{21, 5}, {4431, 5}}, "psi_211 factors as " + shape);
        check(frobenius_symplectic_data(*E, 211, opt).h_class == 1, "h-class is not +1");
    }
    check(is(thm_goodred(E1, E2, 211, opt), SymplecticType::Symplectic), "good-reduction criterion is not symplectic");
    return check.done("5x21 + 5x4431, both h-classes +1, symplectic");
}

struct Suite {
    std::string name, binary, filter;
};

Outcome property_suites(const std::string& bindir) {
    const Suite suites[] = {
        {"pairing", "test_curves", "Pairing.*"},
        {"division polynomials", "test_curves", "Division.*"},
        {"isogenies", "test_curves", "Isogeny.*"},
        {"point counting", "test_curves", "Counting.SweepAgainstPairCount:Counting.BsgsAgainstSweep"},
        {"family invariants", "test_congruence", "Family.InvariantIdentities"},
        {"family torsion point", "test_congruence", "Family.TorsionPointOrderAndHomomorphism"},
        {"criterion properties", "test_criteria", "Criteria.*"},
    };
    Checker check;
    std::string times;
    for (const auto& s : suites) {
        auto t0 = std::chrono::steady_clock::now();
        int rc = shell("'" + bindir + "/" + s.binary + "' --gtest_filter='" + s.filter + "' > /dev/null 2>&1");
        double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        check(rc == 0, s.name + " failed");
        check(sec < 60, s.name + " took " + std::to_string(sec) + " s");
        char buf[32];
        std::snprintf(buf, sizeof buf, " %.1f s", sec);
        times += (times.empty() ? "" : ", ") + s.name + buf;
    }
    return check.done(times);
}

Outcome determinism(const std::string& cli) {
    namespace fs = std::filesystem;
    fs::path root = fs::temp_directory_path() / ("symcrit_accept_" + std::to_string(::getpid()));
    const std::string d = "'" + kData + "/";
    const std::vector<std::pair<std::string, std::string>> runs = {
        {"analyze.json", "analyze " + d + "anti_pair.curves' --ell 11"},
        {"dispatch_anti.json", "dispatch " + d + "anti_pair.curves' --ell-range 5-60"},
        {"dispatch_mixed.json", "dispatch " + d + "mixed_pair.curves'"},
        {"dispatch_family.json", "dispatch " + d + "family_pair.curves' --ell 11"},
        {"family.json", "family 2 '2*11^5' '2/11^5'"},
        {"frobdata.json", "frobdata --curve '[0,30,0,30,6]' --ell 31"},
        {"search.json", "search --corpus " + d + "congruences.corpus' --jobs 4"},
    };
    Checker check;
    for (int pass = 0; pass < 2; ++pass) {
        fs::create_directories(root / std::to_string(pass));
        for (const auto& [file, args] : runs) {
            int rc = shell("'" + cli + "' " + args + " --seed 12345 > '" + (root / std::to_string(pass) / file).string() + "' 2>/dev/null");
            check(rc == 0, file + " exited with " + std::to_string(rc));
        }
    }
    for (const auto& [file, args] : runs) {
        std::string a = slurp(root / "0" / file), b = slurp(root / "1" / file);
        check(!a.empty(), file + " is empty");
        check(a == b, file + " differs between runs");
    }
    fs::remove_all(root);
    return check.done(std::to_string(runs.size()) + " report files byte-identical");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance checks"};
    bool run_stress = false;
    std::string bindir = SYMCRIT_TEST_BIN_DIR, cli = SYMCRIT_BIN;
    app.add_flag("--stress", run_stress, "include the p = 211 good-reduction case");
    app.add_option("--bin-dir", bindir, "directory holding the unit test binaries");
    app.add_option("--cli", cli, "path of the command-line tool");
    CLI11_PARSE(app, argc, argv);

    struct Criterion {
        std::string name;
        double limit; // seconds, 0 for none
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {"multiplicative pair at 11 and 53", 5, multiplicative_pair},
        {"family triple at 11", 30, family_triple},
        {"mixed pair at 31 and 167", 30, mixed_pair},
        {"Sturm bounds", 0, sturm},
        {"p = 211 good reduction over F_73", 0, [&] { return stress(run_stress); }},
        {"property suites", 0, [&] { return property_suites(bindir); }},
        {"determinism", 0, [&] { return determinism(cli); }},
    };
    bool failed = false;
    for (const auto& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {Outcome::Fail, std::string("exception: ") + e.what()};
        }
        double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (o.state == Outcome::Pass && c.limit > 0 && sec > c.limit) o = {Outcome::Fail, "over the " + std::to_string(c.limit) + " s limit"};
        const char* tag = o.state == Outcome::Pass ? "PASS" : o.state == Outcome::Fail ? "FAIL" : "SKIP";
        std::printf("%s  %-34s (%.2f s)  %s\n", tag, c.name.c_str(), sec, o.detail.c_str());
        std::fflush(stdout);
        failed |= o.state == Outcome::Fail;
    }
    return failed ? 1 : 0;
}
