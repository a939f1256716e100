// symcrit: symplectic type of p-torsion isomorphisms between elliptic curves.
//
// Exit codes: 0 a criterion applied, 2 nothing applied (or hypotheses failed),
// 1 bad input.

#include <chrono>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "symcrit/congruence/search.hpp"

using namespace symcrit;
using nlohmann::ordered_json;

namespace {

struct RunConfig {
    u64 p = 5;
    std::vector<u64> ells;
    std::string ell_range;
    std::string input;
    std::string corpus;
    std::string out;
    std::string curve;
    std::vector<std::string> tvalues;
    u64 seed = 0;
    bool stress = false;
    std::string format = "json";
    unsigned jobs = 1;
    std::size_t max_degree = 200;
};

FrobeniusOptions frob_options(const RunConfig& c) {
    FrobeniusOptions o;
    o.seed = c.seed;
    o.max_absolute_degree = c.stress ? std::numeric_limits<std::size_t>::max() : c.max_degree;
    return o;
}

void emit(const RunConfig& c, std::ostream& os, const ordered_json& j, const std::string& text) {
    if (c.format == "json")
        os << j.dump() << "\n";
    else
        os << text;
}

std::pair<CurveRecord, CurveRecord> load_pair(const std::string& path) {
    auto recs = load_corpus(path);
    if (recs.size() != 2) fail(ErrorKind::ParseError, path + ": expected exactly two curves, found " + std::to_string(recs.size()));
    return {recs[0], recs[1]};
}

void check_p(u64 p) {
    if (!is_prime_u64(p) || p < 3) fail(ErrorKind::InvalidArgument, "p must be an odd prime");
}

std::pair<u64, u64> parse_range(const std::string& s) {
    auto dash = s.find('-');
    if (dash == std::string::npos) fail(ErrorKind::ParseError, "ell range '" + s + "' is not of the form a-b");
    try {
        std::size_t used = 0;
        u64 a = std::stoull(s.substr(0, dash), &used);
        if (used != dash) throw std::invalid_argument(s);
        u64 b = std::stoull(s.substr(dash + 1), &used);
        if (used != s.size() - dash - 1) throw std::invalid_argument(s);
        if (a > b || b > (u64(1) << 32)) throw std::out_of_range(s);
        return {a, b};
    } catch (const std::logic_error&) {
        fail(ErrorKind::ParseError, "ell range '" + s + "' is not of the form a-b");
    }
}

int cmd_analyze(const RunConfig& c) {
    check_p(c.p);
    if (c.ells.size() != 1) fail(ErrorKind::InvalidArgument, "analyze needs exactly one --ell");
    auto [A, B] = load_pair(c.input);
    CriterionReport r = dispatch(A.curve, B.curve, c.p, c.ells[0], frob_options(c));
    ordered_json j = {{"left", A.label}, {"right", B.label}, {"report", to_json(r)}};
    emit(c, std::cout, j, A.label + " / " + B.label + "\n" + to_text(r));
    return r.applies ? 0 : 2;
}

int cmd_dispatch(const RunConfig& c) {
    check_p(c.p);
    auto [A, B] = load_pair(c.input);
    std::vector<u64> ells;
    if (!c.ell_range.empty()) {
        auto [lo, hi] = parse_range(c.ell_range);
        for (u64 q = std::max<u64>(lo, 5); q <= hi; ++q) {
            if (!is_prime_u64(q) || q == c.p) continue;
            if (A.curve.discriminant() % q == 0 || B.curve.discriminant() % q == 0) {
                // bad for a minimal model, not just for the given one
                if (local_data(A.curve, q).kind != ReductionKind::Good || local_data(B.curve, q).kind != ReductionKind::Good) ells.push_back(q);
            }
        }
    }
    for (u64 q : c.ells)
        if (std::find(ells.begin(), ells.end(), q) == ells.end()) ells.push_back(q);
    std::sort(ells.begin(), ells.end());
    std::vector<CriterionReport> reports;
    for (u64 ell : ells) {
        CriterionReport r = dispatch(A.curve, B.curve, c.p, ell, frob_options(c));
        if (r.applies) reports.push_back(std::move(r));
    }
    std::optional<SymplecticType> agreed;
    bool agree = true;
    for (const auto& r : reports) {
        if (!r.type) continue;
        if (agreed && *agreed != *r.type) agree = false;
        agreed = r.type;
    }
    ordered_json j = {{"left", A.label}, {"right", B.label}, {"p", c.p}, {"primes", ells}, {"agreement", agree}};
    j["type"] = agree && agreed ? ordered_json(type_name(*agreed)) : ordered_json(nullptr);
    ordered_json reps = ordered_json::array();
    std::string text = A.label + " / " + B.label + ", p = " + std::to_string(c.p) + "\n";
    for (const auto& r : reports) {
        reps.push_back(to_json(r));
        text += to_text(r);
    }
    j["reports"] = reps;
    text += agree ? "criteria agree\n" : "CRITERIA DISAGREE\n";
    emit(c, std::cout, j, text);
    if (!agree) {
        std::cerr << "error: applicable criteria disagree\n";
        return 1;
    }
    return reports.empty() ? 2 : 0;
}

int cmd_search(const RunConfig& c) {
    check_p(c.p);
    auto corpus = load_corpus(c.corpus);
    SearchOptions opt;
    opt.jobs = c.jobs;
    opt.frobenius = frob_options(c);
    opt.trace.seed = c.seed;
    SearchResult res = find_triples(corpus, c.p, opt);
    for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
    std::ofstream file;
    if (!c.out.empty()) {
        file.open(c.out);
        if (!file) fail(ErrorKind::InvalidArgument, "cannot write " + c.out);
    }
    std::ostream& os = c.out.empty() ? std::cout : file;
    std::map<std::string, std::size_t> summary{{"symplectic", 0}, {"anti-symplectic", 0}, {"undecided", 0}, {"conflict", 0}};
    for (const auto& pr : res.pairs) {
        ordered_json j = to_json(pr);
        ++summary[j["verdict"].get<std::string>()];
        std::string text = pr.pair.left.label + " / " + pr.pair.right.label + ": " + std::string(pair_status_name(pr.pair.status)) +
                           " (" + pr.pair.method + "), verdict " + j["verdict"].get<std::string>() + "\n";
        for (const auto& r : pr.reports) text += to_text(r);
        for (const auto& e : pr.errors) text += "  error: " + e + "\n";
        emit(c, os, j, text);
    }
    ordered_json s = {{"summary", {{"pairs", res.pairs.size()},
                                   {"symplectic", summary["symplectic"]},
                                   {"anti-symplectic", summary["anti-symplectic"]},
                                   {"undecided", summary["undecided"]},
                                   {"conflict", summary["conflict"]}}}};
    std::string st = "pairs " + std::to_string(res.pairs.size()) + ": symplectic " + std::to_string(summary["symplectic"]) +
                     ", anti-symplectic " + std::to_string(summary["anti-symplectic"]) + ", undecided " +
                     std::to_string(summary["undecided"]) + ", conflict " + std::to_string(summary["conflict"]) + "\n";
    emit(c, os, s, st);
    return 0;
}

int cmd_family(const RunConfig& c) {
    int rc = 0;
    for (const auto& tv : c.tvalues) {
        try {
            Rational t = parse_rational(tv);
            IntegerCurve E = family_curve(t);
            CurveRecord r{"E(t=" + t.to_string() + ")", E};
            r.family_t = t;
            ordered_json j = {{"t", t.to_string()},       {"curve", E.to_string()},    {"c4", E.c4().str()},
                              {"c6", E.c6().str()},       {"discriminant", E.discriminant().str()},
                              {"line", to_corpus_line(r)}};
            emit(c, std::cout, j,
                 to_corpus_line(r) + "\n# c4 = " + E.c4().str() + ", c6 = " + E.c6().str() + ", disc = " + E.discriminant().str() + "\n");
        } catch (const Error& e) {
            rc = 1;
            emit(c, std::cout, ordered_json{{"t", tv}, {"error", e.what()}}, "# t = " + tv + ": " + e.what() + "\n");
        }
    }
    return rc;
}

int cmd_frobdata(const RunConfig& c) {
    check_p(c.p);
    if (c.ells.size() != 1) fail(ErrorKind::InvalidArgument, "frobdata needs exactly one --ell");
    u64 ell = c.ells[0];
    if (!is_prime_u64(ell) || ell >= kMaxModulus) fail(ErrorKind::InvalidArgument, "ell must be a prime below 2^62");
    auto a = parse_ainvariants(c.curve);
    FieldHandle F = TowerField::prime_field(ell);
    std::array<FieldElement, 5> fa;
    for (int i = 0; i < 5; ++i) fa[i] = FieldElement::from_big(F, a[i]);
    WeierstrassCurve E(F, fa);
    auto t0 = std::chrono::steady_clock::now();
    try {
        FrobeniusData d = frobenius_symplectic_data(E, c.p, frob_options(c));
        double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        ordered_json j = {{"ell", ell},         {"p", c.p},         {"a_ell", d.a_ell},    {"a_mod_p", d.a_mod_p},
                          {"h_class", d.h_class}, {"zeta", d.zeta.zeta.to_string()}, {"tower_degrees", d.tower_degrees},
                          {"kernel", d.kernel.to_string()}, {"narrative", d.narrative}};
        std::string text = "a_ell = " + std::to_string(d.a_ell) + " (" + std::to_string(d.a_mod_p) + " mod p), h class " +
                           (d.h_class > 0 ? "+1" : "-1") + ", tower degrees";
        for (auto k : d.tower_degrees) text += " " + std::to_string(k);
        emit(c, std::cout, j, text + "\n");
        std::cerr << "elapsed " << static_cast<long long>(ms) << " ms\n";
        return 0;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::HypothesisViolated && e.kind() != ErrorKind::TowerLimit) throw;
        emit(c, std::cout, ordered_json{{"ell", ell}, {"p", c.p}, {"error", e.what()}}, std::string(e.what()) + "\n");
        return 2;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"symplectic type of p-torsion isomorphisms of elliptic curves"};
    app.require_subcommand(1);
    RunConfig c;
    auto common = [&](CLI::App* s) {
        s->add_option("--p", c.p, "torsion prime")->capture_default_str();
        s->add_option("--seed", c.seed, "seed for all random choices")->capture_default_str();
        s->add_flag("--stress", c.stress, "lift the tower degree limit");
        s->add_option("--max-degree", c.max_degree, "largest absolute field degree built without --stress")->capture_default_str();
        s->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
    };
    auto* analyze = app.add_subcommand("analyze", "run the criterion covering one prime ell");
    common(analyze);
    analyze->add_option("pair", c.input, "file with two curves in corpus format")->required();
    analyze->add_option("--ell", c.ells, "local prime")->required();

    auto* disp = app.add_subcommand("dispatch", "run the criteria at every bad prime in a range");
    common(disp);
    disp->add_option("pair", c.input, "file with two curves in corpus format")->required();
    disp->add_option("--ell", c.ells, "extra primes to include (may repeat)");
    disp->add_option("--ell-range", c.ell_range, "range a-b of candidate primes")->default_val("5-1000");

    auto* search = app.add_subcommand("search", "find congruent pairs in a corpus and decide their types");
    common(search);
    search->add_option("--corpus", c.corpus, "corpus file")->required();
    search->add_option("--out", c.out, "report file (default stdout)");
    search->add_option("--jobs", c.jobs, "worker threads")->capture_default_str();

    auto* family = app.add_subcommand("family", "print E(t) for rational t");
    common(family);
    family->add_option("t", c.tvalues, "parameters, e.g. 2*11^5 or 2/11^5")->required();

    auto* frob = app.add_subcommand("frobdata", "Frobenius data of a curve over F_ell");
    common(frob);
    frob->add_option("--curve", c.curve, "[a1,a2,a3,a4,a6]")->required();
    frob->add_option("--ell", c.ells, "field characteristic")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    try {
        if (*analyze) return cmd_analyze(c);
        if (*disp) return cmd_dispatch(c);
        if (*search) return cmd_search(c);
        if (*family) return cmd_family(c);
        if (*frob) return cmd_frobdata(c);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
