#pragma once

// Curve corpus records and the line format
//   label [a1,a2,a3,a4,a6] conductor|- class|- [q:a_q ...] [reducible] [t=expr]
// '#' starts a comment; blank lines are ignored.

#include <fstream>
#include <map>
#include <sstream>

#include "symcrit/congruence/family.hpp"

namespace symcrit {

struct CurveRecord {
    std::string label;
    IntegerCurve curve;
    std::optional<BigInt> conductor;
    std::string isogeny_class;
    std::map<u64, i64> trace_cache;
    bool reducible = false;
    std::optional<Rational> family_t;
};

inline std::string to_corpus_line(const CurveRecord& r) {
    std::string s = r.label + " " + r.curve.to_string() + " " + (r.conductor ? r.conductor->str() : "-") + " " +
                    (r.isogeny_class.empty() ? "-" : r.isogeny_class);
    for (const auto& [q, a] : r.trace_cache) s += " " + std::to_string(q) + ":" + std::to_string(a);
    if (r.reducible) s += " reducible";
    if (r.family_t) s += " t=" + r.family_t->to_string();
    return s;
}

namespace detail {

struct LineCursor {
    std::string_view line;
    std::size_t lineno;
    std::size_t pos = 0;

    [[noreturn]] void error(const std::string& what, std::size_t col) const {
        fail(ErrorKind::ParseError, "line " + std::to_string(lineno) + ", column " + std::to_string(col + 1) + ": " + what);
    }
    void skip() {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
    }
    bool done() {
        skip();
        return pos >= line.size();
    }
    // next whitespace-delimited token; brackets may contain spaces
    std::pair<std::string_view, std::size_t> token() {
        skip();
        std::size_t start = pos;
        int depth = 0;
        while (pos < line.size()) {
            char c = line[pos];
            if (c == '[') ++depth;
            if (c == ']') --depth;
            if (depth == 0 && (c == ' ' || c == '\t' || c == '\r')) break;
            ++pos;
        }
        if (depth != 0) error("unbalanced '['", start);
        return {line.substr(start, pos - start), start};
    }
};

inline bool all_digits(std::string_view s, bool allow_sign) {
    if (s.empty()) return false;
    std::size_t i = (allow_sign && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

inline BigInt parse_int(std::string_view s) {
    if (!s.empty() && s[0] == '+') s.remove_prefix(1);
    return BigInt(std::string(s));
}

inline std::array<BigInt, 5> parse_coefficient_list(const LineCursor& cur, std::string_view tok, std::size_t col) {
    if (tok.size() < 2 || tok.front() != '[' || tok.back() != ']') cur.error("expected [a1,a2,a3,a4,a6]", col);
    std::array<BigInt, 5> a;
    std::size_t i = 1, k = 0;
    while (i < tok.size() - 1) {
        std::size_t j = tok.find(',', i);
        if (j == std::string_view::npos || j > tok.size() - 1) j = tok.size() - 1;
        std::string_view f = tok.substr(i, j - i);
        while (!f.empty() && f.front() == ' ') f.remove_prefix(1), ++i;
        while (!f.empty() && f.back() == ' ') f.remove_suffix(1);
        if (k >= 5) cur.error("more than five coefficients", col + i);
        if (!all_digits(f, true)) cur.error("bad coefficient '" + std::string(f) + "'", col + i);
        a[k++] = parse_int(f);
        i = j + 1;
    }
    if (k != 5) cur.error("expected five coefficients, got " + std::to_string(k), col);
    return a;
}

inline IntegerCurve parse_coefficients(const LineCursor& cur, std::string_view tok, std::size_t col) {
    auto a = parse_coefficient_list(cur, tok, col);
    try {
        return IntegerCurve(a);
    } catch (const Error& e) {
        cur.error(e.detail(), col);
    }
}

} // namespace detail

// "[a1,a2,a3,a4,a6]" on its own
inline std::array<BigInt, 5> parse_ainvariants(std::string_view text) {
    detail::LineCursor cur{text, 1};
    if (cur.done()) cur.error("empty curve", 0);
    auto [tok, col] = cur.token();
    auto a = detail::parse_coefficient_list(cur, tok, col);
    if (!cur.done()) cur.error("trailing characters", cur.pos);
    return a;
}

inline std::optional<CurveRecord> parse_corpus_line(std::string_view line, std::size_t lineno) {
    if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
    detail::LineCursor cur{line, lineno};
    if (cur.done()) return std::nullopt;
    CurveRecord r;
    auto [label, lc] = cur.token();
    if (label.front() == '[') cur.error("missing label", lc);
    r.label = std::string(label);
    if (cur.done()) cur.error("missing coefficients", line.size());
    auto [coef, cc] = cur.token();
    r.curve = detail::parse_coefficients(cur, coef, cc);
    if (cur.done()) cur.error("missing conductor", line.size());
    auto [cond, nc] = cur.token();
    if (cond != "-") {
        if (!detail::all_digits(cond, false)) cur.error("bad conductor '" + std::string(cond) + "'", nc);
        r.conductor = detail::parse_int(cond);
        if (*r.conductor <= 0) cur.error("conductor must be positive", nc);
    }
    if (cur.done()) cur.error("missing isogeny class", line.size());
    auto [cls, ic] = cur.token();
    (void)ic;
    if (cls != "-") r.isogeny_class = std::string(cls);
    while (!cur.done()) {
        auto [tok, col] = cur.token();
        if (tok == "reducible") {
            r.reducible = true;
        } else if (tok.substr(0, 2) == "t=") {
            try {
                r.family_t = parse_rational(tok.substr(2));
            } catch (const Error& e) {
                cur.error(e.detail(), col);
            }
        } else if (auto c = tok.find(':'); c != std::string_view::npos) {
            auto qs = tok.substr(0, c), as = tok.substr(c + 1);
            if (!detail::all_digits(qs, false) || qs.size() > 18) cur.error("bad trace prime '" + std::string(qs) + "'", col);
            if (!detail::all_digits(as, true) || as.size() > 18) cur.error("bad trace value '" + std::string(as) + "'", col + c + 1);
            u64 q = std::stoull(std::string(qs));
            if (!is_prime_u64(q)) cur.error(std::to_string(q) + " is not prime", col);
            r.trace_cache[q] = std::stoll(std::string(as));
        } else {
            cur.error("unexpected field '" + std::string(tok) + "'", col);
        }
    }
    return r;
}

inline std::vector<CurveRecord> parse_corpus(std::istream& in) {
    std::vector<CurveRecord> out;
    std::string line;
    for (std::size_t n = 1; std::getline(in, line); ++n)
        if (auto r = parse_corpus_line(line, n)) out.push_back(std::move(*r));
    return out;
}

inline std::vector<CurveRecord> parse_corpus_text(const std::string& text) {
    std::istringstream in(text);
    return parse_corpus(in);
}

inline std::vector<CurveRecord> load_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::ParseError, "cannot open " + path);
    try {
        return parse_corpus(in);
    } catch (const Error& e) {
        fail(e.kind(), path + ": " + e.detail());
    }
}

} // namespace symcrit
