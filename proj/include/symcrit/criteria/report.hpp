#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "symcrit/fields/modarith.hpp"

namespace symcrit {

enum class SymplecticType { Symplectic, AntiSymplectic };

inline std::string type_name(SymplecticType t) { return t == SymplecticType::Symplectic ? "symplectic" : "anti-symplectic"; }

using Witness = std::variant<i64, std::string>;

struct CriterionReport {
    std::string criterion; // ThmMultiplicative, ThmMixed, ThmGoodRed, KrausOesterle, External:<name>, None
    u64 ell = 0, p = 0;
    bool applies = false;
    std::optional<SymplecticType> type;
    std::map<std::string, Witness> witnesses;
    std::vector<std::string> narrative;

    CriterionReport() = default;
    CriterionReport(std::string c, u64 l, u64 q) : criterion(std::move(c)), ell(l), p(q) {}

    CriterionReport& note(std::string line) {
        narrative.push_back(std::move(line));
        return *this;
    }
    // inapplicable, with the failed condition as the last narrative line
    CriterionReport& reject(std::string why) {
        applies = false;
        type.reset();
        narrative.push_back("not applicable: " + why);
        return *this;
    }
};

inline nlohmann::ordered_json to_json(const CriterionReport& r) {
    nlohmann::ordered_json j;
    j["criterion"] = r.criterion;
    j["ell"] = r.ell;
    j["p"] = r.p;
    j["applies"] = r.applies;
    j["type"] = r.type ? nlohmann::ordered_json(type_name(*r.type)) : nlohmann::ordered_json(nullptr);
    nlohmann::ordered_json w = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.witnesses) {
        if (std::holds_alternative<i64>(v))
            w[k] = std::get<i64>(v);
        else
            w[k] = std::get<std::string>(v);
    }
    j["witnesses"] = w;
    j["narrative"] = r.narrative;
    return j;
}

inline std::string to_text(const CriterionReport& r) {
    std::string s = r.criterion + " at ell = " + std::to_string(r.ell) + ", p = " + std::to_string(r.p) + ": ";
    s += r.applies ? (r.type ? type_name(*r.type) : std::string("applies (not evaluated here)")) : std::string("does not apply");
    s += "\n";
    if (!r.witnesses.empty()) {
        s += "  witnesses:";
        for (const auto& [k, v] : r.witnesses)
            s += " " + k + "=" + (std::holds_alternative<i64>(v) ? std::to_string(std::get<i64>(v)) : std::get<std::string>(v));
        s += "\n";
    }
    for (const auto& line : r.narrative) s += "  " + line + "\n";
    return s;
}

} // namespace symcrit
