#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace symcrit {

enum class ErrorKind {
    InvalidArgument,
    NoRoot,
    NotInSubgroup,
    NotASubgroup,
    UnsupportedPrime,
    BadReduction,
    NotPotentiallyMultiplicative,
    InvalidCall,
    ClassificationError,
    HypothesisViolated,
    NoSuchPoint,
    SingularParameter,
    InvalidWindow,
    ParseError,
    TowerLimit,
    Internal,
};

inline std::string_view error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::InvalidArgument: return "invalid-argument";
        case ErrorKind::NoRoot: return "no-root";
        case ErrorKind::NotInSubgroup: return "not-in-subgroup";
        case ErrorKind::NotASubgroup: return "not-a-subgroup";
        case ErrorKind::UnsupportedPrime: return "unsupported-prime";
        case ErrorKind::BadReduction: return "bad-reduction";
        case ErrorKind::NotPotentiallyMultiplicative: return "not-potentially-multiplicative";
        case ErrorKind::InvalidCall: return "invalid-call";
        case ErrorKind::ClassificationError: return "classification-error";
        case ErrorKind::HypothesisViolated: return "hypothesis-violated";
        case ErrorKind::NoSuchPoint: return "no-such-point";
        case ErrorKind::SingularParameter: return "singular-parameter";
        case ErrorKind::InvalidWindow: return "invalid-window";
        case ErrorKind::ParseError: return "parse-error";
        case ErrorKind::TowerLimit: return "tower-limit";
        case ErrorKind::Internal: return "internal-error";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind), detail_(what) {}

    ErrorKind kind() const noexcept { return kind_; }
    // the message without the kind prefix
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorKind kind_;
    std::string detail_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

} // namespace symcrit
