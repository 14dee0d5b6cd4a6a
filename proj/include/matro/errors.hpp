#pragma once

#include <stdexcept>
#include <string>

namespace matro {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyFamilyError : Error {
    EmptyFamilyError() : Error("bases family is empty") {}
};

struct WrongCardinalityError : Error {
    explicit WrongCardinalityError(const std::string& set)
        : Error("basis has wrong cardinality: " + set) {}
};

struct ExchangeViolatedError : Error {
    ExchangeViolatedError(const std::string& b1, const std::string& b2, int e)
        : Error("exchange axiom violated: B1=" + b1 + " B2=" + b2 +
                " e=" + std::to_string(e) + " admits no valid f") {}
};

struct BoundsViolatedError : Error {
    using Error::Error;
};

struct RankZeroError : Error {
    RankZeroError() : Error("truncation requires rank >= 1") {}
};

struct NotCircuitHyperplaneError : Error {
    explicit NotCircuitHyperplaneError(const std::string& set)
        : Error("set is not a circuit-hyperplane: " + set) {}
};

struct BasepointDegenerateError : Error {
    explicit BasepointDegenerateError(int p)
        : Error("basepoint " + std::to_string(p) + " is a loop or a coloop") {}
};

struct SizeMismatchError : Error {
    SizeMismatchError() : Error("ground sets have different sizes") {}
};

struct SameElementError : Error {
    SameElementError() : Error("elements must be distinct") {}
};

struct PreconditionViolatedError : Error {
    using Error::Error;
};

struct ParseError : Error {
    int line;
    ParseError(int line_, const std::string& reason)
        : Error("parse error at line " + std::to_string(line_) + ": " + reason),
          line(line_) {}
};

struct CountMismatchError : Error {
    CountMismatchError(std::size_t expected, std::size_t got)
        : Error("catalog count mismatch: header says " + std::to_string(expected) +
                ", found " + std::to_string(got)) {}
};

struct NonpositivePointError : Error {
    NonpositivePointError() : Error("evaluation point must have x > 0 and y > 0") {}
};

} // namespace matro
