#pragma once

#include <stdexcept>
#include <string>

namespace dermarket {

// Base class for everything the library throws. `name()` is a stable
// machine-readable tag (e.g. "CurvatureNotNegative") that the CLI emits
// verbatim; what() carries the human-readable detail.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& detail)
        : std::runtime_error(name + ": " + detail), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

// Scenario construction rejected the inputs (CLI exit code 2).
class ValidationError : public Error {
public:
    using Error::Error;
};

// An equilibrium computation failed or left the admissible range (CLI exit code 2).
class SolveError : public Error {
public:
    using Error::Error;
};

// A brute-force verifier could not produce an answer.
class OracleError : public Error {
public:
    using Error::Error;
};

// The scenario document is not valid against the JSON schema. Treated as an
// input/IO problem (CLI exit code 1), unlike semantic validation failures.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& detail) : Error("ParseError", detail) {}
};

}  // namespace dermarket
