#pragma once

#include <stdexcept>
#include <string>

namespace smlat {

// Base for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input text (JSON syntax, missing fields, bad types).
struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error("parse error: " + msg) {}
};

// Structurally well-formed input violating a model invariant
// (duplicate edge, pref not a permutation, quota < 1, ...).
struct ValidationError : Error {
    explicit ValidationError(const std::string& msg) : Error("invalid input: " + msg) {}
};

// Precondition violation on an operation (Z outside a domain, unstable
// matching where a stable one is required, ...).
struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// A theory-guaranteed invariant failed at runtime; signals a bug in the
// engine (or a counterexample worth a report), never a user mistake.
struct InternalError : Error {
    explicit InternalError(const std::string& msg) : Error("internal invariant violated: " + msg) {}
};

} // namespace smlat
