#pragma once

#include <stdexcept>
#include <string>

namespace sit {

// Base of every error raised by the environment. The message is the
// user-facing diagnostic; the REPL prints it and keeps going.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Duplicate or unknown names, wrong declaration forms.
struct NameError : Error {
    using Error::Error;
};

// Ill-formed infons: unknown relation, arity overflow, minimality unmet,
// argument kind not admitted by its role.
struct ValidationError : Error {
    using Error::Error;
};

// A proposition whose addition would make some situation support an
// infon together with its dual. Carries the offending pair rendered
// in concrete syntax.
struct CoherenceError : Error {
    CoherenceError(const std::string& msg, std::string infon_text, std::string dual_text)
        : Error(msg), infon(std::move(infon_text)), conflicting(std::move(dual_text)) {}

    std::string infon;
    std::string conflicting;
};

// Part-of edits that would break anti-symmetry, and misplaced part-of facts.
struct HierarchyError : Error {
    using Error::Error;
};

// Anchoring failures, each kind distinct.
struct AnchorError : Error {
    enum class Reason { Duplicate, KindMismatch, RestrictionUnsatisfied };

    AnchorError(Reason r, const std::string& msg) : Error(msg), reason(r) {}

    Reason reason;
};

// Constraint definitions that violate range restriction or name unknown
// relations, and evaluation-time misuse (non-ground negated atom).
struct EngineError : Error {
    using Error::Error;
};

// Positioned syntax errors from the frontend.
struct ParseError : Error {
    ParseError(const std::string& msg, int line_no, int column_no)
        : Error(msg), line(line_no), column(column_no) {}

    int line;
    int column;
};

}  // namespace sit
