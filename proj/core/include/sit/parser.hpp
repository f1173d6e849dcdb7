#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sit/engine.hpp"
#include "sit/term.hpp"

namespace sit {

// An infon occurrence in source text: a literal or a reference to a named
// infon. Literals are raw (unpadded, unvalidated); resolution happens when
// the statement is applied to an environment.
struct RawInfon {
    std::string relation;
    std::vector<Term> args;
    int polarity = 1;
};

struct InfonExpr {
    std::variant<RawInfon, std::string> value;  // literal or infon name

    bool is_ref() const { return value.index() == 1; }
    const RawInfon& literal() const { return std::get<0>(value); }
    const std::string& ref() const { return std::get<1>(value); }
};

// `sit |= {...}` / `?S |/= <<...>>`: one situation, one mode, a set of
// infon expressions (each expands to one atom).
struct AtomExpr {
    Term situation;
    bool positive = true;
    std::vector<InfonExpr> infons;
};

struct ObjectDecl {
    std::string name;
    std::string kind;  // sigil-free
};

struct RelationDecl {
    std::string name;
    std::vector<std::vector<std::string>> roles;  // alternatives per role, sigil-free
    int minimality = 1;
};

struct ParamDecl {
    std::string name;
    std::string base;  // parameter name or "~KIND"
    std::vector<InfonExpr> restrictions;
};

// `NAME = NAME` without a caret: parameter derivation or infon aliasing,
// resolved against the environment when applied.
struct AliasDecl {
    std::string name;
    std::string target;
};

struct TypeDecl {
    std::string name;  // sigil-free
    std::string param;
    std::string grounding;
    std::vector<InfonExpr> conditions;
};

struct InfonNameDecl {
    std::string name;
    InfonExpr infon;
};

struct PropositionStmt {
    std::string situation;
    bool positive = true;
    std::vector<InfonExpr> infons;
};

struct ConstraintStmt {
    std::string group;
    std::string name;
    std::vector<AtomExpr> lhs;
    Direction direction = Direction::Forward;
    std::vector<AtomExpr> rhs;
    std::vector<InfonExpr> conditions;
};

struct QueryStmt {
    std::vector<AtomExpr> atoms;
};

struct DirectiveStmt {
    std::string name;  // without the leading ':'
    std::vector<std::string> args;
};

using Statement =
    std::variant<ObjectDecl, RelationDecl, ParamDecl, AliasDecl, TypeDecl, InfonNameDecl,
                 PropositionStmt, ConstraintStmt, QueryStmt, DirectiveStmt>;

// Parses exactly one statement. In query mode every non-directive line is
// a query. `line_base` offsets reported line numbers for file input.
Statement parse_statement(const std::string& text, bool query_mode = false, int line_base = 1);

// True when the text is an incomplete statement that expects more input
// (unbalanced brackets or a trailing connective).
bool needs_more_input(const std::string& text);

// True when the text holds no statement at all (whitespace and comments).
bool is_blank_statement(const std::string& text);

}  // namespace sit
