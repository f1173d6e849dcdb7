#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "sit/environment.hpp"
#include "sit/parser.hpp"

namespace sit {

// Deterministic textual form of everything user-declared and asserted:
// declarations in registration order, then propositions (w first, then
// situations by id, own infons in insertion order), then constraints by
// group and name. Loading the text into a fresh environment reproduces
// the knowledge base; saving again reproduces the bytes.
std::string serialize_kb(const Environment& env);

// DOT digraph of the situation hierarchy: every situation as a node, one
// edge per direct part-of link, and top-level situations attached to w.
std::string serialize_graph(const Environment& env);

// REPL-level state. Directives mutate only this; the store is reached
// through statements.
struct SessionState {
    enum class Mode { Assert, Query };

    Mode mode = Mode::Assert;
    std::optional<std::string> anchoring;
    std::optional<std::string> perspectivity;
    std::optional<std::string> antecedent_persp;
    std::optional<std::size_t> max_solutions;  // nullopt: all
    bool trace = false;                        // rule-firing trace
    bool anchor_trace = false;                 // per-parameter anchoring trace
};

// The interactive interpreter: line assembly, statement dispatch,
// knowledge-base persistence, and graph export. Input errors never
// propagate out of repl_step; they come back as diagnostics.
class Session {
public:
    struct StepResult {
        std::string output;          // printable, possibly empty
        bool error = false;
        bool pending = false;        // statement continues on the next line
        bool was_query = false;
        std::size_t solutions = 0;   // for was_query
        bool quit = false;
    };

    Environment& env() { return env_; }
    const Environment& env() const { return env_; }
    SessionState& state() { return state_; }
    const SessionState& state() const { return state_; }

    StepResult repl_step(const std::string& line);

    // Applies one parsed assert-mode statement through the environment.
    // Returns printable output (trace lines and the like).
    std::string apply(const Statement& statement);

    // Evaluates a query under the session defaults and renders the
    // solution blocks. solution_count receives the number of solutions.
    std::string run_query(const QueryStmt& query, std::size_t* solution_count = nullptr) const;

    void save_kb(const std::string& path) const;
    void load_kb(const std::string& path);
    std::string save_kb_text() const;
    void load_kb_text(const std::string& text, const std::string& origin);

    void export_graph(const std::string& path) const;
    std::string export_graph_text() const;

    QueryOptions query_options() const;

private:
    std::string handle_directive(const DirectiveStmt& directive, StepResult& result);
    std::string list_entities(const std::string& what) const;
    std::string render_firings(const std::vector<Engine::Firing>& firings) const;

    Environment env_;
    SessionState state_;
    std::string buffer_;
};

}  // namespace sit
