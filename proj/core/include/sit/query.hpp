#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sit/engine.hpp"
#include "sit/ontology.hpp"
#include "sit/store.hpp"
#include "sit/term.hpp"

namespace sit {

struct QueryOptions {
    std::optional<std::string> perspectivity;
    std::optional<std::string> antecedent_persp;
    std::optional<std::string> group_filter;    // narrows usable constraints to one group
    std::optional<std::string> anchoring;       // anchoring situation
    std::optional<std::size_t> max_solutions;   // nullopt: unbounded
    bool show_anchors = true;
    bool show_anchor_trace = false;
};

struct Solution {
    Binding bindings;
    std::vector<ConstraintAtom> atoms;  // instantiated and anchored, ground
    std::vector<Infon> anchor_facts;    // anchor facts applied to query or rendering
    std::vector<std::pair<std::string, std::string>> anchor_trace;  // parameter -> anchor
};

struct QueryResult {
    std::vector<Solution> solutions;
    bool depth_exhausted = false;
};

// Evaluates conjunctions of |= and |/= atoms over a store snapshot.
// Atoms are evaluated left to right with bindings threaded through;
// anchors are applied to the query before evaluation and to residual
// parameters when solutions are rendered. Solutions stream in discovery
// order: situations in id order, own infons before inherited ones.
class QueryEvaluator {
public:
    QueryEvaluator(const Ontology& ontology, const Store& store,
                   const ConstraintIndex& constraints, const Engine& engine)
        : ontology_(&ontology), store_(&store), constraints_(&constraints), engine_(&engine) {}

    QueryResult evaluate(const std::vector<ConstraintAtom>& atoms,
                         const QueryOptions& options) const;

    // Deterministic textual block (no trailing newline, no numbering);
    // proposition lines re-parse under the frontend grammar.
    std::string render_solution(const Solution& solution, const QueryOptions& options) const;

private:
    void validate(const std::vector<ConstraintAtom>& atoms, const QueryOptions& options) const;

    const Ontology* ontology_;
    const Store* store_;
    const ConstraintIndex* constraints_;
    const Engine* engine_;
};

}  // namespace sit
