#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sit/engine.hpp"
#include "sit/errors.hpp"
#include "sit/ontology.hpp"
#include "sit/query.hpp"
#include "sit/store.hpp"
#include "sit/term.hpp"

namespace sit {

// A claim that a situation supports (or fails to support) a set of infons.
// Only supports-mode propositions can be asserted; |/= exists for queries
// and constraints.
struct Proposition {
    std::string situation;
    bool positive = true;
    std::vector<Infon> infons;
};

// The facade wiring ontology, store, constraints and engine together.
// Declarations maintain the of-type bookkeeping in w, assertions run the
// forward-chaining hook, and queries evaluate against the current state.
// Mutations must be externally serialized; all read paths are const.
class Environment {
public:
    Environment();

    // The engine and the ontology's support oracle point into this
    // object, so it cannot be moved or copied.
    Environment(const Environment&) = delete;
    Environment& operator=(const Environment&) = delete;

    Ontology& ontology() { return ontology_; }
    const Ontology& ontology() const { return ontology_; }
    Store& store() { return store_; }
    const Store& store() const { return store_; }
    ConstraintIndex& constraints() { return constraints_; }
    const ConstraintIndex& constraints() const { return constraints_; }
    Engine& engine() { return engine_; }
    const Engine& engine() const { return engine_; }
    EngineConfig& config() { return engine_.config(); }

    // Declarations. Each registers the entity, records the of-type fact in
    // w, and fires the forward-chaining hook. Declaring an object of a
    // parametric type also asserts the instantiated type conditions into
    // the type's grounding situation.
    const ObjectInfo& declare_object(const std::string& name, const KindRef& kind);
    const Relation& declare_relation(const std::string& name, std::vector<Role> roles,
                                     std::size_t minimality);
    const Parameter& declare_parameter(const std::string& name, const std::string& base,
                                       const std::vector<Infon>& restrictions);
    const TypeAbstraction& define_type_abstraction(const std::string& name,
                                                   const std::string& param,
                                                   const std::string& grounding,
                                                   std::vector<Infon> conditions);
    void name_infon(const std::string& name, Infon infon);
    const Constraint& define_constraint(Constraint constraint);

    struct AssertOutcome {
        Store::AssertResult direct;
        Engine::ForwardResult chained;
    };

    // Applies the anchoring situation (when given), validates, asserts
    // atomically, then forward-chains to fixpoint.
    AssertOutcome assert_proposition(const Proposition& proposition,
                                     const std::optional<std::string>& anchoring = {},
                                     const std::optional<std::string>& antecedent_persp = {});

    // Manual forward-chaining trigger.
    Engine::ForwardResult chain(const std::optional<std::string>& antecedent_persp = {});

    // Result of the most recent forward-chaining run, including the runs
    // triggered by declarations.
    const Engine::ForwardResult& last_chain() const { return last_chain_; }

    QueryResult query(const std::vector<ConstraintAtom>& atoms,
                      const QueryOptions& options) const;
    std::string render_solution(const Solution& solution, const QueryOptions& options) const;

    // Store-level support extended with backward chaining when a
    // perspectivity set is given.
    bool supports(const std::string& situation, const Infon& infon,
                  const std::optional<std::string>& perspectivity = {}) const;

    // Full-store audits used by tests and invariant checks.
    std::optional<std::pair<std::string, Infon>> audit_incoherence() const;
    bool audit_no_stored_variables() const;
    bool audit_appropriateness() const;

private:
    void add_world_fact(const Infon& infon);

    Ontology ontology_;
    Store store_;
    ConstraintIndex constraints_;
    Engine engine_;
    Engine::ForwardResult last_chain_;
};

}  // namespace sit
