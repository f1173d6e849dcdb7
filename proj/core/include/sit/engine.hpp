#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sit/ontology.hpp"
#include "sit/store.hpp"
#include "sit/term.hpp"

namespace sit {

// Variable name (without the '?' sigil) -> value. Values may themselves
// be variables while two patterns are being unified; bindings handed back
// from proving are fully resolved.
using Binding = std::map<std::string, Term>;

// One side of a constraint, or one conjunct of a query: a situation
// (or situation variable), a support mode, and an infon pattern.
struct ConstraintAtom {
    Term situation;
    bool positive = true;  // |= when true, |/= otherwise
    Infon pattern;
};

enum class Direction { Backward, Forward, Bidirectional };

struct Constraint {
    std::string group;  // perspectivity set
    std::string name;
    std::vector<ConstraintAtom> antecedents;
    Direction direction = Direction::Forward;
    std::vector<ConstraintAtom> consequents;
    std::vector<Infon> conditions;  // background conditions, held against w
    std::string label;              // optional class tag (necessary/nomic/conventional)
};

// Constraints grouped by perspectivity set, in definition order.
class ConstraintIndex {
public:
    const Constraint& define(Constraint constraint, const Ontology& ontology);

    bool has_group(const std::string& group) const { return groups_.count(group) != 0; }
    const std::vector<Constraint>& group(const std::string& name) const;
    const std::map<std::string, std::vector<Constraint>>& groups() const { return groups_; }
    const Constraint* find(const std::string& group, const std::string& name) const;

private:
    std::map<std::string, std::vector<Constraint>> groups_;
    static const std::vector<Constraint> empty_;
};

struct EngineConfig {
    int depth_limit = 32;
    std::size_t max_firings = 10000;
    bool trace = false;
};

// Options threaded through one proof search.
struct ProofOptions {
    std::optional<std::string> perspectivity;      // group searched for backward constraints
    std::optional<std::string> antecedent_persp;   // group for proving antecedents, when given
    std::optional<std::string> group_filter;       // further restricts usable constraints
    std::optional<std::string> anchoring;          // view stored infons through these anchors
    int depth = 32;
};

struct ProveResult {
    std::vector<Binding> bindings;  // discovery order, duplicates suppressed
    bool depth_exhausted = false;   // some branch was cut; failure is not conclusive
};

// Unifies a variable-bearing pattern against a ground infon, extending the
// given bindings. Bound values must be appropriate for the roles their
// variables occupy. Returns nothing on mismatch; the input bindings are
// never mutated.
std::optional<Binding> unify(const Ontology& ontology, const Infon& pattern, const Infon& ground,
                             const Binding& bindings);

class Engine;

// One backward-chaining evaluation context. Construction saturates a
// scratch copy of the store with everything derivable through the
// candidate backward and bidirectional constraints of the perspectivity
// set (antecedents proven in the antecedent perspectivity set when one is
// given); goals are then answered by matching the saturated store. The
// depth limit bounds saturation rounds, so a goal whose shortest
// derivation chain is longer than the limit is reported unproven with the
// exhaustion flag set. The real store is never touched.
class Prover {
public:
    Prover(const Engine& engine, ProofOptions options);

    ProveResult prove(const ConstraintAtom& goal, const Binding& seed) const;

    // Threads bindings left to right through a conjunction; |/= atoms are
    // negation-as-failure and must be ground when reached.
    std::vector<Binding> solve(const std::vector<ConstraintAtom>& atoms,
                               const Binding& seed) const;

    bool exhausted() const { return exhausted_; }

private:
    bool saturate(const std::string& group, const Prover* antecedent_view);
    void match_atom(const ConstraintAtom& atom, const Binding& seed, bool anchored,
                    std::vector<Binding>& out) const;
    const std::vector<const Infon*>& effective(const std::string& id) const;
    std::vector<Binding> solve_on(const std::vector<ConstraintAtom>& atoms, const Binding& seed,
                                  bool anchored) const;

    const Engine* engine_;
    ProofOptions opts_;
    Store scratch_;
    std::map<std::string, Term> anchors_;  // of the options' anchoring situation
    bool exhausted_ = false;
    mutable std::map<std::string, std::vector<const Infon*>> effective_cache_;
};

class Engine {
public:
    Engine(const Ontology& ontology, Store& store, ConstraintIndex& constraints,
           EngineConfig config)
        : ontology_(&ontology), store_(&store), constraints_(&constraints), config_(config) {}

    EngineConfig& config() { return config_; }
    const EngineConfig& config() const { return config_; }

    const Ontology& ontology() const { return *ontology_; }
    const Store& store() const { return *store_; }
    const ConstraintIndex& constraint_index() const { return *constraints_; }

    // True unless some background condition's dual is known in w.
    bool is_candidate(const Constraint& constraint) const;

    // One-shot backward proof: saturates and matches. Callers with several
    // goals over one store state should build a Prover once.
    ProveResult prove(const ConstraintAtom& goal, const Binding& seed,
                      const ProofOptions& options) const;

    // Ground convenience wrapper over prove().
    bool proves(const std::string& situation, const Infon& infon,
                const ProofOptions& options) const;

    struct Firing {
        std::string group;
        std::string name;
        Binding binding;
        std::string situation;
        Infon consequence;
        bool accepted = true;
        std::string note;  // refusal reason when not accepted
    };

    struct ForwardResult {
        std::vector<std::pair<std::string, Infon>> performed;  // newly stored infons
        std::vector<Firing> firings;
        bool hit_cap = false;
        std::string frontier;  // constraint in progress when the cap was hit
    };

    // Runs every candidate forward and bidirectional constraint to
    // fixpoint. Each (constraint, binding) pair fires at most once per
    // call; consequents that would break coherence are refused
    // individually and logged while their siblings proceed.
    ForwardResult forward_chain(const std::optional<std::string>& antecedent_persp = {});

private:
    const Ontology* ontology_;
    Store* store_;
    ConstraintIndex* constraints_;
    EngineConfig config_;
};

}  // namespace sit
