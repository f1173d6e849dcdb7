#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sit/ontology.hpp"
#include "sit/term.hpp"

namespace sit {

// One stored infon. Entries written by declarations (of-type bookkeeping,
// instantiated type conditions) are marked auto and skipped when the
// knowledge base is serialized, since replaying the declaration recreates
// them.
struct StoredInfon {
    Infon infon;
    bool user = true;

    friend bool operator==(const StoredInfon&, const StoredInfon&) = default;
};

struct Situation {
    std::string id;
    std::vector<StoredInfon> own;   // insertion order, unique by value
    std::set<std::string> parents;  // situations this one is part of
    std::set<std::string> children; // explicit parts of this situation
    std::optional<std::string> time;
    std::optional<std::string> place;
};

// Owns every situation, the part-of hierarchy, the background situation w,
// anchoring, and coherence enforcement. All mutation funnels through
// assert_infons, which is atomic: a refused proposition leaves the store
// bit-identical. Reads are const and safe to run concurrently.
class Store {
public:
    static constexpr const char* world = "w";

    explicit Store(const Ontology* ontology);

    Situation& create_situation(const std::string& id);

    // Rollback helper for failed declarations; only an empty, unlinked
    // situation can be removed.
    void remove_situation(const std::string& id);

    bool has_situation(const std::string& id) const { return situations_.count(id) != 0; }
    const Situation& situation(const std::string& id) const;
    const std::map<std::string, Situation>& situations() const { return situations_; }

    // Reflexive-transitive part-of, with w implicitly part of everything.
    bool part_of(const std::string& part, const std::string& whole) const;

    // Union of own infons of the situation, its parts (children sorted by
    // id, depth-first), and w, in that order; first occurrence kept.
    std::vector<const Infon*> effective_infons(const std::string& id) const;

    // Store-level support: membership in the effective set, or a part-of
    // fact derivable from the hierarchy. No constraint chaining.
    bool supports(const std::string& id, const Infon& infon) const;

    struct AssertResult {
        std::vector<std::pair<std::string, Infon>> added;  // (situation, infon) newly stored
    };

    // Adds a proposition's infons to the target situation. Special
    // relations are interpreted: make-part-of and part-of edit the
    // hierarchy, anchor is checked for uniqueness/kind/restrictions,
    // time-of and place-of set location fields, of-type is checked
    // against declarations. Coherence of every situation is re-verified;
    // on any violation the whole call is refused and the store is left
    // untouched.
    AssertResult assert_infons(const std::string& target, const std::vector<Infon>& infons,
                               bool user = true);

    void make_part_of(const std::string& child, const std::string& parent);

    void register_anchor(const std::string& anchoring_situation, const std::string& param,
                         const std::string& target);

    // param -> anchor, from the anchoring situation's own anchor facts.
    std::map<std::string, Term> anchor_map(const std::string& anchoring_situation) const;

    // Replaces every parameter anchored in the anchoring situation by its
    // anchor. Single pass; unanchored parameters are left intact.
    Infon apply_anchoring(const Infon& infon, const std::string& anchoring_situation) const;

    // part-of facts derivable on demand for a situation: one infon per
    // pair (x, y) with x part-of y and y part-of the given situation.
    std::vector<Infon> derived_part_of_facts(const std::string& id) const;

    // Full-store audit; returns a (situation, infon) witness whose dual is
    // also in that situation's effective set, if any.
    std::optional<std::pair<std::string, Infon>> find_incoherence() const;

    // True when adding the infon to the situation would keep it and every
    // situation it is part of coherent.
    bool addition_coheres(const std::string& id, const Infon& infon) const;

    // Uncontrolled insertion for engine scratch copies: adds the fact when
    // new and coherent, skipping the special-relation interpretation.
    // Never use on a store that outlives the derivation.
    bool add_derived_fact(const std::string& id, const Infon& infon);

    // Explicit hierarchy edges (child, parent), sorted, self-loops omitted.
    std::vector<std::pair<std::string, std::string>> explicit_edges() const;

private:
    AssertResult apply_unchecked(const std::string& target, const std::vector<Infon>& infons,
                                 bool user);
    bool add_own(const std::string& id, const Infon& infon, bool user,
                 AssertResult& result);
    void add_edge(const std::string& child, const std::string& parent);
    void interpret_part_of(const std::string& target, const Infon& infon, bool user,
                           AssertResult& result, bool instruction);
    void interpret_anchor(const std::string& target, const Infon& infon);
    void interpret_location(const Infon& infon);
    void check_of_type(const Infon& infon) const;
    void collect_parts(const std::string& id, std::set<std::string>& out) const;

    const Ontology* ontology_;
    std::map<std::string, Situation> situations_;
};

}  // namespace sit
