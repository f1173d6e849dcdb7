#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sit/kinds.hpp"
#include "sit/term.hpp"

namespace sit {

// A kind position: either one of the nine primitives or a declared
// parametric type, referenced by its sigil-free name.
class KindRef {
public:
    KindRef(BasicKind k) : basic_(k) {}
    explicit KindRef(std::string type_name) : type_name_(std::move(type_name)) {}

    bool is_basic() const { return !type_name_.has_value(); }
    BasicKind basic() const { return basic_; }
    const std::string& type_name() const { return *type_name_; }

    // "~IND" or "~SITALL".
    std::string display() const;

    friend bool operator==(const KindRef&, const KindRef&) = default;

private:
    BasicKind basic_ = BasicKind::Ind;
    std::optional<std::string> type_name_;
};

// Appropriateness condition for one argument role: the set of kinds an
// object may have to fill it.
struct Role {
    std::vector<KindRef> admitted;

    static Role any();
};

struct Relation {
    std::string name;
    std::vector<Role> roles;
    std::size_t minimality = 1;

    std::size_t arity() const { return roles.size(); }
};

struct Parameter {
    std::string name;
    BasicKind base = BasicKind::Ind;
    std::string base_written;     // base as declared, for serialization
    std::set<Infon> restrictions; // stored with this parameter substituted in
};

struct TypeAbstraction {
    std::string name;       // sigil-free
    std::string param;      // abstraction parameter (a declared Parameter)
    std::string grounding;  // grounding situation id
    std::vector<Infon> conditions;
};

enum class EntityCategory { Kind, Object, Relation, Parameter, Type, NamedInfon };

struct ObjectInfo {
    std::string name;
    KindRef declared;  // as declared (may be a parametric type)
    BasicKind basic;   // resolved basic kind
};

// One entry of the declaration log, in registration order. The session
// serializer replays user entries to reproduce the environment.
struct DeclRecord {
    EntityCategory category;
    std::string name;
};

// Registry of every named thing plus infon construction and validation.
// Values are immutable once registered. Support of type-abstraction
// conditions is delegated to the store through an injected oracle.
class Ontology {
public:
    using SupportOracle = std::function<bool(const std::string& situation, const Infon&)>;

    Ontology();

    void set_support_oracle(SupportOracle oracle) { support_ = std::move(oracle); }

    // Marks the end of built-in registration; later declarations are
    // user-level and appear in declaration_log().
    void seal_bootstrap() { bootstrap_size_ = log_.size(); }

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

    // Rolls back a declaration whose follow-up bookkeeping failed.
    void undeclare(const std::string& name);

    // Pads args with the null object to full arity and validates
    // appropriateness and minimality. Variables are admitted only when
    // building constraint or query patterns.
    Infon make_infon(const std::string& relation, std::vector<Term> args, int polarity,
                     bool allow_vars = false) const;

    // True when the entity's basic kind matches the abstraction
    // parameter's and the grounding situation supports every condition
    // with the entity substituted for the parameter.
    bool of_type(const std::string& entity, const std::string& type_name) const;

    bool admits(const Role& role, const Term& arg) const;

    bool exists(const std::string& name) const { return categories_.count(name) != 0; }
    std::optional<EntityCategory> category(const std::string& name) const;
    BasicKind kind_of(const std::string& name) const;

    const Relation* find_relation(const std::string& name) const;
    const Parameter* find_parameter(const std::string& name) const;
    const TypeAbstraction* find_type(const std::string& name) const;
    const ObjectInfo* find_object(const std::string& name) const;
    const Infon* find_named_infon(const std::string& name) const;

    const std::map<std::string, Relation>& relations() const { return relations_; }
    const std::map<std::string, Parameter>& parameters() const { return parameters_; }
    const std::map<std::string, TypeAbstraction>& types() const { return types_; }
    const std::map<std::string, ObjectInfo>& objects() const { return objects_; }

    // User declarations in registration order (bootstrap excluded).
    std::vector<DeclRecord> declaration_log() const;

    // Substitutes a named entity throughout an infon's arguments.
    static Infon substitute(Infon infon, const std::string& from, const Term& to);

    // Concrete-syntax rendering. Types and kinds carry the '~' sigil,
    // variables '?', the null object prints as '-'.
    std::string print_term(const Term& term) const;
    std::string print_infon(const Infon& infon) const;

private:
    void reserve_name(const std::string& name, EntityCategory category);
    void unreserve_name(const std::string& name);
    KindRef resolve_kind_name(const std::string& name) const;

    SupportOracle support_;
    std::map<std::string, EntityCategory> categories_;
    std::map<std::string, ObjectInfo> objects_;
    std::map<std::string, Relation> relations_;
    std::map<std::string, Parameter> parameters_;
    std::map<std::string, TypeAbstraction> types_;
    std::map<std::string, Infon> named_infons_;
    std::vector<DeclRecord> log_;
    std::size_t bootstrap_size_ = 0;
};

}  // namespace sit
