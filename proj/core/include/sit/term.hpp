#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace sit {

// A term is one slot of an infon's argument tuple: the null object "-",
// a named entity (object, parameter, situation, relation, type, named
// infon), or a variable. Variables occur only in constraint and query
// patterns, never in stored infons.
class Term {
public:
    enum class Tag : std::uint8_t { Null, Entity, Var };

    Term() : tag_(Tag::Null) {}

    static Term null() { return Term(); }
    static Term entity(std::string name) { return Term(Tag::Entity, std::move(name)); }
    static Term var(std::string name) { return Term(Tag::Var, std::move(name)); }

    Tag tag() const { return tag_; }
    bool is_null() const { return tag_ == Tag::Null; }
    bool is_entity() const { return tag_ == Tag::Entity; }
    bool is_var() const { return tag_ == Tag::Var; }
    const std::string& name() const { return name_; }

    friend bool operator==(const Term&, const Term&) = default;
    friend auto operator<=>(const Term&, const Term&) = default;

private:
    Term(Tag tag, std::string name) : tag_(tag), name_(std::move(name)) {}

    Tag tag_;
    std::string name_;
};

// Relation name + argument tuple (padded to full arity) + polarity.
// Normalization and validation live in the ontology; values compare
// structurally, so a set of infons is a coherent-checkable store.
struct Infon {
    std::string relation;
    std::vector<Term> args;
    int polarity = 1;

    friend bool operator==(const Infon&, const Infon&) = default;
    friend auto operator<=>(const Infon&, const Infon&) = default;

    bool saturated() const {
        for (const Term& t : args)
            if (t.is_null()) return false;
        return true;
    }

    bool ground() const {
        for (const Term& t : args)
            if (t.is_var()) return false;
        return true;
    }

    std::size_t filled_count() const {
        std::size_t n = 0;
        for (const Term& t : args)
            if (!t.is_null()) ++n;
        return n;
    }
};

inline Infon dual(Infon infon) {
    infon.polarity = 1 - infon.polarity;
    return infon;
}

}  // namespace sit
