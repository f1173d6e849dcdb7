#include "sit/ontology.hpp"

#include <algorithm>

#include "sit/errors.hpp"

namespace sit {

std::string KindRef::display() const {
    if (is_basic()) return kind_sigil_name(basic_);
    return "~" + *type_name_;
}

Role Role::any() {
    Role r;
    for (BasicKind k : all_basic_kinds) r.admitted.emplace_back(k);
    return r;
}

Ontology::Ontology() {
    for (BasicKind k : all_basic_kinds)
        reserve_name(std::string(kind_name(k)), EntityCategory::Kind);
}

void Ontology::reserve_name(const std::string& name, EntityCategory category) {
    if (name.empty()) throw NameError("empty name");
    auto [it, inserted] = categories_.emplace(name, category);
    if (!inserted) throw NameError("name already in use: " + name);
    log_.push_back({category, name});
}

void Ontology::unreserve_name(const std::string& name) {
    categories_.erase(name);
    log_.pop_back();
}

std::optional<EntityCategory> Ontology::category(const std::string& name) const {
    auto it = categories_.find(name);
    if (it == categories_.end()) return std::nullopt;
    return it->second;
}

KindRef Ontology::resolve_kind_name(const std::string& name) const {
    if (auto basic = kind_from_name(name)) return KindRef(*basic);
    std::string bare = name;
    if (!bare.empty() && bare.front() == '~') bare.erase(0, 1);
    if (types_.count(bare)) return KindRef(bare);
    throw NameError("unknown kind: " + name);
}

BasicKind Ontology::kind_of(const std::string& name) const {
    auto cat = category(name);
    if (!cat) throw NameError("unknown name: " + name);
    switch (*cat) {
        case EntityCategory::Kind: return BasicKind::Typ;
        case EntityCategory::Type: return BasicKind::Typ;
        case EntityCategory::Relation: return BasicKind::Rel;
        case EntityCategory::Parameter: return BasicKind::Par;
        case EntityCategory::NamedInfon: return BasicKind::Inf;
        case EntityCategory::Object: return objects_.at(name).basic;
    }
    throw NameError("unknown name: " + name);
}

const ObjectInfo& Ontology::declare_object(const std::string& name, const KindRef& kind) {
    BasicKind basic;
    if (kind.is_basic()) {
        basic = kind.basic();
        switch (basic) {
            case BasicKind::Rel:
                throw NameError("relations are declared with <" + name + " | ...> [n]");
            case BasicKind::Par:
                throw NameError("parameters are declared with " + name + " = BASE ^ ...");
            case BasicKind::Inf:
                throw NameError("infons are named with " + name + " = <<...>>");
            case BasicKind::Typ:
                throw NameError("types are declared with ~" + name + " = [P | s |= ...]");
            default:
                break;
        }
    } else {
        const TypeAbstraction* t = find_type(kind.type_name());
        if (!t) throw NameError("unknown kind: ~" + kind.type_name());
        basic = parameters_.at(t->param).base;
    }
    reserve_name(name, EntityCategory::Object);
    auto [it, ok] = objects_.emplace(name, ObjectInfo{name, kind, basic});
    return it->second;
}

const Relation& Ontology::declare_relation(const std::string& name, std::vector<Role> roles,
                                           std::size_t minimality) {
    if (roles.empty()) throw ValidationError("relation " + name + " needs at least one role");
    if (minimality < 1 || minimality > roles.size())
        throw ValidationError("minimality for " + name + " must be in [1, " +
                              std::to_string(roles.size()) + "]");
    for (const Role& role : roles) {
        if (role.admitted.empty())
            throw ValidationError("role of " + name + " admits no kind");
        for (const KindRef& k : role.admitted)
            if (!k.is_basic() && !types_.count(k.type_name()))
                throw NameError("unknown kind: ~" + k.type_name());
    }
    reserve_name(name, EntityCategory::Relation);
    auto [it, ok] = relations_.emplace(name, Relation{name, std::move(roles), minimality});
    return it->second;
}

const Parameter& Ontology::declare_parameter(const std::string& name, const std::string& base,
                                             const std::vector<Infon>& restrictions) {
    Parameter param;
    param.name = name;
    param.base_written = base;
    std::set<Infon> inherited;
    std::string base_param_name;
    if (auto basic = kind_from_name(base)) {
        param.base = *basic;
    } else if (const Parameter* bp = find_parameter(base)) {
        param.base = bp->base;
        base_param_name = bp->name;
        inherited = bp->restrictions;
    } else {
        throw NameError("parameter base must be a parameter or a primitive kind: " + base);
    }

    reserve_name(name, EntityCategory::Parameter);
    auto [it, ok] = parameters_.emplace(name, std::move(param));
    try {
        Term self = Term::entity(name);
        std::set<Infon> collected;
        for (Infon r : inherited)
            collected.insert(substitute(std::move(r), base_param_name, self));
        for (Infon r : restrictions) {
            if (!base_param_name.empty()) r = substitute(std::move(r), base_param_name, self);
            // revalidate with the new parameter in place
            std::vector<Term> args(r.args.begin(), r.args.end());
            collected.insert(make_infon(r.relation, std::move(args), r.polarity));
        }
        it->second.restrictions = std::move(collected);
    } catch (...) {
        parameters_.erase(it);
        unreserve_name(name);
        throw;
    }
    return it->second;
}

const TypeAbstraction& Ontology::define_type_abstraction(const std::string& name,
                                                         const std::string& param,
                                                         const std::string& grounding,
                                                         std::vector<Infon> conditions) {
    if (!find_parameter(param))
        throw NameError("abstraction parameter is not a declared parameter: " + param);
    std::vector<Infon> validated;
    bool mentions = false;
    for (const Infon& c : conditions) {
        validated.push_back(make_infon(c.relation, c.args, c.polarity));
        for (const Term& a : validated.back().args)
            if (a.is_entity() && a.name() == param) mentions = true;
    }
    if (!mentions)
        throw ValidationError("abstraction parameter " + param + " does not occur in the conditions");
    reserve_name(name, EntityCategory::Type);
    auto [it, ok] =
        types_.emplace(name, TypeAbstraction{name, param, grounding, std::move(validated)});
    return it->second;
}

void Ontology::name_infon(const std::string& name, Infon infon) {
    reserve_name(name, EntityCategory::NamedInfon);
    named_infons_.emplace(name, std::move(infon));
}

void Ontology::undeclare(const std::string& name) {
    auto it = categories_.find(name);
    if (it == categories_.end()) return;
    switch (it->second) {
        case EntityCategory::Object: objects_.erase(name); break;
        case EntityCategory::Relation: relations_.erase(name); break;
        case EntityCategory::Parameter: parameters_.erase(name); break;
        case EntityCategory::Type: types_.erase(name); break;
        case EntityCategory::NamedInfon: named_infons_.erase(name); break;
        case EntityCategory::Kind: return;  // primitives are permanent
    }
    categories_.erase(it);
    for (auto rit = log_.rbegin(); rit != log_.rend(); ++rit) {
        if (rit->name == name) {
            log_.erase(std::next(rit).base());
            break;
        }
    }
}

bool Ontology::admits(const Role& role, const Term& arg) const {
    if (arg.is_null()) return true;
    if (arg.is_var()) return true;  // variables range over the role's kinds at match time
    auto cat = category(arg.name());
    if (!cat) return false;
    BasicKind basic = kind_of(arg.name());
    for (const KindRef& k : role.admitted) {
        if (k.is_basic()) {
            if (basic == k.basic()) return true;
            // a parameter may stand in for an object of its base kind
            if (*cat == EntityCategory::Parameter &&
                parameters_.at(arg.name()).base == k.basic())
                return true;
        } else {
            if (of_type(arg.name(), k.type_name())) return true;
            if (*cat == EntityCategory::Parameter) {
                const TypeAbstraction& t = types_.at(k.type_name());
                if (parameters_.at(arg.name()).base == parameters_.at(t.param).base) return true;
            }
        }
    }
    return false;
}

Infon Ontology::make_infon(const std::string& relation, std::vector<Term> args, int polarity,
                           bool allow_vars) const {
    const Relation* rel = find_relation(relation);
    if (!rel) throw ValidationError("unknown relation: " + relation);
    if (polarity != 0 && polarity != 1)
        throw ValidationError("polarity must be 0 or 1");
    if (args.size() > rel->arity())
        throw ValidationError("relation " + relation + " takes at most " +
                              std::to_string(rel->arity()) + " arguments");
    args.resize(rel->arity(), Term::null());

    Infon infon{relation, std::move(args), polarity};
    if (infon.filled_count() < rel->minimality)
        throw ValidationError("relation " + relation + " needs at least " +
                              std::to_string(rel->minimality) + " arguments");
    for (std::size_t i = 0; i < infon.args.size(); ++i) {
        const Term& arg = infon.args[i];
        if (arg.is_var()) {
            if (!allow_vars)
                throw ValidationError("variable ?" + arg.name() +
                                      " is only allowed in constraints and queries");
            continue;
        }
        if (arg.is_entity() && !exists(arg.name()))
            throw NameError("unknown name: " + arg.name());
        if (!admits(rel->roles[i], arg))
            throw ValidationError("argument " + print_term(arg) + " is not appropriate for role " +
                                  std::to_string(i + 1) + " of " + relation);
    }
    return infon;
}

bool Ontology::of_type(const std::string& entity, const std::string& type_name) const {
    const TypeAbstraction* t = find_type(type_name);
    if (!t) throw NameError("unknown type: ~" + type_name);
    if (!exists(entity)) return false;
    const Parameter& p = parameters_.at(t->param);
    if (kind_of(entity) != p.base) return false;
    if (!support_) return false;
    Term candidate = Term::entity(entity);
    for (const Infon& cond : t->conditions)
        if (!support_(t->grounding, substitute(cond, t->param, candidate))) return false;
    return true;
}

const Relation* Ontology::find_relation(const std::string& name) const {
    auto it = relations_.find(name);
    return it == relations_.end() ? nullptr : &it->second;
}

const Parameter* Ontology::find_parameter(const std::string& name) const {
    auto it = parameters_.find(name);
    return it == parameters_.end() ? nullptr : &it->second;
}

const TypeAbstraction* Ontology::find_type(const std::string& name) const {
    std::string bare = name;
    if (!bare.empty() && bare.front() == '~') bare.erase(0, 1);
    auto it = types_.find(bare);
    return it == types_.end() ? nullptr : &it->second;
}

const ObjectInfo* Ontology::find_object(const std::string& name) const {
    auto it = objects_.find(name);
    return it == objects_.end() ? nullptr : &it->second;
}

const Infon* Ontology::find_named_infon(const std::string& name) const {
    auto it = named_infons_.find(name);
    return it == named_infons_.end() ? nullptr : &it->second;
}

std::vector<DeclRecord> Ontology::declaration_log() const {
    return {log_.begin() + static_cast<std::ptrdiff_t>(bootstrap_size_), log_.end()};
}

Infon Ontology::substitute(Infon infon, const std::string& from, const Term& to) {
    if (from.empty()) return infon;
    for (Term& arg : infon.args)
        if (arg.is_entity() && arg.name() == from) arg = to;
    return infon;
}

std::string Ontology::print_term(const Term& term) const {
    switch (term.tag()) {
        case Term::Tag::Null: return "-";
        case Term::Tag::Var: return "?" + term.name();
        case Term::Tag::Entity: {
            auto cat = category(term.name());
            if (cat && (*cat == EntityCategory::Kind || *cat == EntityCategory::Type))
                return "~" + term.name();
            return term.name();
        }
    }
    return "-";
}

std::string Ontology::print_infon(const Infon& infon) const {
    std::string out = "<<" + infon.relation;
    for (const Term& arg : infon.args) out += ", " + print_term(arg);
    out += ", " + std::to_string(infon.polarity) + ">>";
    return out;
}

}  // namespace sit
