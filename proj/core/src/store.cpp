#include "sit/store.hpp"

#include <algorithm>

#include "sit/errors.hpp"

namespace sit {

Store::Store(const Ontology* ontology) : ontology_(ontology) {}

Situation& Store::create_situation(const std::string& id) {
    auto [it, inserted] = situations_.emplace(id, Situation{id, {}, {}, {}, {}, {}});
    if (!inserted) throw NameError("situation already exists: " + id);
    return it->second;
}

void Store::remove_situation(const std::string& id) {
    auto it = situations_.find(id);
    if (it == situations_.end()) return;
    if (!it->second.own.empty() || !it->second.parents.empty() || !it->second.children.empty())
        throw Error("cannot remove a situation that carries infons or hierarchy edges: " + id);
    situations_.erase(it);
}

const Situation& Store::situation(const std::string& id) const {
    auto it = situations_.find(id);
    if (it == situations_.end()) throw NameError("unknown situation: " + id);
    return it->second;
}

bool Store::part_of(const std::string& part, const std::string& whole) const {
    if (!has_situation(part) || !has_situation(whole)) return false;
    if (part == whole) return true;
    if (part == world) return true;
    std::vector<const std::string*> frontier{&part};
    std::set<std::string> seen{part};
    while (!frontier.empty()) {
        const Situation& s = situation(*frontier.back());
        frontier.pop_back();
        for (const std::string& p : s.parents) {
            if (p == whole) return true;
            if (seen.insert(p).second) frontier.push_back(&*seen.find(p));
        }
    }
    return false;
}

void Store::collect_parts(const std::string& id, std::set<std::string>& out) const {
    if (!out.insert(id).second) return;
    for (const std::string& c : situation(id).children) collect_parts(c, out);
}

std::vector<const Infon*> Store::effective_infons(const std::string& id) const {
    const Situation& root = situation(id);
    std::vector<const Infon*> result;
    std::set<Infon> seen;
    std::set<std::string> visited;
    auto take = [&](const Situation& s) {
        for (const StoredInfon& si : s.own)
            if (seen.insert(si.infon).second) result.push_back(&si.infon);
    };
    // depth-first over parts, own infons before inherited ones, w last
    auto visit = [&](auto&& self, const Situation& s) -> void {
        if (!visited.insert(s.id).second) return;
        take(s);
        for (const std::string& c : s.children) self(self, situation(c));
    };
    visit(visit, root);
    if (id != world && !visited.count(world)) take(situation(world));
    return result;
}

bool Store::supports(const std::string& id, const Infon& infon) const {
    for (const Infon* e : effective_infons(id))
        if (*e == infon) return true;
    if (infon.relation == "part-of" && infon.polarity == 1 && infon.args.size() == 2 &&
        infon.args[0].is_entity() && infon.args[1].is_entity()) {
        const std::string& a = infon.args[0].name();
        const std::string& b = infon.args[1].name();
        if (part_of(a, b) && part_of(b, id)) return true;
    }
    return false;
}

std::vector<Infon> Store::derived_part_of_facts(const std::string& id) const {
    std::vector<Infon> facts;
    for (const auto& [y, sy] : situations_) {
        if (!part_of(y, id)) continue;
        for (const auto& [x, sx] : situations_)
            if (part_of(x, y))
                facts.push_back(Infon{"part-of", {Term::entity(x), Term::entity(y)}, 1});
    }
    return facts;
}

Store::AssertResult Store::assert_infons(const std::string& target,
                                         const std::vector<Infon>& infons, bool user) {
    if (!has_situation(target)) throw NameError("unknown situation: " + target);
    for (const Infon& i : infons)
        if (!i.ground())
            throw ValidationError("cannot assert an infon containing variables: " +
                                  ontology_->print_infon(i));

    Store staged = *this;
    AssertResult result = staged.apply_unchecked(target, infons, user);
    if (auto witness = staged.find_incoherence()) {
        const auto& [sit, infon] = *witness;
        throw CoherenceError("incoherent: " + sit + " would support both " +
                                 ontology_->print_infon(infon) + " and " +
                                 ontology_->print_infon(dual(infon)),
                             ontology_->print_infon(infon), ontology_->print_infon(dual(infon)));
    }
    situations_ = std::move(staged.situations_);
    return result;
}

Store::AssertResult Store::apply_unchecked(const std::string& target,
                                           const std::vector<Infon>& infons, bool user) {
    AssertResult result;
    for (const Infon& infon : infons) {
        if (infon.relation == "make-part-of") {
            if (infon.polarity != 1)
                throw HierarchyError("make-part-of requires polarity 1");
            interpret_part_of(target, Infon{"part-of", infon.args, 1}, user, result,
                              /*instruction=*/true);
            continue;  // the instruction itself is not stored
        }
        if (infon.relation == "part-of" && infon.polarity == 1) {
            interpret_part_of(target, infon, user, result, /*instruction=*/false);
            continue;
        }
        if (infon.relation == "part-of" && infon.polarity == 0) {
            if (part_of(infon.args[0].name(), infon.args[1].name()))
                throw CoherenceError("incoherent: " + ontology_->print_infon(infon) +
                                         " contradicts the part-of hierarchy",
                                     ontology_->print_infon(infon),
                                     ontology_->print_infon(dual(infon)));
        }
        if (infon.relation == "anchor" && infon.polarity == 1) interpret_anchor(target, infon);
        if ((infon.relation == "time-of" || infon.relation == "place-of") && infon.polarity == 1)
            interpret_location(infon);
        if (infon.relation == "of-type") check_of_type(infon);
        add_own(target, infon, user, result);
    }
    return result;
}

bool Store::add_own(const std::string& id, const Infon& infon, bool user, AssertResult& result) {
    Situation& s = situations_.at(id);
    for (StoredInfon& existing : s.own) {
        if (existing.infon == infon) {
            if (user && !existing.user) existing.user = true;
            return false;
        }
    }
    s.own.push_back({infon, user});
    result.added.emplace_back(id, infon);
    return true;
}

void Store::add_edge(const std::string& child, const std::string& parent) {
    if (!has_situation(child)) throw NameError("unknown situation: " + child);
    if (!has_situation(parent)) throw NameError("unknown situation: " + parent);
    if (child == parent) return;
    if (child == world) return;  // w is already part of everything
    if (part_of(parent, child))
        throw HierarchyError("part-of cycle between " + child + " and " + parent);
    situations_.at(child).parents.insert(parent);
    situations_.at(parent).children.insert(child);
}

void Store::interpret_part_of(const std::string& target, const Infon& infon, bool user,
                              AssertResult& result, bool instruction) {
    const std::string& child = infon.args[0].name();
    const std::string& parent = infon.args[1].name();
    add_edge(child, parent);
    // make-part-of may be issued from anywhere, typically the child; a
    // direct part-of fact must land where it will hold
    if (!instruction && parent != target && !part_of(parent, target))
        throw HierarchyError("part-of fact about " + parent +
                             " must be asserted into it or a situation it is part of");
    // the fact lives in the parent; ancestors inherit it
    add_own(parent, infon, user, result);
}

void Store::interpret_anchor(const std::string& target, const Infon& infon) {
    const std::string& param_name = infon.args[0].name();
    const Parameter* param = ontology_->find_parameter(param_name);
    if (!param) throw NameError("anchor expects a parameter: " + param_name);
    const Term& value = infon.args[1];

    for (const StoredInfon& si : situations_.at(target).own) {
        if (si.infon.relation == "anchor" && si.infon.polarity == 1 &&
            si.infon.args[0] == infon.args[0] && !(si.infon == infon))
            throw AnchorError(AnchorError::Reason::Duplicate,
                              param_name + " is already anchored in " + target);
    }

    BasicKind value_kind = ontology_->kind_of(value.name());
    if (const Parameter* vp = ontology_->find_parameter(value.name())) value_kind = vp->base;
    if (value_kind != param->base)
        throw AnchorError(AnchorError::Reason::KindMismatch,
                          param_name + " ranges over " + kind_sigil_name(param->base) +
                              " but " + value.name() + " is of kind " +
                              kind_sigil_name(value_kind));

    for (const Infon& restriction : param->restrictions) {
        Infon instantiated = Ontology::substitute(restriction, param_name, value);
        if (!supports(world, instantiated))
            throw AnchorError(AnchorError::Reason::RestrictionUnsatisfied,
                              "restriction " + ontology_->print_infon(instantiated) +
                                  " is not supported by w");
    }
}

void Store::interpret_location(const Infon& infon) {
    const std::string& located = infon.args[0].name();
    if (!has_situation(located)) throw NameError("unknown situation: " + located);
    const std::string& value = infon.args[1].name();
    Situation& s = situations_.at(located);
    auto& field = infon.relation == "time-of" ? s.time : s.place;
    if (field && *field != value)
        throw ValidationError("situation " + located + " already has a " +
                              (infon.relation == "time-of" ? std::string("time") : "place") +
                              ": " + *field);
    field = value;
}

void Store::check_of_type(const Infon& infon) const {
    const Term& subject = infon.args[0];
    const Term& kind_arg = infon.args[1];
    if (!subject.is_entity() || !kind_arg.is_entity()) return;
    auto cat = ontology_->category(kind_arg.name());
    if (!cat) return;
    if (*cat == EntityCategory::Kind) {
        BasicKind k = *kind_from_name(kind_arg.name());
        BasicKind actual = ontology_->kind_of(subject.name());
        bool matches = actual == k;
        if (const Parameter* p = ontology_->find_parameter(subject.name()))
            matches = matches || p->base == k;
        if (infon.polarity == 1 && !matches)
            throw ValidationError("of-type contradicts the declaration of " + subject.name() +
                                  " (" + kind_sigil_name(actual) + ")");
        if (infon.polarity == 0 && matches)
            throw ValidationError("of-type denial contradicts the declaration of " +
                                  subject.name());
    } else if (*cat == EntityCategory::Type) {
        bool member = ontology_->of_type(subject.name(), kind_arg.name());
        if (infon.polarity == 1 && !member)
            throw ValidationError(subject.name() + " is not of type ~" + kind_arg.name());
        if (infon.polarity == 0 && member)
            throw ValidationError(subject.name() + " is of type ~" + kind_arg.name());
    }
}

void Store::make_part_of(const std::string& child, const std::string& parent) {
    if (!has_situation(child)) throw NameError("unknown situation: " + child);
    if (!has_situation(parent)) throw NameError("unknown situation: " + parent);
    assert_infons(parent,
                  {Infon{"part-of", {Term::entity(child), Term::entity(parent)}, 1}});
}

void Store::register_anchor(const std::string& anchoring_situation, const std::string& param,
                            const std::string& target) {
    assert_infons(anchoring_situation,
                  {Infon{"anchor", {Term::entity(param), Term::entity(target)}, 1}});
}

std::map<std::string, Term> Store::anchor_map(const std::string& anchoring_situation) const {
    std::map<std::string, Term> anchors;
    for (const StoredInfon& si : situation(anchoring_situation).own)
        if (si.infon.relation == "anchor" && si.infon.polarity == 1 &&
            si.infon.args.size() == 2 && si.infon.args[0].is_entity())
            anchors.emplace(si.infon.args[0].name(), si.infon.args[1]);
    return anchors;
}

Infon Store::apply_anchoring(const Infon& infon, const std::string& anchoring_situation) const {
    auto anchors = anchor_map(anchoring_situation);
    Infon out = infon;
    for (Term& arg : out.args) {
        if (!arg.is_entity()) continue;
        auto it = anchors.find(arg.name());
        if (it != anchors.end() && ontology_->find_parameter(arg.name())) arg = it->second;
    }
    return out;
}

std::optional<std::pair<std::string, Infon>> Store::find_incoherence() const {
    for (const auto& [id, s] : situations_) {
        std::set<Infon> effective;
        for (const Infon* e : effective_infons(id)) effective.insert(*e);
        for (const Infon& infon : effective) {
            if (infon.polarity == 1 && effective.count(dual(infon)))
                return std::make_pair(id, infon);
            // a denied part-of fact also clashes with the hierarchy it
            // would be derivable from
            if (infon.polarity == 0 && infon.relation == "part-of" &&
                infon.args.size() == 2 && infon.args[0].is_entity() &&
                infon.args[1].is_entity() &&
                part_of(infon.args[0].name(), infon.args[1].name()) &&
                part_of(infon.args[1].name(), id))
                return std::make_pair(id, dual(infon));
        }
    }
    return std::nullopt;
}

bool Store::addition_coheres(const std::string& id, const Infon& infon) const {
    Infon flipped = dual(infon);
    for (const auto& [candidate, s] : situations_)
        if (part_of(id, candidate) && supports(candidate, flipped)) return false;
    return true;
}

bool Store::add_derived_fact(const std::string& id, const Infon& infon) {
    Situation& s = situations_.at(id);
    for (const StoredInfon& existing : s.own)
        if (existing.infon == infon) return false;
    if (!addition_coheres(id, infon)) return false;
    s.own.push_back({infon, false});
    return true;
}

std::vector<std::pair<std::string, std::string>> Store::explicit_edges() const {
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& [id, s] : situations_)
        for (const std::string& p : s.parents)
            if (p != id) edges.emplace_back(id, p);
    std::sort(edges.begin(), edges.end());
    return edges;
}

}  // namespace sit
