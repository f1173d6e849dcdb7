#include "sit/engine.hpp"

#include <algorithm>

#include "sit/errors.hpp"

namespace sit {

const std::vector<Constraint> ConstraintIndex::empty_;

namespace {

Term resolve(const Term& term, const Binding& binding) {
    Term cur = term;
    while (cur.is_var()) {
        auto it = binding.find(cur.name());
        if (it == binding.end()) break;
        if (it->second == cur) break;
        cur = it->second;
    }
    return cur;
}

Infon substitute_infon(const Infon& infon, const Binding& binding) {
    Infon out = infon;
    for (Term& arg : out.args) arg = resolve(arg, binding);
    return out;
}

ConstraintAtom substitute_atom(const ConstraintAtom& atom, const Binding& binding) {
    return ConstraintAtom{resolve(atom.situation, binding), atom.positive,
                          substitute_infon(atom.pattern, binding)};
}

void collect_vars(const ConstraintAtom& atom, std::set<std::string>& out) {
    if (atom.situation.is_var()) out.insert(atom.situation.name());
    for (const Term& arg : atom.pattern.args)
        if (arg.is_var()) out.insert(arg.name());
}

bool unify_terms(const Ontology& ontology, const Term& lhs, const Term& rhs, Binding& binding,
                 const Role* role) {
    Term a = resolve(lhs, binding);
    Term b = resolve(rhs, binding);
    if (a == b) return true;
    if (a.is_var() && b.is_var()) {
        binding[a.name()] = b;
        return true;
    }
    if (a.is_var() || b.is_var()) {
        const Term& var = a.is_var() ? a : b;
        const Term& value = a.is_var() ? b : a;
        if (value.is_null()) return false;  // variables match objects, not the null object
        if (role && !ontology.admits(*role, value)) return false;
        binding[var.name()] = value;
        return true;
    }
    return false;
}

bool unify_patterns(const Ontology& ontology, const Infon& lhs, const Infon& rhs,
                    Binding& binding) {
    if (lhs.relation != rhs.relation || lhs.polarity != rhs.polarity) return false;
    if (lhs.args.size() != rhs.args.size()) return false;
    const Relation* rel = ontology.find_relation(lhs.relation);
    for (std::size_t i = 0; i < lhs.args.size(); ++i) {
        const Role* role = rel && i < rel->roles.size() ? &rel->roles[i] : nullptr;
        if (!unify_terms(ontology, lhs.args[i], rhs.args[i], binding, role)) return false;
    }
    return true;
}

void append_unique(std::vector<Binding>& out, const Binding& binding) {
    if (std::find(out.begin(), out.end(), binding) == out.end()) out.push_back(binding);
}

std::string binding_signature(const Binding& binding) {
    std::string sig;
    for (const auto& [name, value] : binding) {
        sig += name;
        sig += '=';
        sig += value.is_var() ? "?" + value.name() : value.is_null() ? "-" : value.name();
        sig += ';';
    }
    return sig;
}

}  // namespace

std::optional<Binding> unify(const Ontology& ontology, const Infon& pattern, const Infon& ground,
                             const Binding& bindings) {
    Binding extended = bindings;
    if (!unify_patterns(ontology, pattern, ground, extended)) return std::nullopt;
    return extended;
}

const Constraint& ConstraintIndex::define(Constraint constraint, const Ontology& ontology) {
    if (constraint.group.empty() || constraint.name.empty())
        throw EngineError("constraints need a group and a name");
    if (constraint.antecedents.empty() || constraint.consequents.empty())
        throw EngineError("constraint " + constraint.name +
                          " needs at least one antecedent and one consequent");
    if (find(constraint.group, constraint.name))
        throw EngineError("constraint " + constraint.group + ":" + constraint.name +
                          " is already defined");

    std::set<std::string> antecedent_vars;
    for (const ConstraintAtom& atom : constraint.antecedents) {
        collect_vars(atom, antecedent_vars);
        ontology.make_infon(atom.pattern.relation, atom.pattern.args, atom.pattern.polarity,
                            /*allow_vars=*/true);
    }
    for (const ConstraintAtom& atom : constraint.consequents) {
        if (!atom.positive)
            throw EngineError("constraint " + constraint.name +
                              " has a |/= consequent; only |= facts can be derived");
        ontology.make_infon(atom.pattern.relation, atom.pattern.args, atom.pattern.polarity,
                            /*allow_vars=*/true);
        std::set<std::string> vars;
        collect_vars(atom, vars);
        for (const std::string& v : vars)
            if (!antecedent_vars.count(v))
                throw EngineError("variable ?" + v + " of constraint " + constraint.name +
                                  " occurs only in a consequent");
    }
    for (const Infon& cond : constraint.conditions) {
        if (!cond.ground())
            throw EngineError("background conditions of " + constraint.name + " must be ground");
        ontology.make_infon(cond.relation, cond.args, cond.polarity);
    }
    for (auto* atoms : {&constraint.antecedents, &constraint.consequents})
        for (const ConstraintAtom& atom : *atoms)
            if (atom.situation.is_entity() &&
                ontology.kind_of(atom.situation.name()) != BasicKind::Sit)
                throw EngineError(atom.situation.name() + " is not a situation");

    auto& vec = groups_[constraint.group];
    vec.push_back(std::move(constraint));
    return vec.back();
}

const std::vector<Constraint>& ConstraintIndex::group(const std::string& name) const {
    auto it = groups_.find(name);
    return it == groups_.end() ? empty_ : it->second;
}

const Constraint* ConstraintIndex::find(const std::string& group_name,
                                        const std::string& name) const {
    for (const Constraint& c : group(group_name))
        if (c.name == name) return &c;
    return nullptr;
}

bool Engine::is_candidate(const Constraint& constraint) const {
    for (const Infon& condition : constraint.conditions)
        if (store_->supports(Store::world, dual(condition))) return false;
    return true;
}

Prover::Prover(const Engine& engine, ProofOptions options)
    : engine_(&engine), opts_(std::move(options)), scratch_(engine.store()) {
    if (opts_.anchoring) {
        for (auto& [param, value] : scratch_.anchor_map(*opts_.anchoring))
            if (engine.ontology().find_parameter(param)) anchors_.emplace(param, value);
    }
    if (!opts_.perspectivity) return;
    const std::string& persp = *opts_.perspectivity;
    if (opts_.antecedent_persp && *opts_.antecedent_persp != persp) {
        // antecedents live in their own saturation; consequent derivation
        // reads it and cannot feed itself
        ProofOptions sub = opts_;
        sub.perspectivity = opts_.antecedent_persp;
        sub.anchoring.reset();
        Prover antecedent_prover(engine, sub);
        exhausted_ |= antecedent_prover.exhausted_;
        exhausted_ |= saturate(persp, &antecedent_prover);
    } else {
        exhausted_ |= saturate(persp, nullptr);
    }
}

const std::vector<const Infon*>& Prover::effective(const std::string& id) const {
    // invalidated whenever the scratch store gains a fact
    auto it = effective_cache_.find(id);
    if (it == effective_cache_.end())
        it = effective_cache_.emplace(id, scratch_.effective_infons(id)).first;
    return it->second;
}

void Prover::match_atom(const ConstraintAtom& atom, const Binding& seed, bool anchored,
                        std::vector<Binding>& out) const {
    const Ontology& ontology = engine_->ontology();
    Term sit = resolve(atom.situation, seed);
    if (sit.is_var()) {
        for (const auto& [id, s] : scratch_.situations()) {
            Binding b = seed;
            b[sit.name()] = Term::entity(id);
            match_atom(atom, b, anchored, out);
        }
        return;
    }
    if (!sit.is_entity() || !scratch_.has_situation(sit.name()))
        throw NameError("unknown situation: " +
                        (sit.is_entity() ? sit.name() : ontology.print_term(sit)));

    Infon pattern = substitute_infon(atom.pattern, seed);
    bool view = anchored && !anchors_.empty();
    for (const Infon* stored : effective(sit.name())) {
        if (stored->relation != pattern.relation || stored->polarity != pattern.polarity)
            continue;
        if (view && stored->relation != "anchor") {
            Infon viewed = *stored;
            for (Term& arg : viewed.args) {
                if (!arg.is_entity()) continue;
                auto it = anchors_.find(arg.name());
                if (it != anchors_.end()) arg = it->second;
            }
            if (auto b = unify(ontology, pattern, viewed, seed)) append_unique(out, *b);
        } else {
            if (auto b = unify(ontology, pattern, *stored, seed)) append_unique(out, *b);
        }
    }
    if (pattern.relation == "part-of" && pattern.polarity == 1)
        for (const Infon& derived : scratch_.derived_part_of_facts(sit.name()))
            if (auto b = unify(ontology, pattern, derived, seed)) append_unique(out, *b);
}

std::vector<Binding> Prover::solve_on(const std::vector<ConstraintAtom>& atoms,
                                      const Binding& seed, bool anchored) const {
    const Ontology& ontology = engine_->ontology();
    std::vector<Binding> seeds{seed};
    for (const ConstraintAtom& atom : atoms) {
        std::vector<Binding> next;
        for (const Binding& b : seeds) {
            if (!atom.positive) {
                Term sit = resolve(atom.situation, b);
                Infon inst = substitute_infon(atom.pattern, b);
                if (!sit.is_entity() || !inst.ground())
                    throw EngineError("|/= atom must be ground when evaluated: " +
                                      ontology.print_infon(inst));
                if (!scratch_.has_situation(sit.name()))
                    throw NameError("unknown situation: " + sit.name());
                std::vector<Binding> hits;
                ConstraintAtom positive{sit, true, inst};
                match_atom(positive, b, anchored, hits);
                if (hits.empty()) next.push_back(b);
                continue;
            }
            match_atom(atom, b, anchored, next);
        }
        seeds = std::move(next);
        if (seeds.empty()) break;
    }
    return seeds;
}

bool Prover::saturate(const std::string& group, const Prover* antecedent_view) {
    const Ontology& ontology = engine_->ontology();
    const auto& constraints = engine_->constraint_index().group(group);
    bool any_usable = false;
    for (const Constraint& c : constraints)
        if (c.direction != Direction::Forward &&
            (!opts_.group_filter || c.group == *opts_.group_filter) && engine_->is_candidate(c))
            any_usable = true;
    if (!any_usable) return false;
    if (opts_.depth <= 0) return true;

    int rounds = 0;
    bool changed = true;
    while (changed) {
        if (rounds >= opts_.depth) break;  // capped with work pending
        ++rounds;
        changed = false;
        for (const Constraint& c : constraints) {
            if (c.direction == Direction::Forward) continue;
            if (opts_.group_filter && c.group != *opts_.group_filter) continue;
            if (!engine_->is_candidate(c)) continue;

            const Prover& ant_prover = antecedent_view ? *antecedent_view : *this;
            std::vector<Binding> seeds = ant_prover.solve_on(c.antecedents, {}, false);

            for (const Binding& binding : seeds) {
                for (const ConstraintAtom& q : c.consequents) {
                    ConstraintAtom inst = substitute_atom(q, binding);
                    if (!inst.situation.is_entity() || !inst.pattern.ground()) continue;
                    Infon fact;
                    try {
                        fact = ontology.make_infon(inst.pattern.relation, inst.pattern.args,
                                                   inst.pattern.polarity);
                    } catch (const Error&) {
                        continue;  // instantiation violates appropriateness
                    }
                    if (!scratch_.has_situation(inst.situation.name())) continue;
                    if (scratch_.add_derived_fact(inst.situation.name(), fact)) {
                        changed = true;
                        effective_cache_.clear();
                    }
                }
            }
        }
    }
    // answers needing more rounds than the depth limit are missing
    return changed;
}

ProveResult Prover::prove(const ConstraintAtom& goal, const Binding& seed) const {
    const Ontology& ontology = engine_->ontology();
    ProveResult out;
    out.depth_exhausted = exhausted_;

    std::vector<Binding> raw = solve_on({goal}, seed, true);

    std::set<std::string> visible;
    for (const auto& [name, value] : seed) visible.insert(name);
    collect_vars(goal, visible);

    for (const Binding& full : raw) {
        Binding projected;
        bool complete = true;
        for (const std::string& name : visible) {
            Term value = resolve(Term::var(name), full);
            if (value.is_var()) {
                complete = false;
                break;
            }
            projected[name] = value;
        }
        if (!complete) continue;
        if (goal.positive) {
            ConstraintAtom inst = substitute_atom(goal, projected);
            try {
                ontology.make_infon(inst.pattern.relation, inst.pattern.args,
                                    inst.pattern.polarity);
            } catch (const Error&) {
                continue;
            }
        }
        append_unique(out.bindings, projected);
    }
    return out;
}

std::vector<Binding> Prover::solve(const std::vector<ConstraintAtom>& atoms,
                                   const Binding& seed) const {
    std::vector<Binding> seeds{seed};
    for (const ConstraintAtom& atom : atoms) {
        std::vector<Binding> next;
        for (const Binding& b : seeds)
            for (const Binding& nb : prove(atom, b).bindings) append_unique(next, nb);
        seeds = std::move(next);
        if (seeds.empty()) break;
    }
    return seeds;
}

ProveResult Engine::prove(const ConstraintAtom& goal, const Binding& seed,
                          const ProofOptions& options) const {
    return Prover(*this, options).prove(goal, seed);
}

bool Engine::proves(const std::string& situation, const Infon& infon,
                    const ProofOptions& options) const {
    ConstraintAtom goal{Term::entity(situation), true, infon};
    return !prove(goal, {}, options).bindings.empty();
}

Engine::ForwardResult Engine::forward_chain(const std::optional<std::string>& antecedent_persp) {
    ForwardResult out;
    std::set<std::string> fired;
    std::size_t activations = 0;

    bool changed = true;
    while (changed && !out.hit_cap) {
        changed = false;
        for (const auto& [group_name, group_constraints] : constraints_->groups()) {
            for (const Constraint& c : group_constraints) {
                if (c.direction == Direction::Backward) continue;
                if (!is_candidate(c)) continue;

                ProofOptions opts;
                opts.perspectivity = antecedent_persp.value_or(c.group);
                opts.antecedent_persp = antecedent_persp;
                opts.depth = config_.depth_limit;

                std::set<std::string> user_vars;
                for (const ConstraintAtom& atom : c.antecedents) collect_vars(atom, user_vars);

                Prover prover(*this, opts);
                std::vector<Binding> partial = prover.solve(c.antecedents, {});

                for (const Binding& binding : partial) {
                    Binding projected;
                    for (const std::string& v : user_vars) {
                        Term value = resolve(Term::var(v), binding);
                        if (!value.is_var()) projected[v] = value;
                    }
                    std::string sig =
                        c.group + '\x1f' + c.name + '\x1f' + binding_signature(projected);
                    if (!fired.insert(sig).second) continue;
                    if (++activations > config_.max_firings) {
                        out.hit_cap = true;
                        out.frontier = c.group + ":" + c.name;
                        return out;
                    }
                    if (!is_candidate(c)) break;  // conditions re-checked per activation

                    for (const ConstraintAtom& q : c.consequents) {
                        ConstraintAtom inst = substitute_atom(q, projected);
                        Firing firing{c.group, c.name, projected, "", inst.pattern, true, ""};
                        if (!inst.situation.is_entity() || !inst.pattern.ground()) {
                            firing.accepted = false;
                            firing.note = "unbound consequent";
                            out.firings.push_back(std::move(firing));
                            continue;
                        }
                        firing.situation = inst.situation.name();
                        try {
                            Infon validated =
                                ontology_->make_infon(inst.pattern.relation, inst.pattern.args,
                                                      inst.pattern.polarity);
                            auto added = store_->assert_infons(firing.situation, {validated});
                            firing.consequence = validated;
                            for (auto& entry : added.added) {
                                out.performed.push_back(entry);
                                changed = true;
                            }
                        } catch (const Error& e) {
                            firing.accepted = false;
                            firing.note = e.what();
                        }
                        out.firings.push_back(std::move(firing));
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace sit
