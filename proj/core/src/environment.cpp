#include "sit/environment.hpp"

#include "sit/errors.hpp"

namespace sit {

Environment::Environment()
    : store_(&ontology_), engine_(ontology_, store_, constraints_, EngineConfig{}) {
    ontology_.set_support_oracle(
        [this](const std::string& situation, const Infon& infon) {
            return store_.has_situation(situation) && store_.supports(situation, infon);
        });

    store_.create_situation(Store::world);
    ontology_.declare_object(Store::world, KindRef(BasicKind::Sit));

    const Role any = Role::any();
    const Role typ{{KindRef(BasicKind::Typ)}};
    const Role par{{KindRef(BasicKind::Par)}};
    const Role sit{{KindRef(BasicKind::Sit)}};
    const Role tim{{KindRef(BasicKind::Tim)}};
    const Role loc{{KindRef(BasicKind::Loc)}};
    ontology_.declare_relation("of-type", {any, typ}, 2);
    ontology_.declare_relation("anchor", {par, any}, 2);
    ontology_.declare_relation("part-of", {sit, sit}, 2);
    ontology_.declare_relation("make-part-of", {sit, sit}, 2);
    ontology_.declare_relation("time-of", {sit, tim}, 2);
    ontology_.declare_relation("place-of", {sit, loc}, 2);

    // default system parameters, one per primitive
    for (BasicKind k : all_basic_kinds)
        ontology_.declare_parameter(std::string(kind_name(k)) + "1", kind_sigil_name(k), {});

    // typing facts in w: the nine primitives, w itself, the built-in
    // relations, and the default parameters
    for (BasicKind k : all_basic_kinds)
        add_world_fact(ontology_.make_infon(
            "of-type", {Term::entity(std::string(kind_name(k))), Term::entity("TYP")}, 1));
    add_world_fact(
        ontology_.make_infon("of-type", {Term::entity(Store::world), Term::entity("SIT")}, 1));
    for (const char* rel : {"of-type", "anchor", "part-of", "make-part-of", "time-of", "place-of"})
        add_world_fact(
            ontology_.make_infon("of-type", {Term::entity(rel), Term::entity("REL")}, 1));
    for (BasicKind k : all_basic_kinds)
        add_world_fact(ontology_.make_infon(
            "of-type", {Term::entity(std::string(kind_name(k)) + "1"), Term::entity("PAR")}, 1));

    ontology_.seal_bootstrap();
}

void Environment::add_world_fact(const Infon& infon) {
    store_.assert_infons(Store::world, {infon}, /*user=*/false);
}

const ObjectInfo& Environment::declare_object(const std::string& name, const KindRef& kind) {
    const ObjectInfo& object = ontology_.declare_object(name, kind);
    bool situation_created = false;
    try {
        if (object.basic == BasicKind::Sit) {
            store_.create_situation(name);
            situation_created = true;
        }
        if (!kind.is_basic()) {
            const TypeAbstraction& type = *ontology_.find_type(kind.type_name());
            std::vector<Infon> instantiated;
            for (const Infon& cond : type.conditions)
                instantiated.push_back(
                    Ontology::substitute(cond, type.param, Term::entity(name)));
            store_.assert_infons(type.grounding, instantiated, /*user=*/false);
            add_world_fact(ontology_.make_infon(
                "of-type", {Term::entity(name), Term::entity(type.name)}, 1));
        }
        add_world_fact(ontology_.make_infon(
            "of-type",
            {Term::entity(name), Term::entity(std::string(kind_name(object.basic)))}, 1));
    } catch (...) {
        if (situation_created) store_.remove_situation(name);
        ontology_.undeclare(name);
        throw;
    }
    last_chain_ = engine_.forward_chain();
    return object;
}

const Relation& Environment::declare_relation(const std::string& name, std::vector<Role> roles,
                                              std::size_t minimality) {
    const Relation& relation = ontology_.declare_relation(name, std::move(roles), minimality);
    add_world_fact(
        ontology_.make_infon("of-type", {Term::entity(name), Term::entity("REL")}, 1));
    last_chain_ = engine_.forward_chain();
    return relation;
}

const Parameter& Environment::declare_parameter(const std::string& name, const std::string& base,
                                                const std::vector<Infon>& restrictions) {
    const Parameter& parameter = ontology_.declare_parameter(name, base, restrictions);
    add_world_fact(
        ontology_.make_infon("of-type", {Term::entity(name), Term::entity("PAR")}, 1));
    last_chain_ = engine_.forward_chain();
    return parameter;
}

const TypeAbstraction& Environment::define_type_abstraction(const std::string& name,
                                                            const std::string& param,
                                                            const std::string& grounding,
                                                            std::vector<Infon> conditions) {
    if (!store_.has_situation(grounding))
        throw NameError("unknown grounding situation: " + grounding);
    const TypeAbstraction& type =
        ontology_.define_type_abstraction(name, param, grounding, std::move(conditions));
    add_world_fact(
        ontology_.make_infon("of-type", {Term::entity(name), Term::entity("TYP")}, 1));
    last_chain_ = engine_.forward_chain();
    return type;
}

void Environment::name_infon(const std::string& name, Infon infon) {
    ontology_.name_infon(name, std::move(infon));
    add_world_fact(
        ontology_.make_infon("of-type", {Term::entity(name), Term::entity("INF")}, 1));
    last_chain_ = engine_.forward_chain();
}

const Constraint& Environment::define_constraint(Constraint constraint) {
    return constraints_.define(std::move(constraint), ontology_);
}

Environment::AssertOutcome Environment::assert_proposition(
    const Proposition& proposition, const std::optional<std::string>& anchoring,
    const std::optional<std::string>& antecedent_persp) {
    if (!proposition.positive)
        throw ValidationError("|/= propositions cannot be asserted; |/= is evaluated in "
                              "queries and constraints only");
    if (proposition.infons.empty()) throw ValidationError("empty proposition");
    if (anchoring && !store_.has_situation(*anchoring))
        throw NameError("unknown anchoring situation: " + *anchoring);

    std::vector<Infon> infons;
    infons.reserve(proposition.infons.size());
    for (const Infon& infon : proposition.infons) {
        Infon prepared = anchoring ? store_.apply_anchoring(infon, *anchoring) : infon;
        // revalidate after substitution
        infons.push_back(
            ontology_.make_infon(prepared.relation, prepared.args, prepared.polarity));
    }

    AssertOutcome outcome;
    outcome.direct = store_.assert_infons(proposition.situation, infons);
    last_chain_ = engine_.forward_chain(antecedent_persp);
    outcome.chained = last_chain_;
    return outcome;
}

Engine::ForwardResult Environment::chain(const std::optional<std::string>& antecedent_persp) {
    last_chain_ = engine_.forward_chain(antecedent_persp);
    return last_chain_;
}

QueryResult Environment::query(const std::vector<ConstraintAtom>& atoms,
                               const QueryOptions& options) const {
    QueryEvaluator evaluator(ontology_, store_, constraints_, engine_);
    return evaluator.evaluate(atoms, options);
}

std::string Environment::render_solution(const Solution& solution,
                                         const QueryOptions& options) const {
    QueryEvaluator evaluator(ontology_, store_, constraints_, engine_);
    return evaluator.render_solution(solution, options);
}

bool Environment::supports(const std::string& situation, const Infon& infon,
                           const std::optional<std::string>& perspectivity) const {
    if (store_.supports(situation, infon)) return true;
    if (!perspectivity) return false;
    ProofOptions options;
    options.perspectivity = perspectivity;
    options.depth = engine_.config().depth_limit;
    return engine_.proves(situation, infon, options);
}

std::optional<std::pair<std::string, Infon>> Environment::audit_incoherence() const {
    return store_.find_incoherence();
}

bool Environment::audit_no_stored_variables() const {
    for (const auto& [id, situation] : store_.situations())
        for (const StoredInfon& stored : situation.own)
            if (!stored.infon.ground()) return false;
    return true;
}

bool Environment::audit_appropriateness() const {
    for (const auto& [id, situation] : store_.situations()) {
        for (const StoredInfon& stored : situation.own) {
            try {
                ontology_.make_infon(stored.infon.relation, stored.infon.args,
                                     stored.infon.polarity);
            } catch (const Error&) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace sit
