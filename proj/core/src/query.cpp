#include "sit/query.hpp"

#include <algorithm>

#include "sit/errors.hpp"

namespace sit {

namespace {

Term resolve_var(const Term& term, const Binding& binding) {
    Term cur = term;
    while (cur.is_var()) {
        auto it = binding.find(cur.name());
        if (it == binding.end()) break;
        cur = it->second;
    }
    return cur;
}

// Replaces anchored parameters, recording which anchors were used.
struct AnchorApplier {
    const Ontology* ontology;
    std::map<std::string, Term> anchors;
    std::map<std::string, Term> used;

    Term apply(const Term& term) {
        if (!term.is_entity() || !ontology->find_parameter(term.name())) return term;
        auto it = anchors.find(term.name());
        if (it == anchors.end()) return term;
        used[term.name()] = it->second;
        return it->second;
    }

    ConstraintAtom apply(const ConstraintAtom& atom) {
        ConstraintAtom out = atom;
        out.situation = apply(out.situation);
        for (Term& arg : out.pattern.args) arg = apply(arg);
        return out;
    }
};

}  // namespace

void QueryEvaluator::validate(const std::vector<ConstraintAtom>& atoms,
                              const QueryOptions& options) const {
    if (atoms.empty()) throw ValidationError("empty query");
    for (const auto& group : {options.perspectivity, options.antecedent_persp,
                              options.group_filter})
        if (group && !constraints_->has_group(*group))
            throw NameError("unknown perspectivity set: " + *group);
    if (options.anchoring && !store_->has_situation(*options.anchoring))
        throw NameError("unknown anchoring situation: " + *options.anchoring);
    if (options.max_solutions && *options.max_solutions < 1)
        throw ValidationError("solution bound must be at least 1");
    for (const ConstraintAtom& atom : atoms) {
        if (atom.situation.is_entity()) {
            if (!store_->has_situation(atom.situation.name()))
                throw NameError("unknown situation: " + atom.situation.name());
        } else if (!atom.situation.is_var()) {
            throw ValidationError("query atoms need a situation or a situation variable");
        }
        ontology_->make_infon(atom.pattern.relation, atom.pattern.args, atom.pattern.polarity,
                              /*allow_vars=*/true);
    }
}

QueryResult QueryEvaluator::evaluate(const std::vector<ConstraintAtom>& atoms,
                                     const QueryOptions& options) const {
    validate(atoms, options);

    AnchorApplier pre{ontology_, {}, {}};
    std::vector<ConstraintAtom> prepared = atoms;
    if (options.anchoring) {
        pre.anchors = store_->anchor_map(*options.anchoring);
        for (ConstraintAtom& atom : prepared) atom = pre.apply(atom);
    }

    ProofOptions popts;
    popts.perspectivity = options.perspectivity;
    popts.antecedent_persp = options.antecedent_persp;
    popts.group_filter = options.group_filter;
    popts.anchoring = options.anchoring;
    popts.depth = engine_->config().depth_limit;

    QueryResult result;
    Prover prover(*engine_, popts);
    result.depth_exhausted = prover.exhausted();
    std::vector<Binding> partial{Binding{}};
    for (const ConstraintAtom& atom : prepared) {
        std::vector<Binding> next;
        for (const Binding& seed : partial) {
            for (const Binding& b : prover.prove(atom, seed).bindings)
                if (std::find(next.begin(), next.end(), b) == next.end()) next.push_back(b);
        }
        partial = std::move(next);
        if (partial.empty()) break;
    }

    for (const Binding& binding : partial) {
        if (options.max_solutions && result.solutions.size() >= *options.max_solutions) break;
        Solution sol;
        sol.bindings = binding;
        AnchorApplier post{ontology_, pre.anchors, {}};
        for (const ConstraintAtom& atom : prepared) {
            ConstraintAtom inst{resolve_var(atom.situation, binding), atom.positive,
                                atom.pattern};
            for (Term& arg : inst.pattern.args) arg = resolve_var(arg, binding);
            if (options.anchoring) inst = post.apply(inst);
            sol.atoms.push_back(std::move(inst));
        }
        std::map<std::string, Term> used = pre.used;
        used.insert(post.used.begin(), post.used.end());
        for (const auto& [param, value] : used) {
            sol.anchor_facts.push_back(
                Infon{"anchor", {Term::entity(param), value}, 1});
            sol.anchor_trace.emplace_back(param, ontology_->print_term(value));
        }
        result.solutions.push_back(std::move(sol));
    }
    return result;
}

std::string QueryEvaluator::render_solution(const Solution& solution,
                                            const QueryOptions& options) const {
    std::string out;
    std::size_t i = 0;
    while (i < solution.atoms.size()) {
        // group consecutive atoms sharing situation and mode
        std::size_t j = i;
        while (j + 1 < solution.atoms.size() &&
               solution.atoms[j + 1].situation == solution.atoms[i].situation &&
               solution.atoms[j + 1].positive == solution.atoms[i].positive)
            ++j;
        if (!out.empty()) out += ",\n";
        out += ontology_->print_term(solution.atoms[i].situation);
        out += solution.atoms[i].positive ? " |= " : " |/= ";
        if (j > i) {
            out += "{";
            for (std::size_t k = i; k <= j; ++k) {
                if (k > i) out += ", ";
                out += ontology_->print_infon(solution.atoms[k].pattern);
            }
            out += "}";
        } else {
            out += ontology_->print_infon(solution.atoms[i].pattern);
        }
        i = j + 1;
    }
    if (options.show_anchors && !solution.anchor_facts.empty() && options.anchoring) {
        out += "\nwith the anchoring:";
        if (solution.anchor_facts.size() == 1) {
            out += "\n" + *options.anchoring + " |= " +
                   ontology_->print_infon(solution.anchor_facts.front());
        } else {
            out += "\n" + *options.anchoring + " |= {";
            for (std::size_t k = 0; k < solution.anchor_facts.size(); ++k) {
                if (k > 0) out += ", ";
                out += ontology_->print_infon(solution.anchor_facts[k]);
            }
            out += "}";
        }
    }
    if (options.show_anchor_trace) {
        out += "\nanchoring trace:";
        for (const auto& [param, value] : solution.anchor_trace)
            out += "\n  " + param + " -> " + value;
    }
    return out;
}

}  // namespace sit
