#include "sit/session.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <utility>

#include "sit/errors.hpp"

namespace sit {

namespace {

Infon resolve_infon_expr(const Environment& env, const InfonExpr& expr, bool allow_vars) {
    if (expr.is_ref()) {
        const Infon* named = env.ontology().find_named_infon(expr.ref());
        if (!named) throw NameError("undefined infon name: " + expr.ref());
        return *named;
    }
    const RawInfon& raw = expr.literal();
    return env.ontology().make_infon(raw.relation, raw.args, raw.polarity, allow_vars);
}

// raw form for declarations that validate after registering the new name
Infon loose_infon_expr(const Environment& env, const InfonExpr& expr) {
    if (expr.is_ref()) {
        const Infon* named = env.ontology().find_named_infon(expr.ref());
        if (!named) throw NameError("undefined infon name: " + expr.ref());
        return *named;
    }
    const RawInfon& raw = expr.literal();
    return Infon{raw.relation, raw.args, raw.polarity};
}

std::vector<ConstraintAtom> expand_atoms(const Environment& env,
                                         const std::vector<AtomExpr>& exprs) {
    std::vector<ConstraintAtom> atoms;
    for (const AtomExpr& expr : exprs)
        for (const InfonExpr& infon : expr.infons)
            atoms.push_back(ConstraintAtom{expr.situation, expr.positive,
                                           resolve_infon_expr(env, infon, true)});
    return atoms;
}

KindRef resolve_kind(const Environment& env, const std::string& bare) {
    if (auto basic = kind_from_name(bare)) return KindRef(*basic);
    if (env.ontology().find_type(bare)) return KindRef(bare);
    throw NameError("unknown kind: ~" + bare);
}

std::string infon_set_text(const Ontology& ontology, const std::vector<Infon>& infons) {
    if (infons.size() == 1) return ontology.print_infon(infons.front());
    std::string out = "{";
    for (std::size_t i = 0; i < infons.size(); ++i) {
        if (i) out += ", ";
        out += ontology.print_infon(infons[i]);
    }
    return out + "}";
}

std::string relation_decl_text(const Relation& relation) {
    std::string out = "<" + relation.name + " | ";
    for (std::size_t i = 0; i < relation.roles.size(); ++i) {
        if (i) out += ", ";
        for (std::size_t j = 0; j < relation.roles[i].admitted.size(); ++j) {
            if (j) out += "|";
            out += relation.roles[i].admitted[j].display();
        }
    }
    return out + "> [" + std::to_string(relation.minimality) + "]";
}

std::string parameter_decl_text(const Ontology& ontology, const Parameter& parameter) {
    std::string out = parameter.name + " = " + parameter.base_written;
    if (!parameter.restrictions.empty()) {
        std::vector<Infon> restrictions(parameter.restrictions.begin(),
                                        parameter.restrictions.end());
        out += " ^ " + infon_set_text(ontology, restrictions);
    }
    return out;
}

std::string type_decl_text(const Ontology& ontology, const TypeAbstraction& type) {
    return "~" + type.name + " = [" + type.param + " | " + type.grounding + " |= " +
           infon_set_text(ontology, type.conditions) + "]";
}

std::string atom_text(const Ontology& ontology, const ConstraintAtom& atom) {
    return ontology.print_term(atom.situation) + (atom.positive ? " |= " : " |/= ") +
           ontology.print_infon(atom.pattern);
}

std::string constraint_decl_text(const Ontology& ontology, const Constraint& constraint) {
    const std::vector<ConstraintAtom>* lhs = &constraint.antecedents;
    const std::vector<ConstraintAtom>* rhs = &constraint.consequents;
    const char* arrow = "=>";
    if (constraint.direction == Direction::Backward) {
        lhs = &constraint.consequents;
        rhs = &constraint.antecedents;
        arrow = "<=";
    } else if (constraint.direction == Direction::Bidirectional) {
        arrow = "<=>";
    }
    auto atoms_text = [&](const std::vector<ConstraintAtom>& atoms) {
        std::string out;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            if (i) out += ", ";
            out += atom_text(ontology, atoms[i]);
        }
        return out;
    };
    std::string out = constraint.group + ": " + constraint.name + ": " + atoms_text(*lhs) +
                      " " + arrow + " " + atoms_text(*rhs);
    if (!constraint.conditions.empty())
        out += " UNDER-CONDITIONS: w: " + infon_set_text(ontology, constraint.conditions);
    return out;
}

}  // namespace

std::string Session::render_firings(const std::vector<Engine::Firing>& firings) const {
    const Ontology& ontology = env_.ontology();
    std::string out;
    for (const Engine::Firing& firing : firings) {
        if (!out.empty()) out += "\n";
        std::string binding = "{";
        bool first = true;
        for (const auto& [name, value] : firing.binding) {
            if (!first) binding += ", ";
            first = false;
            binding += "?" + name + "=" + ontology.print_term(value);
        }
        binding += "}";
        out += "fire " + firing.group + ":" + firing.name + " " + binding + " => " +
               (firing.situation.empty() ? "?" : firing.situation) + " |= " +
               ontology.print_infon(firing.consequence) +
               (firing.accepted ? " accepted" : " refused (" + firing.note + ")");
    }
    return out;
}

std::string Session::apply(const Statement& statement) {
    std::string trace_output;
    auto with_chain_trace = [&](const Engine::ForwardResult& chained) {
        if (state_.trace && !chained.firings.empty())
            trace_output = render_firings(chained.firings);
        if (chained.hit_cap)
            throw EngineError("forward chaining stopped at the firing cap; frontier " +
                              chained.frontier);
    };

    if (std::holds_alternative<ObjectDecl>(statement)) {
        const auto& decl = std::get<ObjectDecl>(statement);
        env_.declare_object(decl.name, resolve_kind(env_, decl.kind));
        with_chain_trace(env_.last_chain());
    } else if (std::holds_alternative<RelationDecl>(statement)) {
        const auto& decl = std::get<RelationDecl>(statement);
        std::vector<Role> roles;
        for (const auto& alternatives : decl.roles) {
            Role role;
            for (const std::string& name : alternatives)
                role.admitted.push_back(resolve_kind(env_, name));
            roles.push_back(std::move(role));
        }
        env_.declare_relation(decl.name, std::move(roles),
                              static_cast<std::size_t>(decl.minimality));
        with_chain_trace(env_.last_chain());
    } else if (std::holds_alternative<ParamDecl>(statement)) {
        const auto& decl = std::get<ParamDecl>(statement);
        std::vector<Infon> restrictions;
        for (const InfonExpr& expr : decl.restrictions)
            restrictions.push_back(loose_infon_expr(env_, expr));
        env_.declare_parameter(decl.name, decl.base, restrictions);
        with_chain_trace(env_.last_chain());
    } else if (std::holds_alternative<AliasDecl>(statement)) {
        const auto& decl = std::get<AliasDecl>(statement);
        auto category = env_.ontology().category(decl.target);
        if (!category) throw NameError("unknown name: " + decl.target);
        if (*category == EntityCategory::Parameter || *category == EntityCategory::Kind) {
            env_.declare_parameter(decl.name, decl.target, {});
        } else if (*category == EntityCategory::NamedInfon) {
            env_.name_infon(decl.name, *env_.ontology().find_named_infon(decl.target));
        } else {
            throw NameError(decl.target + " is neither a parameter nor a named infon");
        }
        with_chain_trace(env_.last_chain());
    } else if (std::holds_alternative<TypeDecl>(statement)) {
        const auto& decl = std::get<TypeDecl>(statement);
        std::vector<Infon> conditions;
        for (const InfonExpr& expr : decl.conditions)
            conditions.push_back(loose_infon_expr(env_, expr));
        env_.define_type_abstraction(decl.name, decl.param, decl.grounding,
                                     std::move(conditions));
        with_chain_trace(env_.last_chain());
    } else if (std::holds_alternative<InfonNameDecl>(statement)) {
        const auto& decl = std::get<InfonNameDecl>(statement);
        env_.name_infon(decl.name, resolve_infon_expr(env_, decl.infon, false));
        with_chain_trace(env_.last_chain());
    } else if (std::holds_alternative<PropositionStmt>(statement)) {
        const auto& prop = std::get<PropositionStmt>(statement);
        Proposition proposition;
        proposition.situation = prop.situation;
        proposition.positive = prop.positive;
        for (const InfonExpr& expr : prop.infons)
            proposition.infons.push_back(resolve_infon_expr(env_, expr, false));
        auto outcome =
            env_.assert_proposition(proposition, state_.anchoring, state_.antecedent_persp);
        with_chain_trace(outcome.chained);
    } else if (std::holds_alternative<ConstraintStmt>(statement)) {
        const auto& stmt = std::get<ConstraintStmt>(statement);
        Constraint constraint;
        constraint.group = stmt.group;
        constraint.name = stmt.name;
        constraint.direction = stmt.direction;
        if (stmt.direction == Direction::Backward) {
            constraint.consequents = expand_atoms(env_, stmt.lhs);
            constraint.antecedents = expand_atoms(env_, stmt.rhs);
        } else {
            constraint.antecedents = expand_atoms(env_, stmt.lhs);
            constraint.consequents = expand_atoms(env_, stmt.rhs);
        }
        for (const InfonExpr& expr : stmt.conditions)
            constraint.conditions.push_back(resolve_infon_expr(env_, expr, false));
        env_.define_constraint(std::move(constraint));
    } else if (std::holds_alternative<QueryStmt>(statement)) {
        throw Error("queries belong to query mode (:mode query)");
    } else {
        throw Error("directives cannot be applied as statements");
    }
    return trace_output;
}

QueryOptions Session::query_options() const {
    QueryOptions options;
    options.perspectivity = state_.perspectivity;
    options.antecedent_persp = state_.antecedent_persp;
    options.anchoring = state_.anchoring;
    options.max_solutions = state_.max_solutions;
    options.show_anchors = true;
    options.show_anchor_trace = state_.anchor_trace;
    return options;
}

std::string Session::run_query(const QueryStmt& query, std::size_t* solution_count) const {
    QueryOptions options = query_options();
    QueryResult result = env_.query(expand_atoms(env_, query.atoms), options);
    if (solution_count) *solution_count = result.solutions.size();

    std::string out;
    for (std::size_t i = 0; i < result.solutions.size(); ++i) {
        if (i) out += "\n";
        out += "Solution " + std::to_string(i + 1) + ":\n" +
               env_.render_solution(result.solutions[i], options);
    }
    if (result.solutions.empty()) out = "no solutions";
    if (result.depth_exhausted)
        out += "\nwarning: depth limit reached; results may be incomplete";
    return out;
}

Session::StepResult Session::repl_step(const std::string& line) {
    StepResult result;
    if (!buffer_.empty())
        buffer_ += "\n" + line;
    else
        buffer_ = line;
    if (needs_more_input(buffer_)) {
        result.pending = true;
        return result;
    }
    std::string text = std::exchange(buffer_, std::string{});
    if (is_blank_statement(text)) return result;

    try {
        Statement statement = parse_statement(text, state_.mode == SessionState::Mode::Query);
        if (const auto* directive = std::get_if<DirectiveStmt>(&statement)) {
            result.output = handle_directive(*directive, result);
        } else if (const auto* query = std::get_if<QueryStmt>(&statement)) {
            result.was_query = true;
            result.output = run_query(*query, &result.solutions);
        } else {
            result.output = apply(statement);
        }
    } catch (const ParseError& e) {
        result.error = true;
        result.output = "error: " + std::string(e.what()) + " (line " +
                        std::to_string(e.line) + ", column " + std::to_string(e.column) + ")";
    } catch (const Error& e) {
        result.error = true;
        result.output = "error: " + std::string(e.what());
    } catch (const std::exception& e) {
        result.error = true;
        result.output = "error: " + std::string(e.what());
    }
    return result;
}

std::string Session::handle_directive(const DirectiveStmt& directive, StepResult& result) {
    auto need_arg = [&](const char* usage) -> const std::string& {
        if (directive.args.empty()) throw Error(std::string("usage: ") + usage);
        return directive.args.front();
    };

    if (directive.name == "mode") {
        const std::string& arg = need_arg(":mode assert|query");
        if (arg == "assert")
            state_.mode = SessionState::Mode::Assert;
        else if (arg == "query")
            state_.mode = SessionState::Mode::Query;
        else
            throw Error("usage: :mode assert|query");
    } else if (directive.name == "anchor") {
        const std::string& arg = need_arg(":anchor SITUATION|off");
        if (arg == "off") {
            state_.anchoring.reset();
        } else {
            if (!env_.store().has_situation(arg)) throw NameError("unknown situation: " + arg);
            state_.anchoring = arg;
        }
    } else if (directive.name == "perspective") {
        const std::string& arg = need_arg(":perspective GROUP|off");
        if (arg == "off")
            state_.perspectivity.reset();
        else
            state_.perspectivity = arg;
    } else if (directive.name == "antecedent-perspective") {
        const std::string& arg = need_arg(":antecedent-perspective GROUP|off");
        if (arg == "off")
            state_.antecedent_persp.reset();
        else
            state_.antecedent_persp = arg;
    } else if (directive.name == "solutions") {
        const std::string& arg = need_arg(":solutions N|all");
        if (arg == "all") {
            state_.max_solutions.reset();
        } else {
            std::size_t n = 0;
            try {
                if (arg.empty() || arg.find_first_not_of("0123456789") != std::string::npos)
                    throw std::invalid_argument(arg);
                n = std::stoul(arg);
            } catch (const std::exception&) {
                throw Error("usage: :solutions N|all");
            }
            if (n < 1) throw Error("usage: :solutions N|all");
            state_.max_solutions = n;
        }
    } else if (directive.name == "trace") {
        state_.trace = need_arg(":trace on|off") == "on";
    } else if (directive.name == "anchortrace") {
        state_.anchor_trace = need_arg(":anchortrace on|off") == "on";
    } else if (directive.name == "chain") {
        auto chained = env_.chain(state_.antecedent_persp);
        if (chained.hit_cap)
            throw EngineError("forward chaining stopped at the firing cap; frontier " +
                              chained.frontier);
        if (state_.trace) return render_firings(chained.firings);
    } else if (directive.name == "save") {
        save_kb(need_arg(":save FILE"));
    } else if (directive.name == "load") {
        load_kb(need_arg(":load FILE"));
    } else if (directive.name == "export-dot") {
        export_graph(need_arg(":export-dot FILE"));
    } else if (directive.name == "list") {
        return list_entities(need_arg(":list situations|relations|constraints|parameters"));
    } else if (directive.name == "quit") {
        result.quit = true;
    } else {
        throw Error("unknown directive :" + directive.name);
    }
    return "";
}

std::string Session::list_entities(const std::string& what) const {
    const Ontology& ontology = env_.ontology();
    std::string out;
    auto add = [&](const std::string& line) {
        if (!out.empty()) out += "\n";
        out += line;
    };
    if (what == "situations") {
        for (const auto& [id, s] : env_.store().situations()) add(id);
    } else if (what == "relations") {
        for (const auto& [name, relation] : ontology.relations())
            add(relation_decl_text(relation));
    } else if (what == "parameters") {
        for (const auto& [name, parameter] : ontology.parameters())
            add(parameter_decl_text(ontology, parameter));
    } else if (what == "constraints") {
        for (const auto& [group, constraints] : env_.constraints().groups())
            for (const Constraint& constraint : constraints)
                add(constraint_decl_text(ontology, constraint));
    } else {
        throw Error("usage: :list situations|relations|constraints|parameters");
    }
    return out;
}

std::string serialize_kb(const Environment& env) {
    const Ontology& ontology = env.ontology();
    std::ostringstream out;
    out << "; sitkernel knowledge base\n";

    for (const DeclRecord& record : ontology.declaration_log()) {
        switch (record.category) {
            case EntityCategory::Object:
                out << record.name << ": "
                    << ontology.find_object(record.name)->declared.display() << "\n";
                break;
            case EntityCategory::Relation:
                out << relation_decl_text(*ontology.find_relation(record.name)) << "\n";
                break;
            case EntityCategory::Parameter:
                out << parameter_decl_text(ontology, *ontology.find_parameter(record.name))
                    << "\n";
                break;
            case EntityCategory::Type:
                out << type_decl_text(ontology, *ontology.find_type(record.name)) << "\n";
                break;
            case EntityCategory::NamedInfon:
                out << record.name << " = "
                    << ontology.print_infon(*ontology.find_named_infon(record.name)) << "\n";
                break;
            case EntityCategory::Kind:
                break;
        }
    }

    auto emit_props = [&](const Situation& situation) {
        std::vector<Infon> infons;
        for (const StoredInfon& stored : situation.own)
            if (stored.user) infons.push_back(stored.infon);
        if (infons.empty()) return;
        out << situation.id << " |= " << infon_set_text(ontology, infons) << "\n";
    };
    emit_props(env.store().situation(Store::world));
    for (const auto& [id, situation] : env.store().situations())
        if (id != Store::world) emit_props(situation);

    for (const auto& [group, constraints] : env.constraints().groups()) {
        std::vector<const Constraint*> sorted;
        for (const Constraint& constraint : constraints) sorted.push_back(&constraint);
        std::sort(sorted.begin(), sorted.end(),
                  [](const Constraint* a, const Constraint* b) { return a->name < b->name; });
        for (const Constraint* constraint : sorted)
            out << constraint_decl_text(ontology, *constraint) << "\n";
    }
    return out.str();
}

std::string Session::save_kb_text() const { return serialize_kb(env_); }

void Session::save_kb(const std::string& path) const {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error("cannot open " + path + " for writing");
    file << save_kb_text();
    if (!file) throw Error("failed writing " + path);
}

void Session::load_kb_text(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    std::string pending;
    int line_no = 0;
    int start_line = 1;

    auto flush = [&]() {
        if (is_blank_statement(pending)) {
            pending.clear();
            return;
        }
        std::string statement_text = std::exchange(pending, std::string{});
        try {
            Statement statement = parse_statement(statement_text, false, start_line);
            if (std::holds_alternative<DirectiveStmt>(statement))
                throw Error("directives are not allowed in knowledge-base files");
            apply(statement);
        } catch (const ParseError& e) {
            throw Error(origin + ":" + std::to_string(e.line) + ": " + e.what());
        } catch (const Error& e) {
            throw Error(origin + ":" + std::to_string(start_line) + ": refused: " + e.what());
        }
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (pending.empty()) {
            pending = line;
            start_line = line_no;
        } else {
            pending += "\n" + line;
        }
        if (!needs_more_input(pending)) flush();
    }
    flush();
}

void Session::load_kb(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw Error("cannot open " + path);
    std::ostringstream contents;
    contents << file.rdbuf();
    load_kb_text(contents.str(), path);
}

std::string serialize_graph(const Environment& env) {
    std::ostringstream out;
    out << "digraph situations {\n";
    for (const auto& [id, situation] : env.store().situations())
        out << "  \"" << id << "\";\n";
    std::vector<std::pair<std::string, std::string>> edges = env.store().explicit_edges();
    for (const auto& [id, situation] : env.store().situations())
        if (id != Store::world && situation.parents.empty())
            edges.emplace_back(id, Store::world);
    std::sort(edges.begin(), edges.end());
    for (const auto& [child, parent] : edges)
        out << "  \"" << child << "\" -> \"" << parent << "\";\n";
    out << "}\n";
    return out.str();
}

std::string Session::export_graph_text() const { return serialize_graph(env_); }

void Session::export_graph(const std::string& path) const {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error("cannot open " + path + " for writing");
    file << export_graph_text();
    if (!file) throw Error("failed writing " + path);
}

}  // namespace sit
