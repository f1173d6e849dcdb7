#include <doctest.h>

#include <random>

#include "harness.hpp"
#include "sit/environment.hpp"
#include "sit/errors.hpp"

using namespace sit;

namespace {

std::unique_ptr<Environment> make_env() {
    auto env = std::make_unique<Environment>();
    env->declare_object("bob", KindRef(BasicKind::Ind));
    env->declare_object("sit1", KindRef(BasicKind::Sit));
    env->declare_relation(
        "sees", {Role{{KindRef(BasicKind::Ind)}}, Role{{KindRef(BasicKind::Sit)}}}, 1);
    return env;
}

}  // namespace

TEST_CASE("nine primitives and the kind of kinds") {
    Environment env;
    for (BasicKind k : all_basic_kinds) {
        CHECK(env.ontology().exists(std::string(kind_name(k))));
        CHECK(env.ontology().kind_of(std::string(kind_name(k))) == BasicKind::Typ);
    }
    // the type of all types is ~TYP, recorded as a fact in w
    Infon typ_fact =
        env.ontology().make_infon("of-type", {Term::entity("TYP"), Term::entity("TYP")}, 1);
    CHECK(env.store().supports(Store::world, typ_fact));
    Infon loc_fact =
        env.ontology().make_infon("of-type", {Term::entity("LOC"), Term::entity("TYP")}, 1);
    CHECK(env.store().supports(Store::world, loc_fact));
}

TEST_CASE("object declaration records the typing fact in w") {
    Environment env;
    env.declare_object("bob", KindRef(BasicKind::Ind));
    Infon fact =
        env.ontology().make_infon("of-type", {Term::entity("bob"), Term::entity("IND")}, 1);
    CHECK(env.store().supports(Store::world, fact));

    CHECK_THROWS_AS(env.declare_object("bob", KindRef(BasicKind::Ind)), NameError);
    CHECK_THROWS_AS(env.declare_object("x", KindRef("NO-SUCH-TYPE")), NameError);
}

TEST_CASE("relation declaration validates minimality and roles") {
    Environment env;
    auto& sees = env.declare_relation(
        "sees", {Role{{KindRef(BasicKind::Ind)}}, Role{{KindRef(BasicKind::Sit)}}}, 1);
    CHECK(sees.arity() == 2);
    CHECK(sees.minimality == 1);

    CHECK_THROWS_AS(env.declare_relation("r", {Role{{KindRef(BasicKind::Ind)}}}, 2),
                    ValidationError);
    CHECK_THROWS_AS(env.declare_relation("r2", {}, 1), ValidationError);
    CHECK_THROWS_AS(env.declare_relation("r3", {Role{}}, 1), ValidationError);

    // the built-in anchor relation admits any kind in its second role
    const Relation* anchor = env.ontology().find_relation("anchor");
    REQUIRE(anchor != nullptr);
    CHECK(anchor->minimality == 2);
    CHECK(anchor->roles[1].admitted.size() == all_basic_kinds.size());
}

TEST_CASE("make_infon pads with the null object and keeps minimality") {
    auto env_holder = make_env();
    Environment& env = *env_holder;
    Infon unsat = env.ontology().make_infon("sees", {Term::entity("bob")}, 1);
    CHECK(unsat.args.size() == 2);
    CHECK(unsat.args[1].is_null());
    CHECK_FALSE(unsat.saturated());

    // explicit null padding yields the same infon
    Infon padded =
        env.ontology().make_infon("sees", {Term::entity("bob"), Term::null()}, 1);
    CHECK(unsat == padded);

    // normalization is idempotent
    Infon again = env.ontology().make_infon("sees", unsat.args, unsat.polarity);
    CHECK(again == unsat);

    Infon sat =
        env.ontology().make_infon("sees", {Term::entity("bob"), Term::entity("sit1")}, 1);
    CHECK(sat.saturated());

    CHECK_THROWS_AS(env.ontology().make_infon("sees", {}, 1), ValidationError);
    CHECK_THROWS_AS(
        env.ontology().make_infon("sees", {Term::entity("sit1"), Term::entity("bob")}, 1),
        ValidationError);
    CHECK_THROWS_AS(env.ontology().make_infon("nope", {Term::entity("bob")}, 1),
                    ValidationError);
    CHECK_THROWS_AS(env.ontology().make_infon(
                        "sees", {Term::entity("bob"), Term::entity("sit1"), Term::entity("bob")},
                        1),
                    ValidationError);
    CHECK_THROWS_AS(env.ontology().make_infon("sees", {Term::entity("bob")}, 2),
                    ValidationError);
    CHECK_THROWS_AS(env.ontology().make_infon("sees", {Term::var("X")}, 1), ValidationError);
}

TEST_CASE("parameters substitute their base and accumulate restrictions") {
    auto env_holder = make_env();
    Environment& env = *env_holder;
    env.declare_relation("happy", {Role{{KindRef(BasicKind::Ind)}}}, 1);

    Infon restriction = env.ontology().make_infon(
        "sees", {Term::entity("IND1"), Term::entity("sit1")}, 1);
    const Parameter& e = env.declare_parameter("E", "IND1", {restriction});
    CHECK(e.base == BasicKind::Ind);
    Infon expected =
        env.ontology().make_infon("sees", {Term::entity("E"), Term::entity("sit1")}, 1);
    CHECK(e.restrictions.count(expected) == 1);
    CHECK(env.ontology().kind_of("E") == BasicKind::Par);

    // restriction chaining: oracle is the union of substitution closures
    Infon happy_e = env.ontology().make_infon("happy", {Term::entity("E")}, 1);
    const Parameter& q = env.declare_parameter("Q", "E", {happy_e});
    std::set<Infon> expected_q{
        env.ontology().make_infon("sees", {Term::entity("Q"), Term::entity("sit1")}, 1),
        env.ontology().make_infon("happy", {Term::entity("Q")}, 1)};
    CHECK(q.restrictions == expected_q);

    // unrestricted parameter from a primitive base
    const Parameter& p = env.declare_parameter("P", "~SIT", {});
    CHECK(p.base == BasicKind::Sit);
    CHECK(p.restrictions.empty());

    CHECK_THROWS_AS(env.declare_parameter("Z", "bob", {}), NameError);
    Infon bad{"no-such-relation", {Term::entity("IND1")}, 1};
    CHECK_THROWS_AS(env.declare_parameter("Z", "IND1", {bad}), ValidationError);
    CHECK_FALSE(env.ontology().exists("Z"));
}

TEST_CASE("type abstraction membership equals direct evaluation") {
    auto env_holder = make_env();
    Environment& env = *env_holder;
    Infon cond = env.ontology().make_infon(
        "sees", {Term::entity("bob"), Term::entity("SIT1")}, 1);
    env.define_type_abstraction("SITALL", "SIT1", Store::world, {cond});

    CHECK_FALSE(env.ontology().of_type("sit1", "SITALL"));
    env.assert_proposition({Store::world, true,
                            {env.ontology().make_infon(
                                "sees", {Term::entity("bob"), Term::entity("sit1")}, 1)}});
    CHECK(env.ontology().of_type("sit1", "SITALL"));

    // brute-force oracle: substitute and evaluate support directly
    for (const auto& [id, s] : env.store().situations()) {
        Infon probe = Ontology::substitute(cond, "SIT1", Term::entity(id));
        bool direct = env.store().supports(Store::world, probe);
        CHECK(env.ontology().of_type(id, "SITALL") == direct);
    }

    // kind filter precedes the condition check
    CHECK_FALSE(env.ontology().of_type("bob", "SITALL"));

    // an object declared with the parametric type holds by construction
    env.declare_object("obj2", KindRef("SITALL"));
    CHECK(env.ontology().find_object("obj2")->basic == BasicKind::Sit);
    Infon by_construction = env.ontology().make_infon(
        "sees", {Term::entity("bob"), Term::entity("obj2")}, 1);
    CHECK(env.store().supports(Store::world, by_construction));
    CHECK(env.ontology().of_type("obj2", "SITALL"));
    CHECK(env.store().has_situation("obj2"));

    Infon no_param = env.ontology().make_infon(
        "sees", {Term::entity("bob"), Term::entity("sit1")}, 1);
    CHECK_THROWS_AS(env.define_type_abstraction("BAD", "SIT1", Store::world, {no_param}),
                    ValidationError);
    CHECK_THROWS_AS(env.define_type_abstraction("BAD2", "SIT1", "nowhere", {cond}), NameError);
}

TEST_CASE("dual flips polarity and nothing else") {
    auto env_holder = make_env();
    Environment& env = *env_holder;
    Infon sees =
        env.ontology().make_infon("sees", {Term::entity("bob"), Term::entity("sit1")}, 1);
    CHECK(dual(sees).polarity == 0);
    CHECK(dual(dual(sees)) == sees);

    std::mt19937 rng(7);
    for (int i = 0; i < 50; ++i) {
        auto rs = harness::make_random_store(rng, 3, 4, 3, 6, true);
        for (const auto& [id, s] : rs.env().store().situations()) {
            for (const StoredInfon& stored : s.own) {
                Infon d = dual(stored.infon);
                CHECK(d.relation == stored.infon.relation);
                CHECK(d.args == stored.infon.args);
                CHECK(d.polarity == 1 - stored.infon.polarity);
                CHECK(dual(d) == stored.infon);
            }
        }
    }
}

TEST_CASE("named infons resolve wherever infons are accepted") {
    auto env_holder = make_env();
    Environment& env = *env_holder;
    Infon sees =
        env.ontology().make_infon("sees", {Term::entity("bob"), Term::entity("sit1")}, 1);
    env.name_infon("infon1", sees);
    CHECK(*env.ontology().find_named_infon("infon1") == sees);
    CHECK(env.ontology().kind_of("infon1") == BasicKind::Inf);

    // a second name for the same infon resolves to an equal infon
    env.name_infon("infon2", *env.ontology().find_named_infon("infon1"));
    CHECK(*env.ontology().find_named_infon("infon2") ==
          *env.ontology().find_named_infon("infon1"));

    CHECK_THROWS_AS(env.name_infon("infon1", sees), NameError);
    CHECK(env.ontology().find_named_infon("missing") == nullptr);
}

TEST_CASE("the kind assignment is total") {
    auto env_holder = make_env();
    Environment& env = *env_holder;
    env.declare_parameter("E", "IND1", {});
    env.define_type_abstraction(
        "SITALL", "SIT1", Store::world,
        {env.ontology().make_infon("sees", {Term::entity("bob"), Term::entity("SIT1")}, 1)});
    env.name_infon("infon1", env.ontology().make_infon("sees", {Term::entity("bob")}, 1));

    CHECK(env.ontology().kind_of("bob") == BasicKind::Ind);
    CHECK(env.ontology().kind_of("sit1") == BasicKind::Sit);
    CHECK(env.ontology().kind_of("sees") == BasicKind::Rel);
    CHECK(env.ontology().kind_of("E") == BasicKind::Par);
    CHECK(env.ontology().kind_of("SITALL") == BasicKind::Typ);
    CHECK(env.ontology().kind_of("infon1") == BasicKind::Inf);
    CHECK(env.ontology().kind_of("IND") == BasicKind::Typ);
    CHECK(env.ontology().kind_of("w") == BasicKind::Sit);
}

TEST_CASE("appropriateness holds for every stored infon") {
    std::mt19937 rng(11);
    for (int i = 0; i < 25; ++i) {
        auto rs = harness::make_random_store(rng);
        CHECK(rs.env().audit_appropriateness());
    }
}

TEST_CASE("restrictions may mention other parameters; satisfaction waits") {
    auto env_holder = make_env();
    Environment& env = *env_holder;
    env.declare_object("a1", KindRef(BasicKind::Sit));
    env.declare_parameter("P", "SIT1", {});
    // E may only see whatever P stands for; well-formed, undecided for now
    Infon restriction =
        env.ontology().make_infon("sees", {Term::entity("IND1"), Term::entity("P")}, 1);
    const Parameter& e = env.declare_parameter("E2", "IND1", {restriction});
    CHECK(e.restrictions.size() == 1);

    // anchoring fails unless the still-parametric restriction is literally in w
    env.declare_object("carol", KindRef(BasicKind::Ind));
    CHECK_THROWS_AS(env.store().register_anchor("a1", "E2", "carol"), AnchorError);
    env.assert_proposition(
        {Store::world, true,
         {env.ontology().make_infon("sees", {Term::entity("carol"), Term::entity("P")}, 1)}});
    env.store().register_anchor("a1", "E2", "carol");
}
