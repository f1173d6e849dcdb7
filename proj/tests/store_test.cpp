#include <doctest.h>

#include <random>
#include <set>

#include "harness.hpp"
#include "sit/environment.hpp"
#include "sit/errors.hpp"

using namespace sit;

namespace {

// bob, cards, situations, and a couple of relations
std::unique_ptr<Environment> card_env() {
    auto envp = std::make_unique<Environment>();
    Environment& env = *envp;
    env.declare_object("Alice", KindRef(BasicKind::Ind));
    env.declare_object("AceH", KindRef(BasicKind::Ind));
    env.declare_object("bob", KindRef(BasicKind::Ind));
    env.declare_object("s", KindRef(BasicKind::Sit));
    env.declare_object("sit1", KindRef(BasicKind::Sit));
    env.declare_object("sit2", KindRef(BasicKind::Sit));
    env.declare_relation("has", {Role{{KindRef(BasicKind::Ind)}}, Role{{KindRef(BasicKind::Ind)}}},
                         2);
    env.declare_relation("blind", {Role{{KindRef(BasicKind::Ind)}}}, 1);
    env.declare_relation("sees", {Role{{KindRef(BasicKind::Ind)}}, Role{{KindRef(BasicKind::Sit)}}},
                         1);
    return envp;
}

Infon mk(Environment& env, const std::string& rel, const std::vector<std::string>& names,
         int pol) {
    std::vector<Term> terms;
    for (const std::string& n : names) terms.push_back(Term::entity(n));
    return env.ontology().make_infon(rel, terms, pol);
}

std::set<Infon> effective_set(const Environment& env, const std::string& sit) {
    std::set<Infon> out;
    for (const Infon* i : env.store().effective_infons(sit)) out.insert(*i);
    return out;
}

}  // namespace

TEST_CASE("fresh situations support exactly w's facts") {
    auto env_holder = card_env();
    Environment& env = *env_holder;
    CHECK(env.store().situation("s").own.empty());
    CHECK(effective_set(env, "s") == effective_set(env, Store::world));
    CHECK(effective_set(env, "s") == effective_set(env, "sit1"));
    CHECK_THROWS_AS(env.declare_object("s", KindRef(BasicKind::Sit)), NameError);
}

TEST_CASE("make-part-of is consumed and leaves a part-of fact in the parent") {
    auto env_holder = card_env();
    Environment& env = *env_holder;
    env.assert_proposition({"sit2", true,
                            {mk(env, "make-part-of", {"sit2", "sit1"}, 1),
                             mk(env, "blind", {"bob"}, 0)}});

    Infon part = mk(env, "part-of", {"sit2", "sit1"}, 1);
    CHECK(env.store().supports("sit1", part));
    // the instruction infon itself is not stored
    for (const StoredInfon& stored : env.store().situation("sit2").own)
        CHECK(stored.infon.relation != "make-part-of");
    // the parent supports everything the part supports
    CHECK(env.store().supports("sit1", mk(env, "blind", {"bob"}, 0)));
    CHECK(effective_set(env, "sit1").count(mk(env, "blind", {"bob"}, 0)) == 1);
}

TEST_CASE("the card-game contradiction is refused atomically") {
    auto env_holder = card_env();
    Environment& env = *env_holder;
    env.assert_proposition({"s", true, {mk(env, "has", {"Alice", "AceH"}, 1)}});

    auto before = env.store().situation("s").own;
    CHECK_THROWS_AS(
        env.assert_proposition({"s", true, {mk(env, "has", {"Alice", "AceH"}, 0)}}),
        CoherenceError);
    CHECK(env.store().situation("s").own == before);

    // multi-infon propositions are refused as a whole
    auto w_before = env.store().situation(Store::world).own;
    CHECK_THROWS_AS(env.assert_proposition(
                        {"s", true,
                         {mk(env, "blind", {"bob"}, 1), mk(env, "has", {"Alice", "AceH"}, 0)}}),
                    CoherenceError);
    CHECK(env.store().situation("s").own == before);
    CHECK(env.store().situation(Store::world).own == w_before);
    CHECK_FALSE(env.store().supports("s", mk(env, "blind", {"bob"}, 1)));

    // the same conflict introduced via a part-of child is also refused
    env.assert_proposition({"sit1", true, {mk(env, "part-of", {"sit2", "sit1"}, 1)}});
    env.assert_proposition({"sit1", true, {mk(env, "has", {"Alice", "AceH"}, 1)}});
    CHECK_THROWS_AS(
        env.assert_proposition({"sit2", true, {mk(env, "has", {"Alice", "AceH"}, 0)}}),
        CoherenceError);
    CHECK(env.audit_incoherence() == std::nullopt);
}

TEST_CASE("negated propositions are rejected outright") {
    auto env_holder = card_env();
    Environment& env = *env_holder;
    CHECK_THROWS_AS(
        env.assert_proposition({"s", false, {mk(env, "blind", {"bob"}, 1)}}),
        ValidationError);
    CHECK_THROWS_AS(env.assert_proposition({"s", true, {}}), ValidationError);
}

TEST_CASE("part-of is reflexive, transitive, and cycle-free") {
    auto env_holder = card_env();
    Environment& env = *env_holder;
    for (const auto& [id, s] : env.store().situations()) CHECK(env.store().part_of(id, id));

    env.store().make_part_of("s", "sit2");
    env.store().make_part_of("sit2", "sit1");
    CHECK(env.store().part_of("s", "sit1"));
    // derived transitive fact, on demand
    CHECK(env.store().supports("sit1", mk(env, "part-of", {"s", "sit1"}, 1)));
    CHECK(env.store().supports("sit1", mk(env, "part-of", {"sit1", "sit1"}, 1)));

    // monotone inheritance along the chain
    env.assert_proposition({"s", true, {mk(env, "blind", {"bob"}, 1)}});
    CHECK(env.store().supports("sit2", mk(env, "blind", {"bob"}, 1)));
    CHECK(env.store().supports("sit1", mk(env, "blind", {"bob"}, 1)));

    CHECK_THROWS_AS(env.store().make_part_of("sit1", "s"), HierarchyError);
    // nothing may contain w
    CHECK_THROWS_AS(env.store().make_part_of("sit1", Store::world), HierarchyError);
    // denying a part-of fact that holds is incoherent
    CHECK_THROWS_AS(
        env.assert_proposition({"sit1", true, {mk(env, "part-of", {"s", "sit1"}, 0)}}),
        CoherenceError);
}

TEST_CASE("w is part of every situation") {
    auto env_holder = card_env();
    Environment& env = *env_holder;
    env.assert_proposition({Store::world, true, {mk(env, "sees", {"bob", "sit1"}, 1)}});
    for (const auto& [id, s] : env.store().situations()) {
        CHECK(env.store().part_of(Store::world, id));
        for (const Infon* fact : env.store().effective_infons(Store::world))
            CHECK(env.store().supports(id, *fact));
    }
    // and w's effective set is exactly its own set
    CHECK(effective_set(env, Store::world).size() ==
          env.store().situation(Store::world).own.size());
}

TEST_CASE("support distinguishes polarities and absence") {
    auto env_holder = card_env();
    Environment& env = *env_holder;
    env.assert_proposition({"sit1", true, {mk(env, "blind", {"bob"}, 0)}});
    CHECK(env.store().supports("sit1", mk(env, "blind", {"bob"}, 0)));
    CHECK_FALSE(env.store().supports("sit1", mk(env, "blind", {"bob"}, 1)));
    // silence: a fresh situation supports neither polarity
    CHECK_FALSE(env.store().supports("sit2", mk(env, "blind", {"bob"}, 0)));
    CHECK_FALSE(env.store().supports("sit2", mk(env, "blind", {"bob"}, 1)));
}

TEST_CASE("anchors are unique, kind-checked, and restriction-checked") {
    auto env_holder = card_env();
    Environment& env = *env_holder;
    env.declare_object("a1", KindRef(BasicKind::Sit));
    env.declare_object("a2", KindRef(BasicKind::Sit));
    env.declare_object("a3", KindRef(BasicKind::Sit));
    env.declare_object("carol", KindRef(BasicKind::Ind));
    env.declare_parameter("E", "IND1",
                          {mk(env, "sees", {"IND1", "sit1"}, 1)});

    // restriction not yet supported by w
    try {
        env.store().register_anchor("a1", "E", "bob");
        FAIL("expected AnchorError");
    } catch (const AnchorError& e) {
        CHECK(e.reason == AnchorError::Reason::RestrictionUnsatisfied);
    }

    env.assert_proposition({Store::world, true, {mk(env, "sees", {"bob", "sit1"}, 1)}});
    env.store().register_anchor("a1", "E", "bob");
    CHECK(env.store().supports("a1", mk(env, "anchor", {"E", "bob"}, 1)));

    // re-asserting the same anchor fact is idempotent
    env.store().register_anchor("a1", "E", "bob");

    try {
        env.store().register_anchor("a1", "E", "carol");
        FAIL("expected AnchorError");
    } catch (const AnchorError& e) {
        CHECK(e.reason == AnchorError::Reason::Duplicate);
    }

    try {
        env.store().register_anchor("a2", "E", "sit1");
        FAIL("expected AnchorError");
    } catch (const AnchorError& e) {
        CHECK(e.reason == AnchorError::Reason::KindMismatch);
    }

    // several parameters may share one anchor
    env.declare_parameter("F", "IND1", {});
    env.store().register_anchor("a1", "F", "bob");
    CHECK(env.store().anchor_map("a1").size() == 2);
}

TEST_CASE("apply_anchoring replaces anchored parameters, once") {
    auto env_holder = card_env();
    Environment& env = *env_holder;
    env.declare_object("a1", KindRef(BasicKind::Sit));
    env.declare_parameter("E", "IND1", {});
    env.declare_parameter("F", "IND1", {});
    env.store().register_anchor("a1", "E", "bob");

    Infon parametric = mk(env, "sees", {"E", "sit2"}, 1);
    Infon anchored = env.store().apply_anchoring(parametric, "a1");
    CHECK(anchored == mk(env, "sees", {"bob", "sit2"}, 1));

    // unanchored parameters stay; an empty anchoring situation is identity
    Infon with_f = mk(env, "sees", {"F", "sit2"}, 1);
    CHECK(env.store().apply_anchoring(with_f, "a1") == with_f);
    CHECK(env.store().apply_anchoring(parametric, "sit1") == parametric);

    // idempotent for object-valued anchors
    CHECK(env.store().apply_anchoring(anchored, "a1") == anchored);
}

TEST_CASE("assertion-time anchoring substitutes before storing") {
    auto env_holder = card_env();
    Environment& env = *env_holder;
    env.declare_relation("man", {Role{{KindRef(BasicKind::Ind)}}}, 1);
    env.declare_object("anchor1", KindRef(BasicKind::Sit));
    env.declare_parameter("E", "IND1", {});
    env.store().register_anchor("anchor1", "E", "bob");

    env.assert_proposition({"sit1", true, {mk(env, "man", {"E"}, 1)}}, "anchor1");
    CHECK(env.store().supports("sit1", mk(env, "man", {"bob"}, 1)));
    CHECK_FALSE(env.store().supports("sit1", mk(env, "man", {"E"}, 1)));
}

TEST_CASE("situations can be located in time and place at most once") {
    auto env_holder = card_env();
    Environment& env = *env_holder;
    env.declare_object("t1", KindRef(BasicKind::Tim));
    env.declare_object("t9", KindRef(BasicKind::Tim));
    env.declare_object("here", KindRef(BasicKind::Loc));

    env.assert_proposition({"sit1", true, {mk(env, "time-of", {"sit1", "t1"}, 1)}});
    CHECK(env.store().situation("sit1").time == "t1");
    // identical re-assertion is fine, a second time is not
    env.assert_proposition({"sit1", true, {mk(env, "time-of", {"sit1", "t1"}, 1)}});
    CHECK_THROWS_AS(
        env.assert_proposition({"sit1", true, {mk(env, "time-of", {"sit1", "t9"}, 1)}}),
        ValidationError);

    env.assert_proposition({"sit1", true, {mk(env, "place-of", {"sit1", "here"}, 1)}});
    CHECK(env.store().situation("sit1").place == "here");
}

TEST_CASE("of-type assertions must agree with declarations") {
    auto env_holder = card_env();
    Environment& env = *env_holder;
    CHECK_THROWS_AS(
        env.assert_proposition(
            {Store::world, true,
             {env.ontology().make_infon("of-type", {Term::entity("bob"), Term::entity("SIT")},
                                        1)}}),
        ValidationError);
    CHECK_THROWS_AS(
        env.assert_proposition(
            {Store::world, true,
             {env.ontology().make_infon("of-type", {Term::entity("bob"), Term::entity("IND")},
                                        0)}}),
        ValidationError);
    // re-asserting the declared kind is idempotent
    env.assert_proposition(
        {Store::world, true,
         {env.ontology().make_infon("of-type", {Term::entity("bob"), Term::entity("IND")}, 1)}});
}

TEST_CASE("self-referential infons are stored by id and terminate") {
    auto env_holder = card_env();
    Environment& env = *env_holder;
    Infon circular = mk(env, "sees", {"bob", "sit1"}, 1);
    env.assert_proposition({"sit1", true, {circular}});
    CHECK(env.store().supports("sit1", circular));
    CHECK(env.audit_incoherence() == std::nullopt);
}

TEST_CASE("random hierarchies match the naive traversal oracle") {
    std::mt19937 rng(23);
    for (int round = 0; round < 60; ++round) {
        auto rs = harness::make_random_store(rng);
        for (int s = 0; s < rs.model.n_sits; ++s)
            CHECK(harness::impl_effective(rs.env(), s) ==
                  harness::model_effective(rs.model, s));
        CHECK(rs.env().audit_incoherence() == std::nullopt);
    }
}

TEST_CASE("a hierarchy edit cannot sneak past a stored part-of denial") {
    auto env_holder = card_env();
    Environment& env = *env_holder;
    // sit1 denies that s is part of it; wiring s in later must be refused
    env.assert_proposition({"sit1", true, {mk(env, "part-of", {"s", "sit1"}, 0)}});
    CHECK_THROWS_AS(env.store().make_part_of("s", "sit1"), CoherenceError);
    // even transitively
    env.store().make_part_of("s", "sit2");
    CHECK_THROWS_AS(env.store().make_part_of("sit2", "sit1"), CoherenceError);
    CHECK(env.audit_incoherence() == std::nullopt);
}
