#include <doctest.h>

#include <random>
#include <thread>

#include "harness.hpp"
#include "sit/environment.hpp"
#include "sit/errors.hpp"
#include "sit/session.hpp"

using namespace sit;

TEST_CASE("part-of laws hold on random hierarchies") {
    std::mt19937 rng(101);
    for (int round = 0; round < 50; ++round) {
        auto rs = harness::make_random_store(rng);
        const Store& store = rs.env().store();

        // reflexivity
        for (const auto& [id, s] : store.situations()) CHECK(store.part_of(id, id));

        // transitivity of the predicate and of derived facts
        for (const auto& [a, sa] : store.situations())
            for (const auto& [b, sb] : store.situations())
                for (const auto& [c, sc] : store.situations())
                    if (store.part_of(a, b) && store.part_of(b, c)) {
                        CHECK(store.part_of(a, c));
                        Infon derived{"part-of", {Term::entity(a), Term::entity(c)}, 1};
                        CHECK(store.supports(c, derived));
                    }

        // monotone inheritance
        for (int child = 0; child < rs.model.n_sits; ++child)
            for (int parent = 0; parent < rs.model.n_sits; ++parent)
                if (store.part_of(harness::sit_name(child), harness::sit_name(parent))) {
                    auto lower = harness::impl_effective(rs.env(), child);
                    auto upper = harness::impl_effective(rs.env(), parent);
                    for (const std::string& fact : lower) CHECK(upper.count(fact) == 1);
                }

        // cycle refusal on a random back edge
        for (int child = 0; child < rs.model.n_sits; ++child)
            for (int parent = 0; parent < rs.model.n_sits; ++parent)
                if (child != parent &&
                    store.part_of(harness::sit_name(child), harness::sit_name(parent)))
                    CHECK_THROWS_AS(rs.env().store().make_part_of(harness::sit_name(parent),
                                                                 harness::sit_name(child)),
                                    HierarchyError);
    }
}

TEST_CASE("every reachable state is coherent, including under chaining") {
    std::mt19937 rng(103);
    for (int round = 0; round < 30; ++round) {
        auto rs = harness::make_random_store(rng, 6, 5, 4, 30, true);
        CHECK(rs.env().audit_incoherence() == std::nullopt);
        CHECK(rs.env().audit_no_stored_variables());
    }
    for (int round = 0; round < 15; ++round) {
        auto kb = harness::make_random_kb(rng);
        kb.base.env().chain();
        CHECK(kb.base.env().audit_incoherence() == std::nullopt);
        CHECK(kb.base.env().audit_no_stored_variables());
    }
}

TEST_CASE("forward fixpoints match a restart-from-scratch oracle") {
    std::mt19937 rng(107);
    for (int round = 0; round < 25; ++round) {
        auto kb = harness::make_random_kb(rng);
        auto result = kb.base.env().chain();
        CHECK_FALSE(result.hit_cap);
        auto oracle = harness::oracle_fixpoint(kb);
        for (int s = 0; s < kb.base.model.n_sits; ++s)
            CHECK(harness::impl_effective(kb.base.env(), s) ==
                  oracle[static_cast<std::size_t>(s)]);

        // running the chain again performs nothing
        CHECK(kb.base.env().chain().performed.empty());
    }
}

TEST_CASE("on bidirectional KBs backward proving equals the forward fixpoint") {
    std::mt19937 rng(109);
    for (int round = 0; round < 10; ++round) {
        auto kb = harness::make_random_kb(rng, /*all_bidirectional=*/true);
        kb.base.env().config().depth_limit = 64;

        auto oracle = harness::oracle_fixpoint(kb);

        // prove every candidate ground fact before any chaining
        ProofOptions opts;
        opts.perspectivity = "G";
        opts.depth = 64;
        for (int s = 0; s < kb.base.model.n_sits; ++s) {
            for (int r = 0; r < kb.base.n_rels; ++r) {
                std::vector<std::vector<int>> tuples;
                if (kb.base.arity[r] == 1) {
                    for (int x = 0; x < kb.base.model.n_objs; ++x) tuples.push_back({x});
                } else {
                    for (int x = 0; x < kb.base.model.n_objs; ++x)
                        for (int y = 0; y < kb.base.model.n_objs; ++y) tuples.push_back({x, y});
                }
                for (const auto& tuple : tuples) {
                    std::vector<Term> terms;
                    for (int t : tuple)
                        terms.push_back(Term::entity(harness::obj_name(t)));
                    Infon goal =
                        kb.base.env().ontology().make_infon(harness::rel_name(r), terms, 1);
                    bool provable =
                        kb.base.env().engine().proves(harness::sit_name(s), goal, opts);
                    bool in_fixpoint = oracle[static_cast<std::size_t>(s)].count(
                                           harness::render_fact(r, tuple, 1)) != 0;
                    CHECK(provable == in_fixpoint);
                }
            }
        }
    }
}

TEST_CASE("anchoring application is idempotent on generated expressions") {
    std::mt19937 rng(113);
    Environment env;
    env.declare_object("s", KindRef(BasicKind::Sit));
    env.declare_object("a1", KindRef(BasicKind::Sit));
    env.declare_relation("r", {Role{{KindRef(BasicKind::Ind)}}, Role{{KindRef(BasicKind::Ind)}}},
                         1);
    std::vector<std::string> objects;
    for (int i = 0; i < 4; ++i) {
        objects.push_back("o" + std::to_string(i));
        env.declare_object(objects.back(), KindRef(BasicKind::Ind));
    }
    std::vector<std::string> params;
    for (int i = 0; i < 4; ++i) {
        params.push_back("P" + std::to_string(i));
        env.declare_parameter(params.back(), "IND1", {});
    }
    // anchor half of the parameters to objects
    env.store().register_anchor("a1", "P0", "o0");
    env.store().register_anchor("a1", "P1", "o1");

    auto pick = [&](int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(rng);
    };
    for (int i = 0; i < 500; ++i) {
        std::vector<Term> args;
        for (int k = 0; k < 2; ++k) {
            if (pick(0, 1) == 0)
                args.push_back(Term::entity(objects[static_cast<std::size_t>(pick(0, 3))]));
            else
                args.push_back(Term::entity(params[static_cast<std::size_t>(pick(0, 3))]));
        }
        Infon infon = env.ontology().make_infon("r", args, pick(0, 1));
        Infon once = env.store().apply_anchoring(infon, "a1");
        CHECK(env.store().apply_anchoring(once, "a1") == once);
    }
}

TEST_CASE("persistence is a serialization fixpoint on random stores") {
    std::mt19937 rng(127);
    for (int round = 0; round < 8; ++round) {
        auto rs = harness::make_random_store(rng);
        std::string first = serialize_kb(rs.env());
        Session session;
        session.load_kb_text(first, "kb");
        CHECK(session.save_kb_text() == first);
    }
}

TEST_CASE("concurrent read-only queries see one consistent snapshot") {
    Session session;
    harness::replay_demo_setup(session);
    const Environment& env = session.env();

    QueryOptions opts;
    opts.anchoring = "anchor1";
    std::vector<ConstraintAtom> atoms{
        {Term::var("S"), true,
         env.ontology().make_infon("sees", {Term::entity("E"), Term::var("Y")}, 1, true)}};

    QueryResult reference = env.query(atoms, opts);
    std::vector<std::size_t> counts(8, 0);
    std::vector<std::thread> workers;
    for (std::size_t t = 0; t < counts.size(); ++t)
        workers.emplace_back([&, t] {
            for (int i = 0; i < 25; ++i) {
                QueryResult r = env.query(atoms, opts);
                if (r.solutions.size() == reference.solutions.size()) ++counts[t];
            }
        });
    for (std::thread& worker : workers) worker.join();
    for (std::size_t c : counts) CHECK(c == 25);
}
