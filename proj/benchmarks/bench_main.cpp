#include <benchmark/benchmark.h>

#include <memory>
#include <string>

#include "sit/environment.hpp"
#include "sit/parser.hpp"
#include "sit/session.hpp"

using namespace sit;

namespace {

std::string obj(int i) { return "o" + std::to_string(i); }
std::string sit_id(int i) { return "s" + std::to_string(i); }

// N objects in a next-chain plus the reach rules, facts not yet chained.
std::unique_ptr<Environment> chain_env(int n) {
    auto env = std::make_unique<Environment>();
    env->declare_object("s", KindRef(BasicKind::Sit));
    env->declare_relation("next",
                          {Role{{KindRef(BasicKind::Ind)}}, Role{{KindRef(BasicKind::Ind)}}}, 2);
    env->declare_relation("reach", {Role{{KindRef(BasicKind::Ind)}}}, 1);
    for (int i = 0; i <= n; ++i) env->declare_object(obj(i), KindRef(BasicKind::Ind));

    Constraint step;
    step.group = "G";
    step.name = "STEP";
    step.direction = Direction::Backward;
    step.antecedents = {
        {Term::var("S"), true,
         env->ontology().make_infon("next", {Term::var("Y"), Term::var("X")}, 1, true)},
        {Term::var("S"), true,
         env->ontology().make_infon("reach", {Term::var("Y")}, 1, true)}};
    step.consequents = {{Term::var("S"), true,
                         env->ontology().make_infon("reach", {Term::var("X")}, 1, true)}};
    env->define_constraint(step);

    env->assert_proposition(
        {"s", true, {env->ontology().make_infon("reach", {Term::entity(obj(0))}, 1)}});
    for (int i = 0; i < n; ++i)
        env->assert_proposition(
            {"s", true,
             {env->ontology().make_infon(
                 "next", {Term::entity(obj(i)), Term::entity(obj(i + 1))}, 1)}});
    return env;
}

void BM_backward_chain_proof(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    auto env = chain_env(n);
    env->config().depth_limit = n + 2;
    ProofOptions opts;
    opts.perspectivity = "G";
    opts.depth = n + 2;
    Infon goal = env->ontology().make_infon("reach", {Term::entity(obj(n))}, 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(env->engine().proves("s", goal, opts));
}
BENCHMARK(BM_backward_chain_proof)->Arg(8)->Arg(32)->Arg(64);

void BM_forward_chain_fixpoint(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        state.PauseTiming();
        auto env = chain_env(n);
        // flip the rule to forward so the chain materializes
        Constraint fwd = *env->constraints().find("G", "STEP");
        fwd.name = "STEP-FWD";
        fwd.direction = Direction::Forward;
        env->define_constraint(fwd);
        state.ResumeTiming();
        benchmark::DoNotOptimize(env->chain().performed.size());
    }
}
BENCHMARK(BM_forward_chain_fixpoint)->Arg(8)->Arg(32);

void BM_effective_set(benchmark::State& state) {
    int sits = static_cast<int>(state.range(0));
    Environment env;
    env.declare_relation("p", {Role{{KindRef(BasicKind::Ind)}}}, 1);
    for (int i = 0; i < sits; ++i) {
        env.declare_object(obj(i), KindRef(BasicKind::Ind));
        env.declare_object(sit_id(i), KindRef(BasicKind::Sit));
        if (i > 0) env.store().make_part_of(sit_id(i - 1), sit_id(i));
        env.assert_proposition(
            {sit_id(i), true, {env.ontology().make_infon("p", {Term::entity(obj(i))}, 1)}});
    }
    const std::string top = sit_id(sits - 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(env.store().effective_infons(top).size());
}
BENCHMARK(BM_effective_set)->Arg(8)->Arg(64);

void BM_parse_statement(benchmark::State& state) {
    const std::string text =
        "NL: FB: ?S1 |= <<block, ?X, 1>>, ?S1 |= <<supported, ?X, 0>> => "
        "?S1 |= <<falls, ?X, 1>> UNDER-CONDITIONS: w: <<exists, gravity, 1>>";
    for (auto _ : state) benchmark::DoNotOptimize(parse_statement(text));
}
BENCHMARK(BM_parse_statement);

void BM_kb_roundtrip(benchmark::State& state) {
    Session seed;
    seed.repl_step("x: ~IND");
    seed.repl_step("<p | ~IND> [1]");
    for (int i = 0; i < 16; ++i) {
        seed.repl_step(sit_id(i) + ": ~SIT");
        seed.repl_step(sit_id(i) + " |= <<p, x, 1>>");
    }
    const std::string text = seed.save_kb_text();
    for (auto _ : state) {
        Session session;
        session.load_kb_text(text, "bench");
        benchmark::DoNotOptimize(session.save_kb_text().size());
    }
}
BENCHMARK(BM_kb_roundtrip);

}  // namespace

BENCHMARK_MAIN();
