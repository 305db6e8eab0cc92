#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "common.hpp"
#include "its.hpp"

using namespace rhobound;
using rhobound::testing::leading_example;
using rhobound::testing::Rng;

TEST_CASE("constraint evaluation") {
  Program prog = leading_example();
  // t1 guard is x > 0, stored as 0 < x.
  const Transition &t1 = prog.transitions[1];
  State s{{BigInt(0), BigInt(2), BigInt(0)}};
  CHECK(constraint_eval(t1.guard, s));
  State z{{BigInt(0), BigInt(0), BigInt(0)}};
  CHECK(!constraint_eval(t1.guard, z));

  Constraint empty;
  CHECK(constraint_eval(empty, s));

  // x < y && y < x is unsatisfiable.
  Constraint contra;
  contra.atoms.push_back({Polynomial::variable(1), Polynomial::variable(2)});
  contra.atoms.push_back({Polynomial::variable(2), Polynomial::variable(1)});
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    State st{{BigInt(rng.range(-9, 9)), BigInt(rng.range(-9, 9)), BigInt(rng.range(-9, 9))}};
    CHECK(!constraint_eval(contra, st));
  }
}

TEST_CASE("funs and trans_of on the leading example") {
  Program prog = leading_example();
  // funs(t1) = {rho1}
  CHECK(funs_of_transition(prog, prog.transitions[1]) == std::set<int>{0});
  // funs(t0) = {}
  CHECK(funs_of_transition(prog, prog.transitions[0]).empty());
  // funs(L_{t4,t5}) = funs({f1}) = {rho1, rho2}
  std::set<int> locs = source_locations(prog, {4, 5});
  CHECK(locs == std::set<int>{prog.location_id("f1")});
  CHECK(funs_of_locations(prog, locs) == std::set<int>({0, 1}));
  // trans_of(rho2) = {t5}
  CHECK(trans_of(prog, 1) == std::set<int>{5});
  CHECK(trans_of(prog, std::set<int>{}).empty());
  CHECK(trans_of(prog, std::set<int>{0, 1}) == std::set<int>({1, 5}));
}

TEST_CASE("validate accepts the leading example") {
  Program prog = leading_example();
  CHECK(validate(prog).empty());
}

TEST_CASE("validate rejects a transition out of a return location") {
  Program prog = leading_example();
  Transition bad;
  bad.name = "t6";
  bad.source = prog.location_id("f2");
  bad.target = prog.location_id("l1");
  bad.update.assign(prog.nvars(), Polynomial());
  for (int v = 0; v < prog.nvars(); ++v) bad.update[v] = Polynomial::variable(v);
  prog.transitions.push_back(bad);
  auto diags = validate(prog);
  REQUIRE(!diags.empty());
  bool found = false;
  for (auto &d : diags)
    if (d.message.find("source in Ω") != std::string::npos) found = true;
  CHECK(found);
}

TEST_CASE("validate rejects a call targeting the initial location") {
  Program prog = leading_example();
  FunctionCall bad;
  bad.name = "rho3";
  bad.target = prog.initial;
  for (int v = 0; v < prog.nvars(); ++v) bad.zeta.push_back(Polynomial::variable(v));
  prog.calls.push_back(bad);
  auto diags = validate(prog);
  REQUIRE(!diags.empty());
  bool found = false;
  for (auto &d : diags)
    if (d.message.find("call targets initial location") != std::string::npos) found = true;
  CHECK(found);
}

TEST_CASE("desugaring correctness: a >= b stored as b < a + 1") {
  // Parse a program with a >= guard and check against direct evaluation.
  Program prog = rhobound::testing::parse_or_die(R"((GOAL COMPLEXITY)
(STARTTERM (FUNCTIONSYMBOLS l0))
(VAR x y)
(RULES
  l0(x,y) -> l1(x,y) :|: x >= y
)
)");
  const Constraint &g = prog.transitions[0].guard;
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    State s{{BigInt(rng.range(-9, 9)), BigInt(rng.range(-9, 9))}};
    bool want = s.values[0] >= s.values[1];
    CHECK(constraint_eval(g, s) == want);
  }
}
