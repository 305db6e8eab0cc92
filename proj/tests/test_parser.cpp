#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "common.hpp"
#include "parser.hpp"

using namespace rhobound;
using rhobound::testing::kLeadingExample;
using rhobound::testing::Rng;

TEST_CASE("leading example parses to the expected shape") {
  ParseResult r = parse(kLeadingExample);
  REQUIRE(r.ok());
  const Program &p = *r.program;
  CHECK(p.locations.size() == 5);
  CHECK(p.transitions.size() == 6);
  CHECK(p.calls.size() == 2);
  REQUIRE(p.returns.size() == 1);
  CHECK(p.returns.begin()->first == p.location_id("f2"));
  CHECK(p.vars[p.returns.begin()->second] == "a");

  // rho1 = f1(x, x, y), rho2 = f1(a-1, x, y), ids in first-occurrence order.
  CHECK(p.calls[0].name == "rho1");
  CHECK(p.calls[0].target == p.location_id("f1"));
  CHECK(p.calls[0].zeta[0] == Polynomial::variable(1));
  CHECK(p.calls[1].zeta[0] ==
        Polynomial::variable(0) - Polynomial::constant(BigInt(1)));

  // t2's guard x <= 0 is stored as x < 1.
  const Transition &t2 = p.transitions[2];
  REQUIRE(t2.guard.atoms.size() == 1);
  CHECK(t2.guard.atoms[0].lhs == Polynomial::variable(1));
  CHECK(t2.guard.atoms[0].rhs == Polynomial::constant(BigInt(1)));
}

TEST_CASE("call-free program without RETURN has empty Omega") {
  ParseResult r = parse(R"((GOAL COMPLEXITY)
(STARTTERM (FUNCTIONSYMBOLS l0))
(VAR x)
(RULES
  l0(x) -> l1(x)
)
)");
  REQUIRE(r.ok());
  CHECK(r.program->returns.empty());
  CHECK(r.program->calls.empty());
}

TEST_CASE("missing parenthesis yields a located diagnostic") {
  std::string text = R"((GOAL COMPLEXITY)
(STARTTERM (FUNCTIONSYMBOLS l0))
(VAR x)
(RULES
  l0(x -> l1(x)
)
)";
  ParseResult r = parse(text);
  CHECK(!r.ok());
  REQUIRE(!r.diagnostics.empty());
  CHECK(r.diagnostics[0].span.line == 5);
}

TEST_CASE("undeclared variable and nested calls are rejected") {
  ParseResult r = parse(R"((GOAL COMPLEXITY)
(STARTTERM (FUNCTIONSYMBOLS l0))
(VAR x)
(RULES
  l0(x) -> l1(z)
)
)");
  CHECK(!r.ok());

  ParseResult r2 = parse(R"((GOAL COMPLEXITY)
(STARTTERM (FUNCTIONSYMBOLS l0))
(VAR x)
(RETURN g x)
(RETURN h x)
(RULES
  l0(x) -> l1(@g(@h(x)))
)
)");
  CHECK(!r2.ok());
}

TEST_CASE("call targeting the start location is rejected") {
  ParseResult r = parse(R"((GOAL COMPLEXITY)
(STARTTERM (FUNCTIONSYMBOLS l0))
(VAR x)
(RULES
  l0(x) -> l1(@l0(x))
)
)");
  CHECK(!r.ok());
}

TEST_CASE("inequality guards split the transition") {
  ParseResult r = parse(R"((GOAL COMPLEXITY)
(STARTTERM (FUNCTIONSYMBOLS l0))
(VAR x)
(RULES
  l0(x) -> l1(x - 1) :|: x != 0
)
)");
  REQUIRE(r.ok());
  CHECK(r.program->transitions.size() == 2);
  CHECK(r.program->transitions[0].name == "t0");
  CHECK(r.program->transitions[1].name == "t1");
}

TEST_CASE("round trip on the leading example") {
  Program p = rhobound::testing::leading_example();
  std::string printed = pretty_print(p);
  ParseResult r = parse(printed);
  REQUIRE(r.ok());
  CHECK(r.program->vars == p.vars);
  CHECK(r.program->locations == p.locations);
  CHECK(r.program->returns == p.returns);
  CHECK(r.program->calls == p.calls);
  CHECK(r.program->transitions == p.transitions);
}

TEST_CASE("round trip on the desugared inequality program") {
  Program p = rhobound::testing::parse_or_die(R"((GOAL COMPLEXITY)
(STARTTERM (FUNCTIONSYMBOLS l0))
(VAR x y)
(RULES
  l0(x,y) -> l1(2*x + y, y) :|: x != y && y >= 0
)
)");
  CHECK(p.transitions.size() == 2);
  Program q = rhobound::testing::parse_or_die(pretty_print(p));
  CHECK(q.transitions == p.transitions);
}

TEST_CASE("empty RULES round trips") {
  Program p = rhobound::testing::parse_or_die(R"((GOAL COMPLEXITY)
(STARTTERM (FUNCTIONSYMBOLS l0))
(VAR x)
(RULES
)
)");
  Program q = rhobound::testing::parse_or_die(pretty_print(p));
  CHECK(q.transitions.empty());
  CHECK(q.vars == p.vars);
}

namespace {

// Random call-free programs for the round-trip property.
std::string random_program_text(Rng &rng) {
  int nv = static_cast<int>(rng.range(1, 3));
  std::vector<std::string> vars;
  for (int i = 0; i < nv; ++i) vars.push_back("v" + std::to_string(i));
  int nl = static_cast<int>(rng.range(2, 4));
  auto loc = [&](int i) { return "q" + std::to_string(i); };
  std::string vars_str;
  for (auto &v : vars) vars_str += " " + v;
  std::string text = "(GOAL COMPLEXITY)\n(STARTTERM (FUNCTIONSYMBOLS q0))\n(VAR" + vars_str +
                     ")\n(RULES\n";
  auto expr = [&]() {
    std::string e = std::to_string(rng.range(-3, 3));
    for (int i = 0; i < nv; ++i)
      if (rng.range(0, 1)) e += " + " + std::to_string(rng.range(-2, 2)) + "*" + vars[i];
    return e;
  };
  int rules = static_cast<int>(rng.range(1, 5));
  for (int i = 0; i < rules; ++i) {
    int from = static_cast<int>(rng.range(0, nl - 2));
    int to = static_cast<int>(rng.range(from == 0 ? 1 : from, nl - 1));
    std::string lhs_args, rhs_args;
    for (int v = 0; v < nv; ++v) {
      lhs_args += (v ? "," : "") + vars[v];
      rhs_args += (v ? ", " : "") + expr();
    }
    text += "  " + loc(from) + "(" + lhs_args + ") -> " + loc(to) + "(" + rhs_args + ")";
    if (rng.range(0, 1)) {
      const char *rel[] = {"<", "<=", ">", ">=", "="};
      text += " :|: " + expr() + " " + rel[rng.range(0, 4)] + " " + expr();
    }
    text += "\n";
  }
  text += ")\n";
  return text;
}

}  // namespace

TEST_CASE("round trip and deterministic ids on random programs") {
  Rng rng(2024);
  for (int i = 0; i < 120; ++i) {
    std::string text = random_program_text(rng);
    ParseResult a = parse(text);
    REQUIRE(a.ok());
    ParseResult b = parse(text);
    REQUIRE(b.ok());
    // Deterministic id assignment: parsing twice yields identical programs.
    CHECK(a.program->transitions == b.program->transitions);
    for (size_t t = 0; t < a.program->transitions.size(); ++t)
      CHECK(a.program->transitions[t].name == b.program->transitions[t].name);
    Program round = rhobound::testing::parse_or_die(pretty_print(*a.program));
    CHECK(round.transitions == a.program->transitions);
    CHECK(round.vars == a.program->vars);
    CHECK(round.locations == a.program->locations);
  }
}
