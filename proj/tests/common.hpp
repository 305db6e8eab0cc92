#pragma once

#include "parser.hpp"

#include <cstdint>
#include <string>

namespace rhobound::testing {

// splitmix64; deterministic across platforms.
struct Rng {
  std::uint64_t s;
  explicit Rng(std::uint64_t seed) : s(seed + 0x9e3779b97f4a7c15ULL) {}
  std::uint64_t next() {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // in [lo, hi]
  long long range(long long lo, long long hi) {
    return lo + static_cast<long long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
};

inline const char *kLeadingExample = R"((GOAL COMPLEXITY)
(STARTTERM (FUNCTIONSYMBOLS l0))
(VAR a x y)
(RETURN f2 a)
(RULES
  l0(a,x,y) -> l1(a,x,y)
  l1(a,x,y) -> l1(a, x-1, y + @f1(x,x,y)) :|: x > 0
  l1(a,x,y) -> l2(a, 1, y)        :|: x <= 0
  l2(a,x,y) -> l2(a, 3*x, 2*y)    :|: x < y
  f1(a,x,y) -> f2(1, x, y)        :|: a = 0
  f1(a,x,y) -> f2(a * @f1(a-1,x,y), x, y) :|: a > 0
)
)";

inline Program parse_or_die(const std::string &text) {
  ParseResult r = parse(text);
  if (!r.ok()) {
    std::string msg = "parse failed:";
    for (auto &d : r.diagnostics) msg += "\n  " + d.str();
    throw std::runtime_error(msg);
  }
  return *r.program;
}

inline Program leading_example() { return parse_or_die(kLeadingExample); }

}  // namespace rhobound::testing
