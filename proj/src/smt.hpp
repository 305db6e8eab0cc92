#pragma once

#include "its.hpp"
#include "polynomial.hpp"
#include "simplex.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rhobound {

// Solver-facing query: variables of integer or rational sort, polynomial
// (in practice mostly linear) assertions `poly REL 0`, and an optional
// lexicographic minimization sequence.
struct SmtVar {
  enum class Sort { Int, Real };
  std::string name;
  Sort sort = Sort::Real;
  bool nonneg = false;
};

struct SmtAssertion {
  enum class Rel { Ge, Gt, Eq };  // poly ≥ 0, poly > 0, poly = 0
  RatPoly poly;
  Rel rel = Rel::Ge;
};

struct Query {
  std::vector<SmtVar> vars;  // var id = index
  std::vector<SmtAssertion> assertions;
  std::vector<RatPoly> minimize;      // lexicographic objective sequence, linear
  std::vector<Rational> grid;         // finite domain for nonlinear Int unknowns
  Query() : grid({-2, -1, 0, 1, 2}) {}
};

enum class SmtStatus { Sat, Unsat, Unknown };

struct SmtResult {
  SmtStatus status = SmtStatus::Unknown;
  std::map<int, Rational> model;  // var id -> value when Sat
  std::string note;               // diagnostics for Unknown / errors
};

struct SmtBackend {
  std::string external_command;  // empty: internal backend
  int timeout_seconds = 10;

  // Every sat model is replayed against the assertions exactly before it is
  // reported; unverifiable answers degrade to Unknown.
  SmtResult solve(const Query &q) const;

  std::string serialize(const Query &q) const;  // SMT-LIB2, deterministic
};

enum class Entail { Yes, No, Unknown };

// φ ⊨ ψ over the integers for linear φ, ψ: yes iff φ ∧ ¬ψ is unsatisfiable.
Entail entails(const Constraint &phi, const Atom &psi);
// φ ⊨ p ≥ c.
Entail entails_ge(const Constraint &phi, const Polynomial &p, const BigInt &c);

// Satisfiability of a linear integer constraint over the rational
// relaxation; Unsat is certain, Sat requires an integral witness.
SmtStatus constraint_sat(const Constraint &phi);

}  // namespace rhobound
