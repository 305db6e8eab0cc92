#pragma once

#include "polynomial.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace rhobound {

// One atom lhs < rhs; every comparison is desugared to strict `<` at parse
// time (integers: p >= q is stored as q < p + 1).
struct Atom {
  Polynomial lhs, rhs;
  Polynomial diff() const { return rhs - lhs; }  // atom holds iff diff > 0
  bool operator==(const Atom &o) const { return lhs == o.lhs && rhs == o.rhs; }
};

// Conjunction of atoms; the empty conjunction is true. Disjunction is
// modeled by several transitions.
struct Constraint {
  std::vector<Atom> atoms;
  bool operator==(const Constraint &o) const { return atoms == o.atoms; }
};

// ρ = ℓ(ζ): jump to `target` with the variables set according to zeta,
// which is total on the program variables (identity entries materialized).
struct FunctionCall {
  std::string name;  // rho1, rho2, ...
  int target = -1;
  std::vector<Polynomial> zeta;  // indexed by variable id, over V only
  bool operator==(const FunctionCall &o) const { return target == o.target && zeta == o.zeta; }
};

struct Transition {
  std::string name;  // t0, t1, ...
  int source = -1;
  int target = -1;
  Constraint guard;
  std::vector<Polynomial> update;  // indexed by variable id, over V ∪ F
  bool operator==(const Transition &o) const {
    return source == o.source && target == o.target && guard == o.guard && update == o.update;
  }
};

struct State {
  std::vector<BigInt> values;  // indexed by variable id, total on V
  bool operator==(const State &o) const { return values == o.values; }
};

struct Diagnostic {
  std::string message;
};

class Program {
 public:
  std::vector<std::string> vars;       // variable id -> name
  std::vector<std::string> locations;  // location id -> name
  int initial = -1;
  std::map<int, int> returns;  // return location -> return variable (Ω, v_ℓ)
  std::vector<FunctionCall> calls;
  std::vector<Transition> transitions;

  int nvars() const { return static_cast<int>(vars.size()); }
  // Call symbols live in the same indeterminate id space as variables,
  // shifted past them.
  int call_ind(int call_id) const { return nvars() + call_id; }
  bool is_call_ind(int ind) const { return ind >= nvars(); }
  int call_of_ind(int ind) const { return ind - nvars(); }

  int var_id(const std::string &name) const {
    for (int i = 0; i < nvars(); ++i)
      if (vars[i] == name) return i;
    return -1;
  }
  int location_id(const std::string &name) const {
    for (size_t i = 0; i < locations.size(); ++i)
      if (locations[i] == name) return static_cast<int>(i);
    return -1;
  }
  bool is_return(int loc) const { return returns.count(loc) > 0; }

  std::string ind_name(int ind) const {
    return is_call_ind(ind) ? calls[call_of_ind(ind)].name : vars[ind];
  }

  std::set<int> initial_transitions() const {
    std::set<int> r;
    for (size_t i = 0; i < transitions.size(); ++i)
      if (transitions[i].source == initial) r.insert(static_cast<int>(i));
    return r;
  }
};

// Exact evaluation of p under a total assignment of its indeterminates.
BigInt poly_eval(const Polynomial &p, const std::map<int, BigInt> &sigma);
BigInt poly_eval_state(const Polynomial &p, const State &sigma);

bool constraint_eval(const Constraint &phi, const State &sigma);

// Call symbols occurring in a polynomial / an update / a transition.
std::set<int> funs_of_poly(const Program &prog, const Polynomial &p);
std::set<int> funs_of_transition(const Program &prog, const Transition &t);
std::set<int> funs_of_transitions(const Program &prog, const std::set<int> &ts);
// All declared calls whose target lies in the location set.
std::set<int> funs_of_locations(const Program &prog, const std::set<int> &locs);

// Transitions whose update mentions the call(s).
std::set<int> trans_of(const Program &prog, int call_id);
std::set<int> trans_of(const Program &prog, const std::set<int> &call_ids);

// Source locations of a transition set (L_{T'}).
std::set<int> source_locations(const Program &prog, const std::set<int> &ts);

std::vector<Diagnostic> validate(const Program &prog);

}  // namespace rhobound
