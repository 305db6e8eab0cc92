#include "its.hpp"

#include <stdexcept>

namespace rhobound {

BigInt poly_eval(const Polynomial &p, const std::map<int, BigInt> &sigma) {
  return p.eval([&](int ind) -> BigInt {
    auto it = sigma.find(ind);
    if (it == sigma.end())
      throw std::invalid_argument("poly_eval: missing binding for indeterminate " +
                                  std::to_string(ind));
    return it->second;
  });
}

BigInt poly_eval_state(const Polynomial &p, const State &sigma) {
  return p.eval([&](int ind) -> BigInt {
    if (ind < 0 || ind >= static_cast<int>(sigma.values.size()))
      throw std::invalid_argument("poly_eval_state: indeterminate outside state");
    return sigma.values[ind];
  });
}

bool constraint_eval(const Constraint &phi, const State &sigma) {
  for (const Atom &a : phi.atoms)
    if (!(poly_eval_state(a.lhs, sigma) < poly_eval_state(a.rhs, sigma))) return false;
  return true;
}

std::set<int> funs_of_poly(const Program &prog, const Polynomial &p) {
  std::set<int> r;
  for (int ind : p.indeterminates())
    if (prog.is_call_ind(ind)) r.insert(prog.call_of_ind(ind));
  return r;
}

std::set<int> funs_of_transition(const Program &prog, const Transition &t) {
  std::set<int> r;
  for (const Polynomial &p : t.update)
    for (int c : funs_of_poly(prog, p)) r.insert(c);
  return r;
}

std::set<int> funs_of_transitions(const Program &prog, const std::set<int> &ts) {
  std::set<int> r;
  for (int t : ts)
    for (int c : funs_of_transition(prog, prog.transitions[t])) r.insert(c);
  return r;
}

std::set<int> funs_of_locations(const Program &prog, const std::set<int> &locs) {
  std::set<int> r;
  for (size_t i = 0; i < prog.calls.size(); ++i)
    if (locs.count(prog.calls[i].target)) r.insert(static_cast<int>(i));
  return r;
}

std::set<int> trans_of(const Program &prog, int call_id) {
  std::set<int> r;
  for (size_t i = 0; i < prog.transitions.size(); ++i)
    if (funs_of_transition(prog, prog.transitions[i]).count(call_id))
      r.insert(static_cast<int>(i));
  return r;
}

std::set<int> trans_of(const Program &prog, const std::set<int> &call_ids) {
  std::set<int> r;
  for (int c : call_ids)
    for (int t : trans_of(prog, c)) r.insert(t);
  return r;
}

std::set<int> source_locations(const Program &prog, const std::set<int> &ts) {
  std::set<int> r;
  for (int t : ts) r.insert(prog.transitions[t].source);
  return r;
}

std::vector<Diagnostic> validate(const Program &prog) {
  std::vector<Diagnostic> diags;
  auto bad = [&](const std::string &m) { diags.push_back({m}); };

  if (prog.initial < 0 || prog.initial >= static_cast<int>(prog.locations.size()))
    bad("initial location undefined");
  for (const auto &[loc, var] : prog.returns) {
    if (loc < 0 || loc >= static_cast<int>(prog.locations.size()))
      bad("return location out of range");
    if (var < 0 || var >= prog.nvars()) bad("return variable out of range");
  }

  for (size_t i = 0; i < prog.calls.size(); ++i) {
    const FunctionCall &c = prog.calls[i];
    if (c.target < 0 || c.target >= static_cast<int>(prog.locations.size()))
      bad(c.name + ": call target out of range");
    else if (c.target == prog.initial)
      bad(c.name + ": call targets initial location");
    if (static_cast<int>(c.zeta.size()) != prog.nvars())
      bad(c.name + ": zeta not total on the program variables");
    for (const Polynomial &z : c.zeta)
      for (int ind : z.indeterminates())
        if (prog.is_call_ind(ind)) bad(c.name + ": zeta argument contains a call symbol");
  }

  for (size_t i = 0; i < prog.transitions.size(); ++i) {
    const Transition &t = prog.transitions[i];
    if (t.source < 0 || t.source >= static_cast<int>(prog.locations.size())) {
      bad(t.name + ": source out of range");
    } else if (prog.is_return(t.source)) {
      bad(t.name + ": source in Ω");
    }
    if (t.target < 0 || t.target >= static_cast<int>(prog.locations.size())) {
      bad(t.name + ": target out of range");
    } else if (t.target == prog.initial) {
      bad(t.name + ": target is the initial location");
    }
    if (static_cast<int>(t.update.size()) != prog.nvars())
      bad(t.name + ": update not total on the program variables");
    for (const Polynomial &u : t.update)
      for (int c : funs_of_poly(prog, u))
        if (c < 0 || c >= static_cast<int>(prog.calls.size()))
          bad(t.name + ": update references undeclared call");
    for (const Atom &a : t.guard.atoms)
      for (int ind : (a.lhs + a.rhs).indeterminates())
        if (prog.is_call_ind(ind)) bad(t.name + ": guard contains a call symbol");
  }

  for (size_t i = 0; i < prog.transitions.size(); ++i)
    if (prog.transitions[i].target == prog.initial)
      bad(prog.transitions[i].name + ": initial location has an incoming transition");

  return diags;
}

}  // namespace rhobound
