#include "smt.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstring>
#include <sstream>

namespace rhobound {

namespace {

bool is_linear_query(const Query &q) {
  for (const auto &a : q.assertions)
    if (!a.poly.is_linear()) return false;
  for (const auto &o : q.minimize)
    if (!o.is_linear()) return false;
  return true;
}

bool all_int(const Query &q) {
  for (const auto &v : q.vars)
    if (v.sort != SmtVar::Sort::Int) return false;
  return true;
}

// Exact replay of a model against the assertions.
bool model_satisfies(const Query &q, const std::map<int, Rational> &model) {
  for (const auto &v : model) {
    (void)v;
  }
  for (const auto &a : q.assertions) {
    Rational val = a.poly.eval([&](int ind) -> Rational {
      auto it = model.find(ind);
      return it == model.end() ? Rational(0) : it->second;
    });
    switch (a.rel) {
      case SmtAssertion::Rel::Ge:
        if (!(val >= 0)) return false;
        break;
      case SmtAssertion::Rel::Gt:
        if (!(val > 0)) return false;
        break;
      case SmtAssertion::Rel::Eq:
        if (!(val == 0)) return false;
        break;
    }
  }
  for (size_t i = 0; i < q.vars.size(); ++i) {
    auto it = model.find(static_cast<int>(i));
    Rational v = it == model.end() ? Rational(0) : it->second;
    if (q.vars[i].nonneg && v < 0) return false;
    if (q.vars[i].sort == SmtVar::Sort::Int && den(v) != 1) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Internal backend: exact rational simplex on the relaxation. Free variables
// are encoded as differences of nonnegative column pairs. Strict assertions
// over integer variables are tightened to ≥ 1 after clearing denominators.

struct InternalEncoding {
  std::vector<LinConstraint> cons;
  // var id -> (positive column, negative column or -1 when nonneg)
  std::vector<std::pair<int, int>> cols;
  int next_col = 0;
};

std::optional<LinConstraint> encode_assertion(const Query &q, const SmtAssertion &a,
                                              InternalEncoding &enc) {
  auto dec = a.poly.linear_decomp();
  if (!dec) return std::nullopt;
  LinConstraint c;
  bool ints_only = true;
  for (const auto &[ind, coef] : dec->second) {
    if (q.vars[ind].sort != SmtVar::Sort::Int) ints_only = false;
    auto [pos, neg] = enc.cols[ind];
    c.coeffs[pos] += coef;
    if (neg >= 0) c.coeffs[neg] -= coef;
  }
  // poly REL 0  with poly = cst + Σ coef·x  ⇒  Σ coef·x REL -cst
  c.rhs = -dec->first;
  switch (a.rel) {
    case SmtAssertion::Rel::Ge:
      c.rel = LinConstraint::Rel::Ge;
      break;
    case SmtAssertion::Rel::Eq:
      c.rel = LinConstraint::Rel::Eq;
      break;
    case SmtAssertion::Rel::Gt: {
      if (!ints_only) return std::nullopt;  // strict over reals: unsupported
      // Clear denominators, then > 0 over the integers means ≥ 1.
      BigInt lcm = 1;
      for (const auto &[col, coef] : c.coeffs)
        lcm = boost::multiprecision::lcm(lcm, den(coef));
      lcm = boost::multiprecision::lcm(lcm, den(c.rhs));
      for (auto &[col, coef] : c.coeffs) coef *= Rational(lcm);
      c.rhs = c.rhs * Rational(lcm) + 1;
      c.rel = LinConstraint::Rel::Ge;
      break;
    }
  }
  return c;
}

SmtResult solve_internal_linear(const Query &q) {
  InternalEncoding enc;
  for (const auto &v : q.vars) {
    if (v.nonneg) {
      enc.cols.emplace_back(enc.next_col, -1);
      enc.next_col += 1;
    } else {
      enc.cols.emplace_back(enc.next_col, enc.next_col + 1);
      enc.next_col += 2;
    }
  }
  for (const auto &a : q.assertions) {
    auto c = encode_assertion(q, a, enc);
    if (!c) return {SmtStatus::Unknown, {}, "assertion outside the linear fragment"};
    enc.cons.push_back(*c);
  }

  auto extract = [&](const LpResult &lp) {
    std::map<int, Rational> model;
    for (size_t i = 0; i < q.vars.size(); ++i) {
      auto [pos, neg] = enc.cols[i];
      Rational val = 0;
      auto it = lp.model.find(pos);
      if (it != lp.model.end()) val += it->second;
      if (neg >= 0) {
        it = lp.model.find(neg);
        if (it != lp.model.end()) val -= it->second;
      }
      model[static_cast<int>(i)] = val;
    }
    return model;
  };

  // Lexicographic minimization: fix each optimum with an equality, re-solve.
  std::vector<LinConstraint> cons = enc.cons;
  LpResult lp = lp_feasible(cons);
  if (lp.status == LpStatus::Infeasible) return {SmtStatus::Unsat, {}, ""};
  if (lp.status == LpStatus::Unbounded) return {SmtStatus::Unknown, {}, "unbounded"};
  for (const auto &obj : q.minimize) {
    auto dec = obj.linear_decomp();
    if (!dec) return {SmtStatus::Unknown, {}, "nonlinear objective"};
    std::map<int, Rational> o;
    LinConstraint fix;
    for (const auto &[ind, coef] : dec->second) {
      auto [pos, neg] = enc.cols[ind];
      o[pos] += coef;
      fix.coeffs[pos] += coef;
      if (neg >= 0) {
        o[neg] -= coef;
        fix.coeffs[neg] -= coef;
      }
    }
    LpResult step = lp_minimize(cons, o);
    if (step.status != LpStatus::Optimal) break;
    fix.rel = LinConstraint::Rel::Eq;
    fix.rhs = step.objective;
    cons.push_back(fix);
    lp = step;
  }
  LpResult fin = lp_feasible(cons);
  if (fin.status != LpStatus::Optimal) return {SmtStatus::Unknown, {}, "lost feasibility"};
  auto model = extract(fin);
  if (!model_satisfies(q, model)) {
    // Integrality of Int variables may fail in the relaxation.
    return {SmtStatus::Unknown, {}, "relaxation model not integral"};
  }
  return {SmtStatus::Sat, model, ""};
}

// Bounded grid enumeration over the integer unknowns of a nonlinear query;
// candidates are verified exactly, so answers are certain.
SmtResult solve_internal_grid(const Query &q) {
  std::vector<int> grid_vars;
  for (size_t i = 0; i < q.vars.size(); ++i) {
    if (q.vars[i].sort != SmtVar::Sort::Int)
      return {SmtStatus::Unknown, {}, "nonlinear query with rational unknowns"};
    grid_vars.push_back(static_cast<int>(i));
  }
  double combos = 1;
  for (size_t i = 0; i < grid_vars.size(); ++i) {
    combos *= static_cast<double>(q.grid.size());
    if (combos > 2e5) return {SmtStatus::Unknown, {}, "grid too large"};
  }
  std::map<int, Rational> model;
  std::vector<size_t> idx(grid_vars.size(), 0);
  while (true) {
    for (size_t i = 0; i < grid_vars.size(); ++i) model[grid_vars[i]] = q.grid[idx[i]];
    bool ok = true;
    for (size_t i = 0; i < q.vars.size() && ok; ++i)
      if (q.vars[i].nonneg && model[static_cast<int>(i)] < 0) ok = false;
    if (ok && model_satisfies(q, model)) return {SmtStatus::Sat, model, ""};
    size_t k = 0;
    while (k < idx.size()) {
      if (++idx[k] < q.grid.size()) break;
      idx[k] = 0;
      ++k;
    }
    if (k == idx.size()) break;
  }
  return {SmtStatus::Unsat, {}, "exhausted grid"};
}

// ---------------------------------------------------------------------------
// External backend: one solver process per query over the SMT-LIB2 text
// protocol.

struct SubprocessResult {
  bool ok = false;
  std::string output;
  std::string error;
};

SubprocessResult run_subprocess(const std::string &command, const std::string &input,
                                int timeout_seconds) {
  SubprocessResult res;
  int in_pipe[2], out_pipe[2];
  if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0) {
    res.error = "pipe failed";
    return res;
  }
  pid_t pid = fork();
  if (pid < 0) {
    res.error = "fork failed";
    return res;
  }
  if (pid == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char *>(nullptr));
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  size_t written = 0;
  while (written < input.size()) {
    ssize_t w = write(in_pipe[1], input.data() + written, input.size() - written);
    if (w <= 0) break;
    written += static_cast<size_t>(w);
  }
  close(in_pipe[1]);

  std::string out;
  char buf[4096];
  int remaining_ms = timeout_seconds * 1000;
  while (true) {
    struct pollfd pfd{out_pipe[0], POLLIN, 0};
    int pr = poll(&pfd, 1, remaining_ms > 0 ? 200 : 0);
    if (pr > 0) {
      ssize_t r = read(out_pipe[0], buf, sizeof buf);
      if (r <= 0) break;
      out.append(buf, static_cast<size_t>(r));
    } else {
      remaining_ms -= 200;
      if (remaining_ms <= 0) {
        kill(pid, SIGKILL);
        res.error = "timeout";
        break;
      }
      int status = 0;
      if (waitpid(pid, &status, WNOHANG) == pid) {
        while (true) {
          ssize_t r = read(out_pipe[0], buf, sizeof buf);
          if (r <= 0) break;
          out.append(buf, static_cast<size_t>(r));
        }
        close(out_pipe[0]);
        res.ok = res.error.empty();
        res.output = out;
        return res;
      }
    }
  }
  close(out_pipe[0]);
  int status = 0;
  waitpid(pid, &status, 0);
  res.ok = res.error.empty();
  res.output = out;
  return res;
}

// Minimal s-expression reader for get-value replies.
struct Sexp {
  std::string atom;
  std::vector<Sexp> kids;
  bool is_atom() const { return kids.empty() && !atom.empty(); }
};

size_t parse_sexp(const std::string &s, size_t i, Sexp &out) {
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  if (i >= s.size()) return i;
  if (s[i] == '(') {
    ++i;
    while (i < s.size()) {
      while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
      if (i < s.size() && s[i] == ')') return i + 1;
      Sexp kid;
      i = parse_sexp(s, i, kid);
      out.kids.push_back(std::move(kid));
    }
    return i;
  }
  size_t start = i;
  while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) && s[i] != '(' &&
         s[i] != ')')
    ++i;
  out.atom = s.substr(start, i - start);
  return i;
}

std::optional<Rational> sexp_value(const Sexp &e) {
  if (e.is_atom()) {
    try {
      if (e.atom.find('.') != std::string::npos) {
        // decimal literal like 1.5
        std::string digits = e.atom;
        size_t dot = digits.find('.');
        std::string frac = digits.substr(dot + 1);
        digits.erase(dot, 1);
        BigInt n(digits);
        BigInt d = 1;
        for (size_t i = 0; i < frac.size(); ++i) d *= 10;
        return Rational(n, d);
      }
      return Rational(BigInt(e.atom));
    } catch (...) {
      return std::nullopt;
    }
  }
  if (e.kids.size() == 2 && e.kids[0].atom == "-") {
    auto v = sexp_value(e.kids[1]);
    if (!v) return std::nullopt;
    return -*v;
  }
  if (e.kids.size() == 3 && e.kids[0].atom == "/") {
    auto a = sexp_value(e.kids[1]);
    auto b = sexp_value(e.kids[2]);
    if (!a || !b || *b == 0) return std::nullopt;
    return *a / *b;
  }
  return std::nullopt;
}

std::string rational_smt(const Rational &r, bool int_sort) {
  if (int_sort) {
    BigInt v = num(r);
    return v < 0 ? "(- " + BigInt(-v).str() + ")" : v.str();
  }
  BigInt n = num(r);
  std::string ns = n < 0 ? "(- " + BigInt(-n).str() + ")" : n.str();
  if (den(r) == 1) return ns;
  return "(/ " + ns + " " + den(r).str() + ")";
}

}  // namespace

std::string SmtBackend::serialize(const Query &q) const {
  std::ostringstream s;
  bool linear = is_linear_query(q);
  bool ints = all_int(q);
  s << "(set-logic " << (ints && linear ? "QF_LIA" : "QF_NRA") << ")\n";
  // Declarations sorted by name for byte-identical output.
  std::vector<size_t> order(q.vars.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return q.vars[a].name < q.vars[b].name; });
  for (size_t i : order)
    s << "(declare-const " << q.vars[i].name << " "
      << (q.vars[i].sort == SmtVar::Sort::Int ? "Int" : "Real") << ")\n";
  for (size_t i : order)
    if (q.vars[i].nonneg) s << "(assert (>= " << q.vars[i].name << " 0))\n";

  auto poly_smt = [&](const RatPoly &p) {
    if (p.is_zero()) return std::string("0");
    std::vector<std::string> terms;
    for (const auto &[m, c] : p.terms()) {
      std::vector<std::string> fs;
      fs.push_back(rational_smt(c, false));
      for (const auto &[ind, e] : m)
        for (int k = 0; k < e; ++k) fs.push_back(q.vars[static_cast<size_t>(ind)].name);
      if (fs.size() == 1) {
        terms.push_back(fs[0]);
      } else {
        std::string t = "(*";
        for (auto &f : fs) t += " " + f;
        terms.push_back(t + ")");
      }
    }
    if (terms.size() == 1) return terms[0];
    std::string r = "(+";
    for (auto &t : terms) r += " " + t;
    return r + ")";
  };

  for (const auto &a : q.assertions) {
    const char *op = a.rel == SmtAssertion::Rel::Ge ? ">=" :
                     a.rel == SmtAssertion::Rel::Gt ? ">" : "=";
    s << "(assert (" << op << " " << poly_smt(a.poly) << " 0))\n";
  }
  s << "(check-sat)\n";
  if (!q.vars.empty()) {
    s << "(get-value (";
    for (size_t i = 0; i < q.vars.size(); ++i) s << (i ? " " : "") << q.vars[i].name;
    s << "))\n";
  }
  return s.str();
}

SmtResult SmtBackend::solve(const Query &q) const {
  if (external_command.empty()) {
    if (is_linear_query(q)) return solve_internal_linear(q);
    return solve_internal_grid(q);
  }

  auto run_once = [&](const Query &query) -> SmtResult {
    SubprocessResult sp = run_subprocess(external_command, serialize(query), timeout_seconds);
    if (!sp.ok)
      return {SmtStatus::Unknown, {}, "solver process failed (" + external_command + "): " +
                                          sp.error};
    std::istringstream in(sp.output);
    std::string verdict;
    std::getline(in, verdict);
    while (!verdict.empty() && (verdict.back() == '\r' || verdict.back() == ' '))
      verdict.pop_back();
    if (verdict == "unsat") return {SmtStatus::Unsat, {}, ""};
    if (verdict != "sat")
      return {SmtStatus::Unknown, {}, "solver replied: " + sp.output.substr(0, 120)};
    std::string rest((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    Sexp top;
    parse_sexp(rest, 0, top);
    std::map<int, Rational> model;
    for (const Sexp &pair : top.kids) {
      if (pair.kids.size() != 2 || !pair.kids[0].is_atom()) continue;
      for (size_t i = 0; i < query.vars.size(); ++i) {
        if (query.vars[i].name == pair.kids[0].atom) {
          auto v = sexp_value(pair.kids[1]);
          if (!v) return {SmtStatus::Unknown, {}, "model parse failure: " + rest.substr(0, 120)};
          model[static_cast<int>(i)] = *v;
        }
      }
    }
    if (!model_satisfies(query, model))
      return {SmtStatus::Unknown, {}, "model replay failed"};
    return {SmtStatus::Sat, model, ""};
  };

  SmtResult base = run_once(q);
  if (base.status != SmtStatus::Sat || q.minimize.empty()) return base;

  // Best-effort lexicographic descent over integer thresholds; the final
  // model is replay-verified like any other.
  Query work = q;
  work.minimize.clear();
  SmtResult current = base;
  for (const auto &obj : q.minimize) {
    Rational value = obj.eval([&](int ind) -> Rational {
      auto it = current.model.find(ind);
      return it == current.model.end() ? Rational(0) : it->second;
    });
    BigInt hi = ceil_rat(value);
    for (int iter = 0; iter < 40 && hi > 0; ++iter) {
      Query trial = work;
      SmtAssertion cap;  // hi - 1 - obj >= 0
      cap.rel = SmtAssertion::Rel::Ge;
      cap.poly = RatPoly::constant(Rational(hi - 1)) - obj;
      trial.assertions.push_back(cap);
      SmtResult r = run_once(trial);
      if (r.status != SmtStatus::Sat) break;
      current = r;
      hi = ceil_rat(obj.eval([&](int ind) -> Rational {
        auto it = current.model.find(ind);
        return it == current.model.end() ? Rational(0) : it->second;
      }));
    }
    SmtAssertion fix;
    fix.rel = SmtAssertion::Rel::Ge;
    fix.poly = RatPoly::constant(Rational(hi)) - obj;
    work.assertions.push_back(fix);
  }
  return current;
}

namespace {

Query entails_query(const Constraint &phi, const std::vector<Atom> &negated,
                    const Polynomial &extra_ge, const BigInt &extra_c, bool use_extra) {
  // Variables: every program variable mentioned, Int sort, free.
  std::set<int> inds;
  for (const Atom &a : phi.atoms)
    for (int i : (a.lhs + a.rhs).indeterminates()) inds.insert(i);
  for (const Atom &a : negated)
    for (int i : (a.lhs + a.rhs).indeterminates()) inds.insert(i);
  if (use_extra)
    for (int i : extra_ge.indeterminates()) inds.insert(i);

  Query q;
  std::map<int, int> remap;
  for (int i : inds) {
    remap[i] = static_cast<int>(q.vars.size());
    q.vars.push_back({"v" + std::to_string(i), SmtVar::Sort::Int, false});
  }
  auto lift = [&](const Polynomial &p) {
    RatPoly r;
    for (const auto &[m, c] : p.terms()) {
      Monomial mm;
      for (const auto &[ind, e] : m) mm.emplace_back(remap.at(ind), e);
      std::sort(mm.begin(), mm.end());
      r.add_term(mm, Rational(c));
    }
    return r;
  };
  for (const Atom &a : phi.atoms) {
    // lhs < rhs over ints: rhs - lhs - 1 >= 0
    SmtAssertion as;
    as.poly = lift(a.rhs - a.lhs - Polynomial::constant(BigInt(1)));
    q.assertions.push_back(as);
  }
  for (const Atom &a : negated) {
    // ¬(lhs < rhs) over ints: lhs - rhs >= 0
    SmtAssertion as;
    as.poly = lift(a.lhs - a.rhs);
    q.assertions.push_back(as);
  }
  if (use_extra) {
    // ¬(p >= c): c - 1 - p >= 0
    SmtAssertion as;
    as.poly = lift(Polynomial::constant(extra_c - 1) - extra_ge);
    q.assertions.push_back(as);
  }
  return q;
}

Entail decide(const Query &q) {
  SmtBackend internal;  // entailment checks stay on the exact internal backend
  SmtResult r = internal.solve(q);
  switch (r.status) {
    case SmtStatus::Unsat:
      return Entail::Yes;
    case SmtStatus::Sat:
      return Entail::No;
    default:
      return Entail::Unknown;
  }
}

}  // namespace

Entail entails(const Constraint &phi, const Atom &psi) {
  for (const Atom &a : phi.atoms)
    if (!a.lhs.is_linear() || !a.rhs.is_linear()) return Entail::Unknown;
  if (!psi.lhs.is_linear() || !psi.rhs.is_linear()) return Entail::Unknown;
  return decide(entails_query(phi, {psi}, Polynomial(), BigInt(0), false));
}

Entail entails_ge(const Constraint &phi, const Polynomial &p, const BigInt &c) {
  for (const Atom &a : phi.atoms)
    if (!a.lhs.is_linear() || !a.rhs.is_linear()) return Entail::Unknown;
  if (!p.is_linear()) return Entail::Unknown;
  return decide(entails_query(phi, {}, p, c, true));
}

SmtStatus constraint_sat(const Constraint &phi) {
  for (const Atom &a : phi.atoms)
    if (!a.lhs.is_linear() || !a.rhs.is_linear()) return SmtStatus::Unknown;
  Query q = entails_query(phi, {}, Polynomial(), BigInt(0), false);
  SmtBackend internal;
  SmtResult r = internal.solve(q);
  if (r.status == SmtStatus::Unknown && r.note == "relaxation model not integral")
    return SmtStatus::Unknown;
  return r.status;
}

}  // namespace rhobound
