#include "interpreter.hpp"

#include <sstream>
#include <stdexcept>

namespace rhobound {

namespace {

// Deterministic 64-bit generator (splitmix64); stdlib distributions are not
// pinned across implementations.
struct Rng {
  std::uint64_t s;
  explicit Rng(std::uint64_t seed) : s(seed + 0x9e3779b97f4a7c15ULL) {}
  std::uint64_t next() {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }
};

}  // namespace

EvalTree::EvalTree(int root_location, State root_state) {
  TreeNode root;
  root.location = root_location;
  root.state = std::move(root_state);
  nodes_.push_back(std::move(root));
}

int EvalTree::step_t(const Program &prog, int leaf, int transition) {
  const TreeNode &n = nodes_[leaf];
  const Transition &t = prog.transitions[transition];
  if (!is_leaf(leaf) || !n.state) throw std::invalid_argument("step_t: not an executable leaf");
  if (t.source != n.location) throw std::invalid_argument("step_t: wrong source location");
  if (!constraint_eval(t.guard, *n.state)) throw std::invalid_argument("step_t: guard fails");

  std::set<int> calls = funs_of_transition(prog, t);
  int target_id;
  if (calls.empty()) {
    State next;
    next.values.reserve(prog.nvars());
    for (int v = 0; v < prog.nvars(); ++v)
      next.values.push_back(poly_eval_state(t.update[v], *n.state));
    TreeNode child;
    child.location = t.target;
    child.state = std::move(next);
    child.parent = leaf;
    child.in_transition = transition;
    nodes_.push_back(std::move(child));
    target_id = static_cast<int>(nodes_.size()) - 1;
    nodes_[leaf].t_child = target_id;
  } else {
    TreeNode child;
    child.location = t.target;
    child.state = std::nullopt;  // ⊥ until the calls return
    child.parent = leaf;
    child.in_transition = transition;
    nodes_.push_back(std::move(child));
    target_id = static_cast<int>(nodes_.size()) - 1;
    nodes_[leaf].t_child = target_id;
    for (int c : calls) {
      const FunctionCall &rho = prog.calls[c];
      State entry;
      entry.values.reserve(prog.nvars());
      for (int v = 0; v < prog.nvars(); ++v)
        entry.values.push_back(poly_eval_state(rho.zeta[v], *nodes_[leaf].state));
      TreeNode cc;
      cc.location = rho.target;
      cc.state = std::move(entry);
      cc.parent = leaf;
      cc.in_call = c;
      nodes_.push_back(std::move(cc));
      nodes_[leaf].call_children.push_back(static_cast<int>(nodes_.size()) - 1);
    }
  }
  return target_id;
}

int EvalTree::frame_chain_end(int node) const {
  int cur = node;
  while (nodes_[cur].t_child >= 0) cur = nodes_[cur].t_child;
  return cur;
}

bool EvalTree::eps_ready(const Program &prog, int node) const {
  const TreeNode &n = nodes_[node];
  if (n.t_child < 0 || nodes_[n.t_child].state) return false;
  for (int cc : n.call_children) {
    int end = frame_chain_end(cc);
    if (!nodes_[end].state || !prog.is_return(nodes_[end].location)) return false;
  }
  return true;
}

void EvalTree::step_eps(const Program &prog, int node) {
  if (!eps_ready(prog, node)) throw std::invalid_argument("step_eps: not ready");
  const TreeNode &n = nodes_[node];
  const Transition &t = prog.transitions[nodes_[n.t_child].in_transition];
  // Returned value per call: the return variable at the end of the call
  // child's own frame chain.
  std::map<int, BigInt> env;
  for (int v = 0; v < prog.nvars(); ++v) env[v] = n.state->values[v];
  for (int cc : n.call_children) {
    int end = frame_chain_end(cc);
    int ret_var = prog.returns.at(nodes_[end].location);
    env[prog.call_ind(nodes_[cc].in_call)] = nodes_[end].state->values[ret_var];
  }
  State inst;
  inst.values.reserve(prog.nvars());
  for (int v = 0; v < prog.nvars(); ++v) inst.values.push_back(poly_eval(t.update[v], env));
  nodes_[n.t_child].state = std::move(inst);
}

namespace {

RunResult run_impl(const Program &prog, int start_location, const State &sigma0,
                   const Scheduler &sched, const std::set<int> *allowed) {
  RunResult res{EvalTree(start_location, sigma0), {}, {}, false};
  Rng rng(sched.seed);
  std::uint64_t steps = 0;

  auto transition_allowed = [&](int t) { return allowed == nullptr || allowed->count(t) > 0; };

  while (true) {
    // Eager ε: instantiate every pending state that is ready.
    bool changed = true;
    while (changed) {
      changed = false;
      for (int i = 0; i < static_cast<int>(res.tree.nodes().size()); ++i) {
        if (res.tree.eps_ready(prog, i)) {
          res.tree.step_eps(prog, i);
          changed = true;
        }
      }
    }

    // Executable (leaf, transition) pairs in deterministic order.
    std::vector<std::pair<int, int>> enabled;
    for (int i = 0; i < static_cast<int>(res.tree.nodes().size()); ++i) {
      if (!res.tree.is_leaf(i) || !res.tree.node(i).state) continue;
      for (int t = 0; t < static_cast<int>(prog.transitions.size()); ++t) {
        const Transition &tr = prog.transitions[t];
        if (tr.source != res.tree.node(i).location || !transition_allowed(t)) continue;
        if (constraint_eval(tr.guard, *res.tree.node(i).state)) enabled.emplace_back(i, t);
      }
    }
    if (enabled.empty()) break;
    if (steps >= sched.fuel) {
      res.exhausted = true;
      break;
    }
    size_t pick = 0;
    if (sched.strategy == Scheduler::Strategy::Random)
      pick = static_cast<size_t>(rng.below(enabled.size()));
    auto [leaf, t] = enabled[pick];
    res.tree.step_t(prog, leaf, t);
    res.edge_counts[t] += 1;
    for (int c : funs_of_transition(prog, prog.transitions[t])) res.call_counts[c] += 1;
    ++steps;
  }
  return res;
}

}  // namespace

RunResult run(const Program &prog, const State &sigma0, const Scheduler &sched) {
  return run_impl(prog, prog.initial, sigma0, sched, nullptr);
}

RunResult run_restricted(const Program &prog, int start_location, const State &sigma0,
                         const Scheduler &sched, const std::set<int> &allowed) {
  return run_impl(prog, start_location, sigma0, sched, &allowed);
}

std::string EvalTree::dot(const Program &prog) const {
  std::ostringstream out;
  out << "digraph evaltree {\n";
  for (size_t i = 0; i < nodes_.size(); ++i) {
    const TreeNode &n = nodes_[i];
    std::string label = prog.locations[n.location] + " ";
    if (n.state) {
      label += "(";
      for (int v = 0; v < prog.nvars(); ++v)
        label += (v ? "," : "") + n.state->values[v].str();
      label += ")";
    } else {
      label += "bot";
    }
    out << "  n" << i << " [label=\"" << label << "\"];\n";
  }
  for (size_t i = 0; i < nodes_.size(); ++i) {
    const TreeNode &n = nodes_[i];
    if (n.parent < 0) continue;
    std::string elabel =
        n.in_transition >= 0 ? prog.transitions[n.in_transition].name : prog.calls[n.in_call].name;
    std::string style = n.in_transition >= 0 ? "solid" : "dashed";
    out << "  n" << n.parent << " -> n" << i << " [label=\"" << elabel << "\", style=" << style
        << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::optional<Counterexample> check_bounds(const Program &prog,
                                           const std::map<int, BoundPtr> &runtime_bounds,
                                           const std::map<std::pair<int, int>, BoundPtr> &size_bounds,
                                           const CheckOptions &opts) {
  Rng rng(opts.seed);
  BigInt span = 2 * opts.value_range + 1;

  for (int trial = 0; trial < opts.trials; ++trial) {
    State sigma0;
    for (int v = 0; v < prog.nvars(); ++v) {
      std::uint64_t r = rng.next() % static_cast<std::uint64_t>(span);
      sigma0.values.push_back(BigInt(r) - opts.value_range);
    }
    std::vector<BigInt> abs0;
    for (const BigInt &v : sigma0.values) abs0.push_back(boost::multiprecision::abs(v));

    for (int s = 0; s < opts.scheduler_seeds + 1; ++s) {
      Scheduler sched;
      sched.fuel = opts.fuel;
      if (s == 0) {
        sched.strategy = Scheduler::Strategy::FirstMatch;
      } else {
        sched.strategy = Scheduler::Strategy::Random;
        sched.seed = opts.seed * 1000003ULL + static_cast<std::uint64_t>(s);
      }
      RunResult rr = run(prog, sigma0, sched);

      for (const auto &[t, count] : rr.edge_counts) {
        auto it = runtime_bounds.find(t);
        if (it == runtime_bounds.end()) continue;
        NatOmega rb = eval_bound(it->second, abs0);
        if (!(NatOmega(BigInt(count)) <= rb)) {
          std::ostringstream what;
          what << "runtime bound violated: count(" << prog.transitions[t].name << ") = " << count
               << " > " << rb.str();
          return Counterexample{sigma0, what.str()};
        }
      }
      for (const TreeNode &n : rr.tree.nodes()) {
        if (n.parent < 0 || !n.state) continue;
        int theta_t = n.in_transition;
        int theta_c = n.in_call;
        for (int v = 0; v < prog.nvars(); ++v) {
          auto key = theta_t >= 0 ? std::make_pair(theta_t, v)
                                  : std::make_pair(-1 - theta_c, v);
          auto it = size_bounds.find(key);
          if (it == size_bounds.end()) continue;
          NatOmega sb = eval_bound(it->second, abs0);
          BigInt got = boost::multiprecision::abs(n.state->values[v]);
          if (!(NatOmega(got) <= sb)) {
            std::ostringstream what;
            std::string theta =
                theta_t >= 0 ? prog.transitions[theta_t].name : prog.calls[theta_c].name;
            what << "size bound violated: |" << prog.vars[v] << "| = " << got << " after " << theta
                 << " > " << sb.str();
            return Counterexample{sigma0, what.str()};
          }
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace rhobound
