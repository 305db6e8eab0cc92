#pragma once

#include "bound.hpp"
#include "its.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rhobound {

// Node of an evaluation tree: a configuration (location, state) where the
// state may be pending (⊥) until every function call of the incoming
// transition has returned.
struct TreeNode {
  int location = -1;
  std::optional<State> state;    // nullopt = ⊥
  int parent = -1;               // -1 for the root
  int in_transition = -1;        // edge label: transition id, or
  int in_call = -1;              //             call id (exactly one is >= 0 unless root)
  int t_child = -1;              // at most one outgoing transition edge
  std::vector<int> call_children;
};

class EvalTree {
 public:
  explicit EvalTree(int root_location, State root_state);

  const std::vector<TreeNode> &nodes() const { return nodes_; }
  const TreeNode &node(int i) const { return nodes_[i]; }
  bool is_leaf(int i) const { return nodes_[i].t_child < 0 && nodes_[i].call_children.empty(); }

  // Transition step at a leaf with a defined state whose guard holds.
  // Returns the id of the transition-edge target node.
  int step_t(const Program &prog, int leaf, int transition);

  // Whether the pending ⊥ child of `node`'s transition edge can be
  // instantiated: each call child's frame chain (maximal path of
  // transition-labeled edges) must end in a return location with a defined
  // state.
  bool eps_ready(const Program &prog, int node) const;
  // Instantiate the pending state; precondition eps_ready.
  void step_eps(const Program &prog, int node);

  // End of the frame chain starting at `node`.
  int frame_chain_end(int node) const;

  std::string dot(const Program &prog) const;

 private:
  std::vector<TreeNode> nodes_;
};

struct Scheduler {
  enum class Strategy { FirstMatch, Random };
  Strategy strategy = Strategy::FirstMatch;
  std::uint64_t seed = 0;
  std::uint64_t fuel = 100000;  // max number of t-steps
};

struct RunResult {
  EvalTree tree;
  std::map<int, std::uint64_t> edge_counts;  // transition -> number of t-edges
  std::map<int, std::uint64_t> call_counts;  // call -> number of call edges
  bool exhausted = false;                    // fuel ran out with steps remaining
  std::uint64_t total_t_edges() const {
    std::uint64_t s = 0;
    for (auto &[t, c] : edge_counts) s += c;
    return s;
  }
};

// Executes the program from σ0, applying ε-steps eagerly and resolving
// non-determinism through the scheduler.
RunResult run(const Program &prog, const State &sigma0, const Scheduler &sched);

// Restricted variant used for local runtime bound checks: starts at
// `start_location` and only applies transitions from `allowed`.
RunResult run_restricted(const Program &prog, int start_location, const State &sigma0,
                         const Scheduler &sched, const std::set<int> &allowed);

struct Counterexample {
  State sigma0;
  std::string what;  // human-readable description of the violated bound
};

struct CheckOptions {
  int trials = 100;
  BigInt value_range = 16;
  std::uint64_t seed = 1;
  int scheduler_seeds = 3;
  std::uint64_t fuel = 2000;
};

// Direct oracle for the runtime-bound and size-bound definitions: samples
// initial states, runs the program under several schedulers, and verifies
// every t-edge count against RB and every reached value against SB.
std::optional<Counterexample> check_bounds(const Program &prog,
                                           const std::map<int, BoundPtr> &runtime_bounds,
                                           const std::map<std::pair<int, int>, BoundPtr> &size_bounds,
                                           const CheckOptions &opts);

}  // namespace rhobound
