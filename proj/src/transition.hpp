#ifndef UCCA_TRANSITION_HPP
#define UCCA_TRANSITION_HPP

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "graph.hpp"

namespace ucca {

// Transition inventory of the DAG parser:
//   SHIFT            buffer front onto the stack
//   REDUCE           pop a finished stack top
//   NODE(X)          new parent of the stack top, X-labeled edge, onto buffer
//   IMPLICIT(X)      new implicit child of the stack top
//   LEFT-EDGE(X)     primary edge s0 -> s1
//   RIGHT-EDGE(X)    primary edge s1 -> s0
//   LEFT-REMOTE(X)   remote edge s0 -> s1
//   RIGHT-REMOTE(X)  remote edge s1 -> s0
//   SWAP             second stack item back to the buffer front
//   FINISH           terminate
// NODE covers non-terminals, SWAP discontinuity, the REMOTE pair
// reentrancy, and IMPLICIT covers units with no text correspondent.
enum class TransitionType {
  Shift,
  Reduce,
  Node,
  Implicit,
  LeftEdge,
  RightEdge,
  LeftRemote,
  RightRemote,
  Swap,
  Finish,
};

struct Transition {
  TransitionType type = TransitionType::Shift;
  Category category;  // empty on SHIFT/REDUCE/SWAP/FINISH

  bool operator==(const Transition&) const = default;
  std::string name() const;
};

// Every scoreable action in a fixed order; greedy ties resolve to the
// earliest entry, which makes an untrained model parse flat H graphs.
const std::vector<Transition>& transition_inventory();

// Parser configuration: stack and buffer of unit indices over a growing
// edge set. Value semantics; apply() mutates in place and validates.
class TransitionState {
 public:
  struct Node {
    std::string id;
    bool implicit = false;
    std::optional<int> terminal;
    double rank = 0;      // swap ordering; new nodes inherit the child's rank
    bool has_parent = false;
    int min_pos = 0;      // leftmost attached terminal, maintained cheaply
    int height = 0;       // longest primary chain below, maintained on link
    std::string in_cat;   // category of the incoming primary edge, once built
  };

  TransitionState(std::string passage_id, std::vector<Terminal> terminals);

  bool legal(const Transition& t) const;
  std::vector<Transition> legal_transitions() const;
  void apply(const Transition& t);  // throws IllegalTransition
  bool finished() const { return finished_; }

  // Graph accepted by Passage::build; callable once FINISH was applied.
  Passage finish_passage() const;

  const std::vector<int>& stack() const { return stack_; }
  const std::deque<int>& buffer() const { return buffer_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Transition>& history() const { return history_; }
  const std::vector<Terminal>& terminals() const { return terminals_; }
  int root_index() const { return 0; }
  int parentless() const { return parentless_; }

 private:
  friend class Oracle;
  bool can_parent(int idx) const;
  bool reaches(int from, int to) const;
  bool has_edge(int parent, int child, bool remote) const;
  bool has_edge_cat(int parent, int child, const Category& c, bool remote) const;
  int fresh_node(bool implicit, std::optional<int> terminal, double rank, int min_pos);

  std::string passage_id_;
  std::vector<Terminal> terminals_;
  std::vector<Node> nodes_;          // 0 is the root
  std::vector<Edge> edges_;          // ids refer to nodes_[i].id
  std::vector<std::vector<int>> kids_;  // adjacency over nodes_, primary+remote
  std::vector<int> stack_;
  std::deque<int> buffer_;
  std::vector<Transition> history_;
  int parentless_ = 1;
  int implicit_count_ = 0;
  bool finished_ = false;
};

// Deterministic static oracle: replays a gold passage as a legal transition
// sequence whose application reconstructs it exactly. Throws OracleFailure
// with the stuck state's description if no gold-consistent move exists
// (unreachable for generator-shaped passages; tested).
class Oracle {
 public:
  explicit Oracle(const Passage& gold);
  std::vector<Transition> sequence();

 private:
  const Passage& gold_;
};

std::vector<Transition> oracle(const Passage& gold);

// Transition budget that decoding is guaranteed to respect.
inline size_t transition_budget(size_t tokens) { return 10 * tokens + 20; }

}  // namespace ucca

#endif
