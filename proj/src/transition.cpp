#include "transition.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ucca {

namespace {

const char* type_name(TransitionType t) {
  switch (t) {
    case TransitionType::Shift: return "SHIFT";
    case TransitionType::Reduce: return "REDUCE";
    case TransitionType::Node: return "NODE";
    case TransitionType::Implicit: return "IMPLICIT";
    case TransitionType::LeftEdge: return "LEFT-EDGE";
    case TransitionType::RightEdge: return "RIGHT-EDGE";
    case TransitionType::LeftRemote: return "LEFT-REMOTE";
    case TransitionType::RightRemote: return "RIGHT-REMOTE";
    case TransitionType::Swap: return "SWAP";
    case TransitionType::Finish: return "FINISH";
  }
  return "?";
}

// Edge categories in untrained tie-break order; H first so a zero
// model builds flat parallel-scene graphs.
const std::vector<std::string>& edge_cats() {
  static const std::vector<std::string> cats = {"H", "A", "P", "S", "D", "C", "E",
                                                "N", "R", "F", "L", "G", "U"};
  return cats;
}

}  // namespace

std::string Transition::name() const {
  std::string n = type_name(type);
  if (!category.label.empty()) n += "(" + category.label + ")";
  return n;
}

const std::vector<Transition>& transition_inventory() {
  static const std::vector<Transition> inv = [] {
    std::vector<Transition> v;
    v.push_back({TransitionType::Finish, {}});
    for (const auto& c : edge_cats()) v.push_back({TransitionType::RightEdge, Category{c}});
    v.push_back({TransitionType::Reduce, {}});
    v.push_back({TransitionType::Shift, {}});
    for (const auto& c : edge_cats()) v.push_back({TransitionType::Node, Category{c}});
    for (const auto& c : edge_cats()) v.push_back({TransitionType::LeftEdge, Category{c}});
    for (const auto& c : edge_cats()) v.push_back({TransitionType::RightRemote, Category{c}});
    for (const auto& c : edge_cats()) v.push_back({TransitionType::LeftRemote, Category{c}});
    for (const auto& c : edge_cats()) v.push_back({TransitionType::Implicit, Category{c}});
    v.push_back({TransitionType::Swap, {}});
    return v;
  }();
  return inv;
}

TransitionState::TransitionState(std::string passage_id, std::vector<Terminal> terminals)
    : passage_id_(std::move(passage_id)), terminals_(std::move(terminals)) {
  if (terminals_.empty())
    throw Error(ErrorCode::InvalidArgument, "cannot parse an empty token sequence");
  nodes_.push_back(Node{"1.1", false, {}, 0.0, false, 0, 0, ""});
  kids_.emplace_back();
  buffer_.push_back(0);  // the root unit enters through the buffer like anything else
  for (size_t i = 0; i < terminals_.size(); ++i) {
    int idx = fresh_node(false, static_cast<int>(i) + 1, static_cast<double>(i) + 1,
                         static_cast<int>(i) + 1);
    buffer_.push_back(idx);
    ++parentless_;
  }
}

int TransitionState::fresh_node(bool implicit, std::optional<int> terminal, double rank,
                                int min_pos) {
  Node n;
  n.id = "1." + std::to_string(nodes_.size() + 1);
  n.implicit = implicit;
  n.terminal = terminal;
  n.rank = rank;
  n.min_pos = min_pos;
  nodes_.push_back(std::move(n));
  kids_.emplace_back();
  return static_cast<int>(nodes_.size()) - 1;
}

bool TransitionState::can_parent(int idx) const {
  return !nodes_[idx].terminal && !nodes_[idx].implicit;
}

bool TransitionState::reaches(int from, int to) const {
  if (from == to) return true;
  std::vector<int> stack{from};
  std::set<int> seen{from};
  while (!stack.empty()) {
    int cur = stack.back();
    stack.pop_back();
    for (int next : kids_[cur]) {
      if (next == to) return true;
      if (seen.insert(next).second) stack.push_back(next);
    }
  }
  return false;
}

bool TransitionState::has_edge(int parent, int child, bool remote) const {
  for (const Edge& e : edges_)
    if (e.remote == remote && e.parent == nodes_[parent].id && e.child == nodes_[child].id)
      return true;
  return false;
}

bool TransitionState::has_edge_cat(int parent, int child, const Category& c,
                                   bool remote) const {
  for (const Edge& e : edges_)
    if (e.remote == remote && e.category == c && e.parent == nodes_[parent].id &&
        e.child == nodes_[child].id)
      return true;
  return false;
}

bool TransitionState::legal(const Transition& t) const {
  if (finished_) return false;
  const size_t depth = stack_.size();
  const int s0 = depth >= 1 ? stack_[depth - 1] : -1;
  const int s1 = depth >= 2 ? stack_[depth - 2] : -1;

  // A parentless top can always NODE and a parented one can always REDUCE,
  // so no reachable state is dead: completion stays available everywhere.
  switch (t.type) {
    case TransitionType::Shift:
      return !buffer_.empty();
    case TransitionType::Reduce:
      return s0 > 0 && nodes_[s0].has_parent;
    case TransitionType::Node:
      return s0 > 0 && !nodes_[s0].has_parent;
    case TransitionType::Implicit:
      return s0 >= 0 && can_parent(s0) &&
             implicit_count_ < static_cast<int>(terminals_.size()) + 4;
    case TransitionType::LeftEdge:
      return s1 > 0 && s0 >= 0 && can_parent(s0) && !nodes_[s1].has_parent &&
             !has_edge(s0, s1, false) && !reaches(s1, s0);
    case TransitionType::RightEdge:
      return s0 > 0 && s1 >= 0 && can_parent(s1) && !nodes_[s0].has_parent &&
             !has_edge(s1, s0, false) && !reaches(s0, s1);
    case TransitionType::LeftRemote:
      return s1 > 0 && s0 >= 0 && can_parent(s0) && !nodes_[s1].implicit &&
             !has_edge(s0, s1, true) && !has_edge_cat(s0, s1, t.category, false) &&
             !reaches(s1, s0);
    case TransitionType::RightRemote:
      return s0 > 0 && s1 >= 0 && can_parent(s1) && !nodes_[s0].implicit &&
             !has_edge(s1, s0, true) && !has_edge_cat(s1, s0, t.category, false) &&
             !reaches(s0, s1);
    case TransitionType::Swap:
      return s1 > 0 && nodes_[s1].rank < nodes_[s0].rank;
    case TransitionType::Finish:
      return buffer_.empty() && parentless_ == 1;
  }
  return false;
}

std::vector<Transition> TransitionState::legal_transitions() const {
  std::vector<Transition> out;
  for (const Transition& t : transition_inventory())
    if (legal(t)) out.push_back(t);
  return out;
}

void TransitionState::apply(const Transition& t) {
  if (!legal(t))
    throw Error(ErrorCode::IllegalTransition,
                "illegal transition " + t.name() + " (stack " + std::to_string(stack_.size()) +
                    ", buffer " + std::to_string(buffer_.size()) + ")");
  const size_t depth = stack_.size();
  const int s0 = depth >= 1 ? stack_[depth - 1] : -1;
  const int s1 = depth >= 2 ? stack_[depth - 2] : -1;
  auto link = [&](int parent, int child, bool remote) {
    edges_.push_back(Edge{nodes_[parent].id, nodes_[child].id, t.category, remote});
    kids_[parent].push_back(child);
    if (nodes_[child].min_pos != 0)
      nodes_[parent].min_pos = nodes_[parent].min_pos == 0
                                   ? nodes_[child].min_pos
                                   : std::min(nodes_[parent].min_pos, nodes_[child].min_pos);
    if (!remote) {
      nodes_[child].has_parent = true;
      nodes_[child].in_cat = t.category.label;
      nodes_[parent].height = std::max(nodes_[parent].height, nodes_[child].height + 1);
      --parentless_;
    }
  };

  switch (t.type) {
    case TransitionType::Shift:
      stack_.push_back(buffer_.front());
      buffer_.pop_front();
      break;
    case TransitionType::Reduce:
      stack_.pop_back();
      break;
    case TransitionType::Node: {
      // strictly distinct ranks keep one SWAP orientation available per pair
      double rank = nodes_[s0].rank + static_cast<double>(nodes_.size()) * 1e-9;
      int p = fresh_node(false, {}, rank, nodes_[s0].min_pos);
      ++parentless_;
      link(p, s0, false);
      buffer_.push_front(p);
      break;
    }
    case TransitionType::Implicit: {
      int c = fresh_node(true, {}, nodes_[s0].rank, 0);
      ++parentless_;
      link(s0, c, false);
      ++implicit_count_;
      break;
    }
    case TransitionType::LeftEdge:
      link(s0, s1, false);
      break;
    case TransitionType::RightEdge:
      link(s1, s0, false);
      break;
    case TransitionType::LeftRemote:
      link(s0, s1, true);
      break;
    case TransitionType::RightRemote:
      link(s1, s0, true);
      break;
    case TransitionType::Swap: {
      int moved = s1;
      stack_.erase(stack_.end() - 2);
      buffer_.push_front(moved);
      break;
    }
    case TransitionType::Finish:
      finished_ = true;
      break;
  }
  history_.push_back(t);
}

Passage TransitionState::finish_passage() const {
  if (!finished_)
    throw Error(ErrorCode::InvalidArgument, "finish_passage before FINISH");
  std::vector<Unit> units;
  for (const Node& n : nodes_) units.push_back(Unit{n.id, n.implicit, n.terminal});
  return Passage::build(passage_id_, terminals_, std::move(units), edges_);
}

// ---------------------------------------------------------------------------
// Oracle

namespace {

struct GoldIndex {
  // per gold unit: incident edge indices, primary parent, leftmost child
  std::map<std::string, std::vector<int>> incident;
  std::map<std::string, std::string> leftmost_child;  // parent -> unit to NODE from
  std::vector<bool> built;
};

}  // namespace

Oracle::Oracle(const Passage& gold) : gold_(gold) {}

std::vector<Transition> oracle(const Passage& gold) { return Oracle(gold).sequence(); }

std::vector<Transition> Oracle::sequence() {
  const Passage& g = gold_;
  const auto& edges = g.edges();

  std::map<std::string, std::vector<int>> incident;
  for (size_t i = 0; i < edges.size(); ++i) {
    incident[edges[i].parent].push_back(static_cast<int>(i));
    incident[edges[i].child].push_back(static_cast<int>(i));
  }
  // Which child announces an uncreated parent: the leftmost non-implicit one.
  std::map<std::string, std::string> announcer;
  for (const Unit& u : g.units()) {
    if (u.terminal || u.implicit) continue;
    std::string best;
    int best_ymin = 0;
    for (const Edge& e : edges) {
      if (e.remote || e.parent != u.id) continue;
      if (g.unit(e.child).implicit) continue;
      const auto& y = g.yield(e.child);
      if (y.empty()) continue;
      if (best.empty() || y.front() < best_ymin) {
        best = e.child;
        best_ymin = y.front();
      }
    }
    if (best.empty() && u.id != g.root())
      throw Error(ErrorCode::OracleFailure,
                  "unit '" + u.id + "' has no non-implicit child to announce it", u.id);
    announcer[u.id] = best;
  }

  TransitionState state(g.id(), g.terminals());
  std::vector<bool> built(edges.size(), false);
  std::map<std::string, int> unit_to_state;  // gold unit id -> state node index
  std::vector<std::string> state_to_unit(1, g.root());
  unit_to_state[g.root()] = 0;
  for (size_t i = 0; i < g.terminals().size(); ++i) {
    // pre-terminal wrapper of terminal i+1
    for (const Unit& u : g.units()) {
      if (u.terminal && *u.terminal == static_cast<int>(i) + 1) {
        unit_to_state[u.id] = static_cast<int>(i) + 1;
        if (state_to_unit.size() <= i + 1) state_to_unit.resize(i + 2);
        state_to_unit[i + 1] = u.id;
      }
    }
  }
  auto gold_of = [&](int idx) -> const std::string& {
    return state_to_unit[static_cast<size_t>(idx)];
  };
  auto record = [&](int state_idx, const std::string& gold_id) {
    unit_to_state[gold_id] = state_idx;
    if (static_cast<int>(state_to_unit.size()) <= state_idx)
      state_to_unit.resize(state_idx + 1);
    state_to_unit[state_idx] = gold_id;
  };
  auto done = [&](const std::string& gold_id) {
    for (int ei : incident[gold_id])
      if (!built[ei]) return false;
    return true;
  };
  auto pending_between = [&](const std::string& a, const std::string& b) {
    // unbuilt edge indices with {parent,child} == {a,b}, primaries first
    std::vector<int> out;
    for (int ei : incident[a]) {
      const Edge& e = edges[ei];
      if (built[ei]) continue;
      if ((e.parent == a && e.child == b) || (e.parent == b && e.child == a))
        out.push_back(ei);
    }
    std::sort(out.begin(), out.end(), [&](int x, int y) {
      return std::make_tuple(edges[x].remote, edges[x].category.label) <
             std::make_tuple(edges[y].remote, edges[y].category.label);
    });
    return out;
  };

  std::vector<Transition> seq;
  const size_t cap = 50 * g.terminals().size() + 100;
  auto take = [&](Transition t) {
    state.apply(t);
    seq.push_back(t);
  };

  while (seq.size() < cap) {
    const auto& stack = state.stack();
    const int s0 = stack.size() >= 1 ? stack.back() : -1;
    const int s1 = stack.size() >= 2 ? stack[stack.size() - 2] : -1;

    // 1. pop a finished top
    if (s0 > 0 && done(gold_of(s0)) && state.legal({TransitionType::Reduce, {}})) {
      take({TransitionType::Reduce, {}});
      continue;
    }
    // 2. build a pending edge between the top two
    if (s0 >= 0 && s1 >= 0) {
      auto pend = pending_between(gold_of(s0), gold_of(s1));
      if (!pend.empty()) {
        const Edge& e = edges[pend.front()];
        Transition t;
        if (e.parent == gold_of(s1))
          t = {e.remote ? TransitionType::RightRemote : TransitionType::RightEdge, e.category};
        else
          t = {e.remote ? TransitionType::LeftRemote : TransitionType::LeftEdge, e.category};
        if (!state.legal(t))
          throw Error(ErrorCode::OracleFailure,
                      "gold edge " + e.parent + "->" + e.child + " (" + e.category.label +
                          ") is not constructible at its state");
        take(t);
        built[pend.front()] = true;
        continue;
      }
    }
    // 3. create the gold parent from its announcing child
    if (s0 >= 0) {
      const std::string& gid = gold_of(s0);
      const std::string& parent = g.primary_parent(gid);  // empty for the root
      if (!parent.empty() && !unit_to_state.count(parent) && announcer.at(parent) == gid) {
        int ei = -1;
        for (int cand : incident[gid]) {
          const Edge& e = edges[cand];
          if (!built[cand] && !e.remote && e.parent == parent && e.child == gid) ei = cand;
        }
        if (ei >= 0) {
          take({TransitionType::Node, edges[ei].category});
          built[ei] = true;
          record(state.buffer().front(), parent);
          continue;
        }
      }
    }
    // 4. materialize an implicit child
    if (s0 >= 0) {
      int ei = -1;
      for (int cand : incident[gold_of(s0)]) {
        const Edge& e = edges[cand];
        if (!built[cand] && !e.remote && e.parent == gold_of(s0) &&
            g.unit(e.child).implicit)
          ei = cand;
      }
      if (ei >= 0) {
        Transition t{TransitionType::Implicit, edges[ei].category};
        if (state.legal(t)) {
          take(t);
          built[ei] = true;
          record(static_cast<int>(state.nodes().size()) - 1, edges[ei].child);
          continue;
        }
      }
    }
    // 5. swap the second item away when the top's business is deeper down
    if (s0 >= 0 && s1 >= 0 && !done(gold_of(s0))) {
      bool deeper = false;
      for (int ei : incident[gold_of(s0)]) {
        if (built[ei]) continue;
        const Edge& e = edges[ei];
        const std::string other = e.parent == gold_of(s0) ? e.child : e.parent;
        auto it = unit_to_state.find(other);
        if (it == unit_to_state.end()) continue;
        for (size_t k = 0; k + 2 < stack.size(); ++k)
          if (stack[k] == it->second) deeper = true;
      }
      if (deeper && state.legal({TransitionType::Swap, {}})) {
        take({TransitionType::Swap, {}});
        continue;
      }
    }
    // 6. bring in more material
    if (state.legal({TransitionType::Shift, {}})) {
      take({TransitionType::Shift, {}});
      continue;
    }
    // 7. finish
    if (std::all_of(built.begin(), built.end(), [](bool b) { return b; }) &&
        state.legal({TransitionType::Finish, {}})) {
      take({TransitionType::Finish, {}});
      return seq;
    }
    throw Error(ErrorCode::OracleFailure,
                "no gold-consistent transition at step " + std::to_string(seq.size()) +
                    " of passage '" + g.id() + "'");
  }
  throw Error(ErrorCode::OracleFailure,
              "oracle exceeded the transition cap on passage '" + g.id() + "'");
}

}  // namespace ucca
