#ifndef UCCA_GRAPH_HPP
#define UCCA_GRAPH_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "category.hpp"
#include "error.hpp"

namespace ucca {

// One text token. Positions are 1-based and contiguous within a passage.
struct Terminal {
  int position = 0;
  std::string text;
  bool punct = false;
  std::map<std::string, std::string> extra;  // unknown XML attributes, kept verbatim

  bool operator==(const Terminal& o) const {
    return position == o.position && text == o.text && punct == o.punct && extra == o.extra;
  }
};

// A semantic unit. Pre-terminal wrappers carry the position of the single
// terminal they attach; implicit units have neither terminals nor children.
struct Unit {
  std::string id;
  bool implicit = false;
  std::optional<int> terminal;
  std::map<std::string, std::string> extra;

  bool operator==(const Unit& o) const {
    return id == o.id && implicit == o.implicit && terminal == o.terminal && extra == o.extra;
  }
};

// Directed labeled edge between units. Parallel categories on the same
// parent/child pair are separate Edge records.
struct Edge {
  std::string parent;
  std::string child;
  Category category;
  bool remote = false;
  std::map<std::string, std::string> extra;

  bool operator==(const Edge& o) const {
    return parent == o.parent && child == o.child && category == o.category &&
           remote == o.remote && extra == o.extra;
  }
};

// Sort key for "<layer>.<ordinal>" ids; falls back to the raw string when
// an id does not match that form.
struct IdKey {
  long layer = -1;
  long ordinal = -1;
  std::string raw;

  auto operator<=>(const IdKey&) const = default;
};
IdKey id_sort_key(const std::string& id);
bool id_less(const std::string& a, const std::string& b);

// Canonical ordering of edges: (parent, child, category, remote).
bool edge_less(const Edge& a, const Edge& b);

// Immutable UCCA passage: ordered terminals plus a layered DAG of units.
// build() is the only construction path and enforces every invariant;
// instances are safe to share across threads.
class Passage {
 public:
  static Passage build(std::string passage_id, std::vector<Terminal> terminals,
                       std::vector<Unit> units, std::vector<Edge> edges);

  const std::string& id() const { return id_; }
  const std::vector<Terminal>& terminals() const { return terminals_; }
  const std::vector<Unit>& units() const { return units_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::string& root() const { return root_; }
  const std::map<std::string, std::string>& extra() const { return extra_; }

  bool has_unit(const std::string& unit_id) const;
  const Unit& unit(const std::string& unit_id) const;  // throws UnknownUnit

  // Terminal positions reachable over primary edges only, sorted ascending.
  // Implicit units yield the empty set.
  const std::vector<int>& yield(const std::string& unit_id) const;

  // True iff the unit's yield is not one contiguous run of positions.
  // The empty yield counts as contiguous.
  bool discontinuous(const std::string& unit_id) const;

  // Primary children in edge order; remote edges excluded.
  std::vector<std::string> primary_children(const std::string& unit_id) const;

  // Primary parent id, or empty for the root.
  const std::string& primary_parent(const std::string& unit_id) const;

  // Category of the unit's incoming primary edge; empty label for the root.
  const Category& incoming_category(const std::string& unit_id) const;

  void set_extra(std::map<std::string, std::string> extra) { extra_ = std::move(extra); }

  bool operator==(const Passage& o) const {
    return id_ == o.id_ && terminals_ == o.terminals_ && units_ == o.units_ &&
           edges_ == o.edges_ && extra_ == o.extra_;
  }

 private:
  Passage() = default;
  int index_of(const std::string& unit_id) const;

  std::string id_;
  std::vector<Terminal> terminals_;  // sorted by position
  std::vector<Unit> units_;          // sorted by id key
  std::vector<Edge> edges_;          // canonical order
  std::string root_;
  std::map<std::string, std::string> extra_;  // passage-level unknown attributes

  std::map<std::string, int> unit_index_;
  std::vector<std::vector<int>> yields_;        // per unit, sorted positions
  std::vector<std::string> parent_;             // primary parent per unit
  std::vector<Category> incoming_;              // incoming primary category per unit
};

// Disjoint split of the edge set by the remote flag.
std::pair<std::vector<Edge>, std::vector<Edge>> edge_partition(const Passage& p);

}  // namespace ucca

#endif
