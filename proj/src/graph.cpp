#include "graph.hpp"

#include <algorithm>
#include <set>

namespace ucca {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::XmlSyntax: return "XmlSyntax";
    case ErrorCode::Schema: return "Schema";
    case ErrorCode::Cycle: return "Cycle";
    case ErrorCode::MultiplePrimaryParents: return "MultiplePrimaryParents";
    case ErrorCode::UnreachableTerminal: return "UnreachableTerminal";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::UnknownUnit: return "UnknownUnit";
    case ErrorCode::TokenMismatch: return "TokenMismatch";
    case ErrorCode::MissingPassage: return "MissingPassage";
    case ErrorCode::IllegalTransition: return "IllegalTransition";
    case ErrorCode::OracleFailure: return "OracleFailure";
    case ErrorCode::ModelFormat: return "ModelFormat";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

IdKey id_sort_key(const std::string& id) {
  IdKey key;
  key.raw = id;
  auto dot = id.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 >= id.size()) return key;
  auto digits = [](std::string_view s) {
    return !s.empty() && s.find_first_not_of("0123456789") == std::string_view::npos;
  };
  std::string_view layer(id.data(), dot), ord(id.data() + dot + 1, id.size() - dot - 1);
  if (digits(layer) && digits(ord) && layer.size() <= 9 && ord.size() <= 9) {
    key.layer = std::stol(std::string(layer));
    key.ordinal = std::stol(std::string(ord));
  }
  return key;
}

bool id_less(const std::string& a, const std::string& b) {
  return id_sort_key(a) < id_sort_key(b);
}

bool edge_less(const Edge& a, const Edge& b) {
  auto ka = std::tie(a.parent, a.child, a.category.label, a.remote);
  auto kb = std::tie(b.parent, b.child, b.category.label, b.remote);
  if (ka != kb) {
    return std::make_tuple(id_sort_key(a.parent), id_sort_key(a.child), a.category.label,
                           a.remote) <
           std::make_tuple(id_sort_key(b.parent), id_sort_key(b.child), b.category.label,
                           b.remote);
  }
  return false;
}

Passage Passage::build(std::string passage_id, std::vector<Terminal> terminals,
                       std::vector<Unit> units, std::vector<Edge> edges) {
  Passage p;
  p.id_ = std::move(passage_id);

  if (terminals.empty())
    throw Error(ErrorCode::InvalidModel, "passage '" + p.id_ + "' has no terminals");

  std::sort(terminals.begin(), terminals.end(),
            [](const Terminal& a, const Terminal& b) { return a.position < b.position; });
  for (size_t i = 0; i < terminals.size(); ++i) {
    const Terminal& t = terminals[i];
    if (t.position != static_cast<int>(i) + 1)
      throw Error(ErrorCode::InvalidModel,
                  "terminal positions must be contiguous 1..n; saw position " +
                      std::to_string(t.position) + " at rank " + std::to_string(i + 1));
    if (t.text.empty())
      throw Error(ErrorCode::InvalidModel,
                  "terminal " + std::to_string(t.position) + " has empty text");
  }

  if (units.empty())
    throw Error(ErrorCode::InvalidModel, "passage '" + p.id_ + "' has no units");
  std::sort(units.begin(), units.end(),
            [](const Unit& a, const Unit& b) { return id_less(a.id, b.id); });
  std::map<std::string, int> index;
  for (size_t i = 0; i < units.size(); ++i) {
    const Unit& u = units[i];
    if (u.id.empty()) throw Error(ErrorCode::InvalidModel, "unit with empty id");
    if (!index.emplace(u.id, static_cast<int>(i)).second)
      throw Error(ErrorCode::InvalidModel, "duplicate unit id '" + u.id + "'");
    if (u.implicit && u.terminal)
      throw Error(ErrorCode::InvalidModel,
                  "implicit unit '" + u.id + "' has a terminal attachment", u.id);
    if (u.terminal && (*u.terminal < 1 || *u.terminal > static_cast<int>(terminals.size())))
      throw Error(ErrorCode::DanglingReference,
                  "unit '" + u.id + "' attaches unknown terminal position " +
                      std::to_string(*u.terminal), u.id);
  }

  // Exact duplicate edge records collapse to one; the set view wins.
  std::sort(edges.begin(), edges.end(), edge_less);
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  const int n_units = static_cast<int>(units.size());
  std::vector<std::vector<int>> primary_kids(n_units), all_kids(n_units);
  std::vector<std::string> parent(n_units);
  std::vector<Category> incoming(n_units);
  std::vector<std::set<std::string>> primary_parents(n_units);

  for (const Edge& e : edges) {
    auto pi = index.find(e.parent);
    auto ci = index.find(e.child);
    if (pi == index.end())
      throw Error(ErrorCode::DanglingReference,
                  "edge parent '" + e.parent + "' is not a unit", e.parent);
    if (ci == index.end())
      throw Error(ErrorCode::DanglingReference, "edge child '" + e.child + "' is not a unit", e.child);
    if (e.parent == e.child)
      throw Error(ErrorCode::InvalidModel, "self edge on unit '" + e.parent + "'", e.parent);
    const Unit& pu = units[pi->second];
    if (pu.implicit)
      throw Error(ErrorCode::InvalidModel,
                  "implicit unit '" + pu.id + "' has an outgoing edge", pu.id);
    if (pu.terminal)
      throw Error(ErrorCode::InvalidModel,
                  "pre-terminal unit '" + pu.id + "' has an outgoing edge", pu.id);
    all_kids[pi->second].push_back(ci->second);
    if (!e.remote) {
      primary_kids[pi->second].push_back(ci->second);
      if (primary_parents[ci->second].insert(e.parent).second &&
          primary_parents[ci->second].size() > 1)
        throw Error(ErrorCode::MultiplePrimaryParents,
                    "unit '" + e.child + "' has primary parents '" +
                        *primary_parents[ci->second].begin() + "' and '" + e.parent + "'",
                    e.child);
      parent[ci->second] = e.parent;
      if (incoming[ci->second].label.empty()) incoming[ci->second] = e.category;
    }
  }

  int root = -1;
  for (int i = 0; i < n_units; ++i) {
    if (primary_parents[i].empty()) {
      if (root >= 0)
        throw Error(ErrorCode::InvalidModel,
                    "multiple root units: '" + units[root].id + "' and '" + units[i].id + "'",
                    units[i].id);
      root = i;
    }
  }
  if (root < 0)
    throw Error(ErrorCode::Cycle, "no root unit: every unit has a primary parent");

  // Cycle check over primary+remote via iterative coloring.
  {
    std::vector<int> color(n_units, 0);  // 0 new, 1 on stack, 2 done
    for (int start = 0; start < n_units; ++start) {
      if (color[start]) continue;
      std::vector<std::pair<int, size_t>> stack{{start, 0}};
      color[start] = 1;
      while (!stack.empty()) {
        auto& [u, next] = stack.back();
        if (next < all_kids[u].size()) {
          int v = all_kids[u][next++];
          if (color[v] == 1)
            throw Error(ErrorCode::Cycle, "cycle through unit '" + units[v].id + "'", units[v].id);
          if (color[v] == 0) {
            color[v] = 1;
            stack.emplace_back(v, 0);
          }
        } else {
          color[u] = 2;
          stack.pop_back();
        }
      }
    }
  }

  // Each terminal needs exactly one pre-terminal wrapper; one primary parent
  // per unit plus acyclicity already makes every unit root-reachable.
  std::vector<std::string> wrapper(terminals.size());
  for (const Unit& u : units) {
    if (!u.terminal) continue;
    std::string& w = wrapper[*u.terminal - 1];
    if (!w.empty())
      throw Error(ErrorCode::InvalidModel, "terminal " + std::to_string(*u.terminal) +
                                               " attached by units '" + w + "' and '" + u.id +
                                               "'");
    w = u.id;
  }
  for (size_t i = 0; i < wrapper.size(); ++i)
    if (wrapper[i].empty())
      throw Error(ErrorCode::UnreachableTerminal,
                  "terminal " + std::to_string(i + 1) + " ('" + terminals[i].text +
                      "') is attached to no unit");

  // Primary-only yields, children-first.
  std::vector<std::vector<int>> yields(n_units);
  {
    std::vector<int> state(n_units, 0);
    std::vector<int> order;
    std::vector<std::pair<int, size_t>> stack{{root, 0}};
    while (!stack.empty()) {
      auto& [u, next] = stack.back();
      if (next < primary_kids[u].size()) {
        int v = primary_kids[u][next++];
        if (!state[v]) {
          state[v] = 1;
          stack.emplace_back(v, 0);
        }
      } else {
        order.push_back(u);
        stack.pop_back();
      }
    }
    for (int u : order) {
      if (units[u].terminal) {
        yields[u] = {*units[u].terminal};
        continue;
      }
      std::set<int> merged;
      for (int v : primary_kids[u]) merged.insert(yields[v].begin(), yields[v].end());
      yields[u].assign(merged.begin(), merged.end());
    }
  }

  p.terminals_ = std::move(terminals);
  p.units_ = std::move(units);
  p.edges_ = std::move(edges);
  p.root_ = p.units_[root].id;
  p.unit_index_ = std::move(index);
  p.yields_ = std::move(yields);
  p.parent_ = std::move(parent);
  p.incoming_ = std::move(incoming);
  return p;
}

int Passage::index_of(const std::string& unit_id) const {
  auto it = unit_index_.find(unit_id);
  if (it == unit_index_.end())
    throw Error(ErrorCode::UnknownUnit, "unknown unit '" + unit_id + "'");
  return it->second;
}

bool Passage::has_unit(const std::string& unit_id) const {
  return unit_index_.count(unit_id) > 0;
}

const Unit& Passage::unit(const std::string& unit_id) const { return units_[index_of(unit_id)]; }

const std::vector<int>& Passage::yield(const std::string& unit_id) const {
  return yields_[index_of(unit_id)];
}

bool Passage::discontinuous(const std::string& unit_id) const {
  const auto& y = yields_[index_of(unit_id)];
  if (y.empty()) return false;
  return y.back() - y.front() + 1 != static_cast<int>(y.size());
}

std::vector<std::string> Passage::primary_children(const std::string& unit_id) const {
  index_of(unit_id);
  std::vector<std::string> kids;
  for (const Edge& e : edges_)
    if (!e.remote && e.parent == unit_id) kids.push_back(e.child);
  return kids;
}

const std::string& Passage::primary_parent(const std::string& unit_id) const {
  return parent_[index_of(unit_id)];
}

const Category& Passage::incoming_category(const std::string& unit_id) const {
  return incoming_[index_of(unit_id)];
}

std::pair<std::vector<Edge>, std::vector<Edge>> edge_partition(const Passage& p) {
  std::pair<std::vector<Edge>, std::vector<Edge>> parts;
  for (const Edge& e : p.edges()) (e.remote ? parts.second : parts.first).push_back(e);
  return parts;
}

}  // namespace ucca
