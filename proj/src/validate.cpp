#include "validate.hpp"

#include <algorithm>
#include <climits>
#include <deque>
#include <map>
#include <set>

namespace ucca {

const char* severity_name(Severity s) {
  return s == Severity::Error ? "error" : "warning";
}

namespace {

int yield_min(const Passage& p, const std::string& unit_id) {
  const auto& y = p.yield(unit_id);
  return y.empty() ? INT_MAX : y.front();
}

bool is_ancestor(const Passage& p, const std::string& candidate, const std::string& unit_id) {
  // candidate strictly above unit_id on the primary parent chain?
  std::string cur = p.primary_parent(unit_id);
  while (!cur.empty()) {
    if (cur == candidate) return true;
    cur = p.primary_parent(cur);
  }
  return false;
}

}  // namespace

std::vector<Violation> validate(const Passage& p) {
  std::vector<Violation> out;
  auto add = [&](const char* rule, Severity sev, const std::string& unit, std::string msg) {
    out.push_back(Violation{rule, sev, unit, std::move(msg)});
  };

  for (const Unit& u : p.units()) {
    int main_relations = 0;  // primary P/S edges out of u
    bool scene = false;      // any P/S child, remote included
    bool has_participant = false, has_center = false, has_modifier = false;
    for (const Edge& e : p.edges()) {
      if (e.parent != u.id) continue;
      if (e.category == cat::P || e.category == cat::S) {
        scene = true;
        if (!e.remote) ++main_relations;
      }
      if (e.category == cat::A) has_participant = true;
      if (e.category == cat::C) has_center = true;
      if (!e.remote && (e.category == cat::E || e.category == cat::N)) has_modifier = true;
    }
    if (scene && !has_participant)
      add("R1", Severity::Warning, u.id,
          "scene unit '" + u.id + "' has a main relation but no Participant");
    if (main_relations > 1)
      add("R2", Severity::Error, u.id,
          "unit '" + u.id + "' has " + std::to_string(main_relations) + " main relations");
    if (has_modifier && !has_center)
      add("R3", Severity::Warning, u.id,
          "unit '" + u.id + "' has Elaborator/Connector children but no Center");
  }

  // R4/R5 cannot survive Passage::build; they stay in the registry for raw
  // structures checked before construction (see rule helpers in tests).
  for (const Edge& e : p.edges()) {
    if (p.unit(e.parent).implicit)
      add("R4", Severity::Error, e.parent, "implicit unit '" + e.parent + "' has children");
    if (e.remote && is_ancestor(p, e.child, e.parent))
      add("R5", Severity::Error, e.parent,
          "remote edge from '" + e.parent + "' points at its own ancestor '" + e.child + "'");
    if (e.category == cat::U) {
      for (int pos : p.yield(e.child)) {
        if (!p.terminals()[pos - 1].punct) {
          add("R6", Severity::Error, e.child,
              "U edge to '" + e.child + "' covers non-punctuation terminal " +
                  std::to_string(pos));
          break;
        }
      }
    }
  }

  std::stable_sort(out.begin(), out.end(), [&](const Violation& a, const Violation& b) {
    auto ka = std::make_tuple(a.rule_id, a.unit_id.empty() ? INT_MAX : yield_min(p, a.unit_id),
                              id_sort_key(a.unit_id));
    auto kb = std::make_tuple(b.rule_id, b.unit_id.empty() ? INT_MAX : yield_min(p, b.unit_id),
                              id_sort_key(b.unit_id));
    return ka < kb;
  });
  return out;
}

namespace {

// Structural signature over the primary tree; ids play no part, so two
// isomorphic passages sort their siblings identically.
std::string signature(const Passage& p, const std::string& unit_id,
                      std::map<std::string, std::string>& memo) {
  auto it = memo.find(unit_id);
  if (it != memo.end()) return it->second;
  const Unit& u = p.unit(unit_id);
  std::string sig = "(";
  if (u.implicit) sig += "I";
  if (u.terminal) sig += "t" + std::to_string(*u.terminal);
  std::vector<std::string> parts;
  for (const Edge& e : p.edges())
    if (!e.remote && e.parent == unit_id)
      parts.push_back(e.category.label + signature(p, e.child, memo));
  std::sort(parts.begin(), parts.end());
  for (const auto& s : parts) sig += s;
  sig += ")";
  memo.emplace(unit_id, sig);
  return sig;
}

}  // namespace

Passage normalize(const Passage& p) {
  std::map<std::string, std::string> memo;
  std::map<std::string, std::string> rename;
  int counter = 0;
  auto fresh = [&] { return "1." + std::to_string(++counter); };

  rename[p.root()] = fresh();
  std::deque<std::string> queue{p.root()};
  while (!queue.empty()) {
    std::string cur = queue.front();
    queue.pop_front();
    struct Kid {
      int ymin;
      std::string cat, sig, id;
    };
    std::vector<Kid> kids;
    for (const Edge& e : p.edges()) {
      if (e.remote || e.parent != cur) continue;
      const auto& y = p.yield(e.child);
      kids.push_back(Kid{y.empty() ? INT_MAX : y.front(), e.category.label,
                         signature(p, e.child, memo), e.child});
    }
    std::sort(kids.begin(), kids.end(), [](const Kid& a, const Kid& b) {
      return std::tie(a.ymin, a.cat, a.sig, a.id) < std::tie(b.ymin, b.cat, b.sig, b.id);
    });
    for (const Kid& k : kids) {
      if (rename.count(k.id)) continue;  // parallel categories reach the child twice
      rename[k.id] = fresh();
      queue.push_back(k.id);
    }
  }

  std::vector<Unit> units;
  for (const Unit& u : p.units()) {
    Unit v = u;
    v.id = rename.at(u.id);
    units.push_back(std::move(v));
  }
  std::vector<Edge> edges;
  for (const Edge& e : p.edges()) {
    Edge f = e;
    f.parent = rename.at(e.parent);
    f.child = rename.at(e.child);
    edges.push_back(std::move(f));
  }
  Passage out = Passage::build(p.id(), p.terminals(), std::move(units), std::move(edges));
  out.set_extra(p.extra());
  return out;
}

bool graphs_equal(const Passage& a, const Passage& b) {
  if (a.terminals().size() != b.terminals().size()) return false;
  for (size_t i = 0; i < a.terminals().size(); ++i) {
    const Terminal &ta = a.terminals()[i], &tb = b.terminals()[i];
    if (ta.position != tb.position || ta.text != tb.text || ta.punct != tb.punct) return false;
  }
  Passage na = normalize(a), nb = normalize(b);
  if (na.units().size() != nb.units().size() || na.edges().size() != nb.edges().size())
    return false;
  for (size_t i = 0; i < na.units().size(); ++i) {
    const Unit &ua = na.units()[i], &ub = nb.units()[i];
    if (ua.id != ub.id || ua.implicit != ub.implicit || ua.terminal != ub.terminal) return false;
  }
  for (size_t i = 0; i < na.edges().size(); ++i) {
    const Edge &ea = na.edges()[i], &eb = nb.edges()[i];
    if (ea.parent != eb.parent || ea.child != eb.child || ea.category != eb.category ||
        ea.remote != eb.remote)
      return false;
  }
  return true;
}

}  // namespace ucca
