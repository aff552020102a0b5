#include "convert.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <set>
#include <sstream>

namespace ucca {

HeadRules::HeadRules() {
  for (const char* c : {"C", "P", "S", "H", "A", "D", "E", "N", "R", "L", "G", "F", "U", "T"})
    order_.push_back(c);
}

HeadRules HeadRules::parse(const std::string& comma_separated) {
  HeadRules r;
  if (comma_separated.empty()) return r;
  r.order_.clear();
  std::string item;
  std::istringstream in(comma_separated);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) r.order_.push_back(item);
  }
  if (r.order_.empty()) throw Error(ErrorCode::InvalidArgument, "empty head rule list");
  return r;
}

int HeadRules::priority(const Category& c) const {
  for (size_t i = 0; i < order_.size(); ++i)
    if (order_[i] == c.label) return static_cast<int>(i);
  return static_cast<int>(order_.size());
}

Passage to_constituency(const Passage& p) {
  std::vector<Edge> edges;
  for (const Edge& e : p.edges())
    if (!e.remote) edges.push_back(e);
  Passage out = Passage::build(p.id(), p.terminals(), p.units(), std::move(edges));
  out.set_extra(p.extra());
  return out;
}

namespace {

// Recursive head token of a unit: the highest-priority primary child wins,
// pre-terminals break ties, then the leftmost yield. Units with no terminal
// descendants have no head and fall out of the conversion.
int head_of(const Passage& p, const std::string& unit_id, const HeadRules& rules,
            std::map<std::string, int>& memo) {
  auto it = memo.find(unit_id);
  if (it != memo.end()) return it->second;
  const Unit& u = p.unit(unit_id);
  int result = 0;
  if (u.terminal) {
    result = *u.terminal;
  } else {
    int best_prio = INT_MAX, best_ymin = INT_MAX;
    bool best_pre = false;
    std::string best;
    for (const Edge& e : p.edges()) {
      if (e.remote || e.parent != unit_id) continue;
      if (head_of(p, e.child, rules, memo) == 0) continue;
      const auto& y = p.yield(e.child);
      int prio = rules.priority(e.category);
      bool pre = p.unit(e.child).terminal.has_value();
      int ymin = y.empty() ? INT_MAX : y.front();
      if (std::make_tuple(prio, !pre, ymin) < std::make_tuple(best_prio, !best_pre, best_ymin)) {
        best_prio = prio;
        best_pre = pre;
        best_ymin = ymin;
        best = e.child;
      }
    }
    if (!best.empty()) result = head_of(p, best, rules, memo);
  }
  memo[unit_id] = result;
  return result;
}

}  // namespace

BilexicalGraph to_bilexical(const Passage& p, const HeadRules& rules, bool tree_mode) {
  BilexicalGraph b;
  b.passage_id = p.id();
  for (const Terminal& t : p.terminals()) b.tokens.push_back({t.position, t.text, t.punct});
  b.inner.assign(p.terminals().size(), "");

  std::map<std::string, int> memo;
  for (const Unit& u : p.units()) {
    if (u.terminal) {
      // pre-terminal attachment label; the root-as-pre-terminal corner case
      // leaves it empty and from_bilexical falls back to C
      b.inner[*u.terminal - 1] = p.incoming_category(u.id).label;
    }
  }

  for (const Unit& u : p.units()) {
    if (u.terminal || u.implicit) continue;
    int h = head_of(p, u.id, rules, memo);
    if (h == 0) continue;
    for (const Edge& e : p.edges()) {
      if (e.parent != u.id) continue;
      if (e.remote && tree_mode) continue;
      int dep = head_of(p, e.child, rules, memo);
      if (dep == 0) continue;
      if (!e.remote) {
        // dep == h marks the head chain; the unit's own label travels on
        // the arc into h one level up
        if (dep == h) continue;
        b.arcs.push_back({h, dep, e.category, false});
      } else {
        // a remote onto the unit's own head token cannot be a self arc;
        // the virtual root stands in (remote sources never affect scores)
        b.arcs.push_back({dep == h ? 0 : h, dep, e.category, true});
      }
    }
  }
  b.root = head_of(p, p.root(), rules, memo);
  if (b.root == 0) b.root = 1;  // cannot happen for a valid passage
  std::sort(b.arcs.begin(), b.arcs.end(), [](const BilexArc& a, const BilexArc& c) {
    return std::tie(a.dep, a.remote, a.head, a.category.label) <
           std::tie(c.dep, c.remote, c.head, c.category.label);
  });
  return b;
}

Passage from_bilexical(const BilexicalGraph& b, const HeadRules& rules) {
  if (b.tokens.empty()) throw Error(ErrorCode::InvalidArgument, "bilexical graph has no tokens");
  const int n = static_cast<int>(b.tokens.size());
  if (b.root < 1 || b.root > n)
    throw Error(ErrorCode::InvalidArgument, "bilexical root out of range");

  std::vector<Terminal> terms;
  for (const BilexToken& t : b.tokens) terms.push_back({t.position, t.text, t.punct});

  std::vector<std::vector<const BilexArc*>> deps(n + 1);  // primary deps per head
  std::vector<const BilexArc*> remotes;
  std::vector<bool> has_head(n + 1, false);
  for (const BilexArc& a : b.arcs) {
    if (a.dep < 1 || a.dep > n || a.head < 0 || a.head > n)
      throw Error(ErrorCode::InvalidArgument, "bilexical arc position out of range");
    if (a.head == a.dep) continue;  // self arcs are unrepresentable
    if (a.remote) {
      remotes.push_back(&a);
      continue;
    }
    if (a.head == 0) continue;  // extra roots are treated as headless
    if (has_head[a.dep])
      throw Error(ErrorCode::InvalidArgument,
                  "token " + std::to_string(a.dep) + " has two primary heads");
    has_head[a.dep] = true;
    deps[a.head].push_back(&a);
  }

  auto preterm_id = [](int pos) { return "1." + std::to_string(pos + 1); };
  std::vector<Unit> units;
  std::vector<Edge> edges;
  units.push_back({"1.1", false, {}});  // root unit, headed by b.root
  for (int pos = 1; pos <= n; ++pos) units.push_back({preterm_id(pos), false, pos});

  std::set<int> heads{b.root};
  for (int h = 1; h <= n; ++h)
    if (!deps[h].empty()) heads.insert(h);
  std::map<int, std::string> unit_of_head;
  int next = n + 2;
  for (int h : heads) {
    if (h == b.root) {
      unit_of_head[h] = "1.1";
    } else {
      unit_of_head[h] = "1." + std::to_string(next++);
      units.push_back({unit_of_head[h], false, {}});
    }
  }

  // Attach each head's pre-terminal with its inner label, bumped to the
  // best sibling priority so a re-conversion picks the same head again.
  for (int h : heads) {
    std::string label = h - 1 < static_cast<int>(b.inner.size()) ? b.inner[h - 1] : "";
    if (label.empty()) label = "C";
    Category best{label};
    for (const BilexArc* a : deps[h])
      if (rules.priority(a->category) < rules.priority(best)) best = a->category;
    edges.push_back({unit_of_head[h], preterm_id(h), best, false});
    for (const BilexArc* a : deps[h]) {
      auto it = unit_of_head.find(a->dep);
      std::string child = it != unit_of_head.end() ? it->second : preterm_id(a->dep);
      edges.push_back({unit_of_head[h], child, a->category, false});
    }
  }

  // Headless non-root tokens hang flat off the root unit.
  for (int pos = 1; pos <= n; ++pos) {
    if (pos == b.root || has_head[pos]) continue;
    if (heads.count(pos)) continue;  // a head without its own head: see below
    edges.push_back({"1.1", preterm_id(pos), terms[pos - 1].punct ? cat::U : cat::H, false});
  }
  for (int h : heads) {
    if (h == b.root || has_head[h]) continue;
    edges.push_back({"1.1", unit_of_head[h], terms[h - 1].punct ? cat::U : cat::H, false});
  }

  // Remote arcs re-attach from the root unit onto the dependent's
  // pre-terminal. The metric only reads the child yield and the label, and
  // this placement is the one that survives re-conversion even when a head
  // tie flips between equal-priority pre-terminals.
  std::sort(remotes.begin(), remotes.end(), [](const BilexArc* a, const BilexArc* b2) {
    return std::tie(a->dep, a->head, a->category.label) <
           std::tie(b2->dep, b2->head, b2->category.label);
  });
  for (const BilexArc* a : remotes) {
    std::string parent = "1.1";
    std::string child = preterm_id(a->dep);
    bool dup = false;
    for (const Edge& e : edges)
      if (e.parent == parent && e.child == child && e.category == a->category && e.remote)
        dup = true;
    if (!dup) edges.push_back({parent, child, a->category, true});
  }

  return Passage::build(b.passage_id.empty() ? "converted" : b.passage_id, std::move(terms),
                        std::move(units), std::move(edges));
}

std::string bilexical_to_tsv(const BilexicalGraph& b) {
  std::ostringstream os;
  os << "# passage " << b.passage_id << "\n";
  const int n = static_cast<int>(b.tokens.size());
  std::vector<std::string> deprel(n + 1, "_");
  std::vector<int> head(n + 1, 0);
  std::vector<std::string> remote_heads(n + 1, "_");
  std::set<int> is_head;
  for (const BilexArc& a : b.arcs)
    if (!a.remote) is_head.insert(a.head);
  for (const BilexArc& a : b.arcs) {
    if (a.remote) {
      std::string item = std::to_string(a.head) + ":" + a.category.label;
      if (remote_heads[a.dep] == "_")
        remote_heads[a.dep] = item;
      else
        remote_heads[a.dep] += "|" + item;
    } else {
      head[a.dep] = a.head;
      deprel[a.dep] = a.category.label;
    }
  }
  auto inner_of = [&](int pos) {
    std::string s = pos - 1 < static_cast<int>(b.inner.size()) ? b.inner[pos - 1] : "";
    return s.empty() ? "C" : s;
  };
  deprel[b.root] = "ROOT/" + inner_of(b.root);
  for (int h : is_head)
    if (h >= 1 && h != b.root) deprel[h] += "/" + inner_of(h);
  for (int pos = 1; pos <= n; ++pos) {
    os << pos << "\t" << b.tokens[pos - 1].text << "\t" << head[pos] << "\t" << deprel[pos]
       << "\t" << remote_heads[pos] << "\n";
  }
  return os.str();
}

BilexicalGraph bilexical_from_tsv(std::string_view tsv) {
  BilexicalGraph b;
  std::istringstream in{std::string(tsv)};
  std::string line;
  std::vector<std::array<std::string, 5>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string marker = "# passage ";
      if (line.rfind(marker, 0) == 0) b.passage_id = line.substr(marker.size());
      continue;
    }
    std::array<std::string, 5> cells;
    size_t start = 0;
    for (int i = 0; i < 5; ++i) {
      size_t tab = line.find('\t', start);
      if (tab == std::string::npos && i < 4)
        throw Error(ErrorCode::InvalidArgument,
                    "bilexical row needs 5 tab-separated columns: " + line);
      cells[i] = line.substr(start, tab == std::string::npos ? std::string::npos : tab - start);
      start = tab == std::string::npos ? line.size() : tab + 1;
    }
    rows.push_back(std::move(cells));
  }
  if (rows.empty()) throw Error(ErrorCode::InvalidArgument, "empty bilexical table");

  b.inner.assign(rows.size(), "");
  int pos = 0;
  for (const auto& cells : rows) {
    ++pos;
    if (std::to_string(pos) != cells[0])
      throw Error(ErrorCode::InvalidArgument, "bilexical rows must be numbered 1..n");
    BilexToken t;
    t.position = pos;
    t.text = cells[1];
    t.punct = !t.text.empty() && std::all_of(t.text.begin(), t.text.end(), [](unsigned char c) {
                return std::ispunct(c);
              });
    b.tokens.push_back(t);

    int head = 0;
    try {
      head = std::stoi(cells[2]);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad HEAD column: " + cells[2]);
    }
    std::string deprel = cells[3];
    std::string outer = deprel, inner;
    auto slash = deprel.find('/');
    if (slash != std::string::npos) {
      outer = deprel.substr(0, slash);
      inner = deprel.substr(slash + 1);
    }
    b.inner[pos - 1] = inner;
    if (outer == "ROOT" || (head == 0 && b.root == 0 && outer != "_")) {
      b.root = pos;
    } else if (head != 0 && outer != "_") {
      b.arcs.push_back({head, pos, Category{outer}, false});
    }
    if (cells[4] != "_" && !cells[4].empty()) {
      std::istringstream rh(cells[4]);
      std::string item;
      while (std::getline(rh, item, '|')) {
        auto colon = item.find(':');
        if (colon == std::string::npos)
          throw Error(ErrorCode::InvalidArgument, "bad REMOTE-HEADS item: " + item);
        b.arcs.push_back({std::stoi(item.substr(0, colon)), pos,
                          Category{item.substr(colon + 1)}, true});
      }
    }
  }
  if (b.root == 0) b.root = 1;
  return b;
}

Conversion parse_conversion(const std::string& name) {
  if (name == "constituency") return Conversion::Constituency;
  if (name == "bilexical-tree") return Conversion::BilexicalTree;
  if (name == "bilexical-dag") return Conversion::BilexicalDag;
  throw Error(ErrorCode::InvalidArgument, "unknown conversion '" + name + "'");
}

Passage roundtrip(const Passage& p, Conversion conversion, const HeadRules& rules) {
  switch (conversion) {
    case Conversion::Constituency: return to_constituency(p);
    case Conversion::BilexicalTree: return from_bilexical(to_bilexical(p, rules, true), rules);
    case Conversion::BilexicalDag: return from_bilexical(to_bilexical(p, rules, false), rules);
  }
  throw Error(ErrorCode::InvalidArgument, "bad conversion");
}

EvalReport upper_bound(const std::vector<const Passage*>& gold_corpus, Conversion conversion,
                       const HeadRules& rules, const EvalOptions& opts) {
  CorpusAccumulator acc(opts);
  for (const Passage* g : gold_corpus) acc.add_pair(roundtrip(*g, conversion, rules), *g);
  return acc.report();
}

}  // namespace ucca
