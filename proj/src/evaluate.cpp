#include "evaluate.hpp"

#include <algorithm>
#include <climits>
#include <cstdio>
#include <sstream>

namespace ucca {

namespace {

void check_tokens(const Passage& pred, const Passage& gold) {
  const auto &a = pred.terminals(), &b = gold.terminals();
  if (a.size() != b.size())
    throw Error(ErrorCode::TokenMismatch,
                "passages disagree on token count (" + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()) + ")");
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i].text != b[i].text)
      throw Error(ErrorCode::TokenMismatch,
                  "token " + std::to_string(i + 1) + " differs: '" + a[i].text + "' vs '" +
                      b[i].text + "'");
}

using MatchKey = std::pair<std::vector<int>, std::string>;

MatchKey key_of(const ScoredEdge& e) { return {e.yield, e.category.label}; }

bool scored_edge_less(const ScoredEdge& a, const ScoredEdge& b) {
  int ya = a.yield.empty() ? INT_MAX : a.yield.front();
  int yb = b.yield.empty() ? INT_MAX : b.yield.front();
  return std::tie(ya, a.yield, a.category.label, a.parent, a.child) <
         std::tie(yb, b.yield, b.category.label, b.parent, b.child);
}

}  // namespace

EvalReport& EvalReport::operator+=(const EvalReport& o) {
  primary += o.primary;
  remote += o.remote;
  if (o.implicit) {
    if (!implicit) implicit = ScoreTriple{};
    *implicit += *o.implicit;
  }
  for (const auto& [c, t] : o.per_category) per_category[c] += t;
  for (const auto& [s, t] : o.category_sets) category_sets[s] += t;
  return *this;
}

std::vector<ScoredEdge> scored_edges(const Passage& p, EdgeClass klass,
                                     const EvalOptions& opts) {
  std::vector<ScoredEdge> out;
  for (const Edge& e : p.edges()) {
    if (e.remote != (klass == EdgeClass::Remote)) continue;
    if (p.unit(e.child).implicit) continue;  // the core metric disregards implicit units
    if (!opts.include_punct && e.category == cat::U) continue;
    out.push_back(ScoredEdge{p.yield(e.child), e.category, e.parent, e.child, e.remote});
  }
  std::sort(out.begin(), out.end(), scored_edge_less);
  return out;
}

std::vector<std::pair<ScoredEdge, ScoredEdge>> match_edges(const Passage& pred,
                                                           const Passage& gold,
                                                           EdgeClass klass,
                                                           const EvalOptions& opts) {
  check_tokens(pred, gold);
  auto pe = scored_edges(pred, klass, opts);
  auto ge = scored_edges(gold, klass, opts);
  std::map<MatchKey, std::vector<const ScoredEdge*>> by_key;
  for (const ScoredEdge& e : pe) by_key[key_of(e)].push_back(&e);
  std::vector<std::pair<ScoredEdge, ScoredEdge>> pairs;
  std::map<MatchKey, size_t> used;
  for (const ScoredEdge& g : ge) {
    auto it = by_key.find(key_of(g));
    if (it == by_key.end()) continue;
    size_t& next = used[it->first];
    if (next >= it->second.size()) continue;  // duplicates need duplicates
    pairs.emplace_back(*it->second[next++], g);
  }
  std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
    return scored_edge_less(a.second, b.second);
  });
  return pairs;
}

namespace {

// Counts for one class plus its per-category breakdown.
void tally(const Passage& pred, const Passage& gold, EdgeClass klass, const EvalOptions& opts,
           ScoreTriple& triple, std::map<Category, ScoreTriple>& per_category) {
  auto pe = scored_edges(pred, klass, opts);
  auto ge = scored_edges(gold, klass, opts);
  triple.predicted += static_cast<long>(pe.size());
  triple.gold += static_cast<long>(ge.size());
  for (const ScoredEdge& e : pe) per_category[e.category].predicted++;
  for (const ScoredEdge& e : ge) per_category[e.category].gold++;

  std::map<MatchKey, long> pred_count;
  for (const ScoredEdge& e : pe) pred_count[key_of(e)]++;
  std::map<MatchKey, long> gold_count;
  for (const ScoredEdge& e : ge) gold_count[key_of(e)]++;
  for (const auto& [key, gc] : gold_count) {
    auto it = pred_count.find(key);
    if (it == pred_count.end()) continue;
    long m = std::min(gc, it->second);
    triple.matched += m;
    per_category[Category{key.second}].matched += m;
  }
}

struct ImplicitEntry {
  std::vector<int> parent_yield;
  std::string label;
};

std::vector<ImplicitEntry> implicit_entries(const Passage& p) {
  std::vector<ImplicitEntry> out;
  for (const Unit& u : p.units()) {
    if (!u.implicit) continue;
    out.push_back(ImplicitEntry{p.yield(p.primary_parent(u.id)),
                                p.incoming_category(u.id).label});
  }
  return out;
}

}  // namespace

ScoreTriple score_implicit(const Passage& pred, const Passage& gold) {
  check_tokens(pred, gold);
  auto pi = implicit_entries(pred);
  auto gi = implicit_entries(gold);
  ScoreTriple t;
  t.predicted = static_cast<long>(pi.size());
  t.gold = static_cast<long>(gi.size());
  std::map<std::pair<std::vector<int>, std::string>, long> pred_count;
  for (const auto& e : pi) pred_count[{e.parent_yield, e.label}]++;
  std::map<std::pair<std::vector<int>, std::string>, long> gold_count;
  for (const auto& e : gi) gold_count[{e.parent_yield, e.label}]++;
  for (const auto& [key, gc] : gold_count) {
    auto it = pred_count.find(key);
    if (it != pred_count.end()) t.matched += std::min(gc, it->second);
  }
  return t;
}

EvalReport score_pair(const Passage& pred, const Passage& gold, const EvalOptions& opts) {
  check_tokens(pred, gold);
  EvalReport r;
  tally(pred, gold, EdgeClass::Primary, opts, r.primary, r.per_category);
  tally(pred, gold, EdgeClass::Remote, opts, r.remote, r.per_category);
  for (const auto& [name, cats] : kCategorySets) {
    ScoreTriple t;
    for (const Category& c : cats) {
      auto it = r.per_category.find(c);
      if (it != r.per_category.end()) t += it->second;
    }
    r.category_sets[name] = t;
  }
  if (opts.implicit_extension) r.implicit = score_implicit(pred, gold);
  return r;
}

std::map<std::string, ScoreTriple> fine_grained(const Passage& pred, const Passage& gold,
                                                const EvalOptions& opts) {
  return score_pair(pred, gold, opts).category_sets;
}

void CorpusAccumulator::add_pair(const Passage& pred, const Passage& gold) {
  report_ += score_pair(pred, gold, opts_);
  pairs_++;
}

void CorpusAccumulator::add_report(const EvalReport& report) {
  report_ += report;
  pairs_++;
}

EvalReport aggregate_corpus(
    const std::vector<std::pair<const Passage*, const Passage*>>& pairs,
    const EvalOptions& opts) {
  CorpusAccumulator acc(opts);
  for (const auto& [pred, gold] : pairs) acc.add_pair(*pred, *gold);
  return acc.report();
}

std::vector<std::pair<const Passage*, const Passage*>> pair_by_id(
    const std::vector<const Passage*>& pred, const std::vector<const Passage*>& gold) {
  std::map<std::string, const Passage*> gold_by_id;
  for (const Passage* g : gold)
    if (!gold_by_id.emplace(g->id(), g).second)
      throw Error(ErrorCode::InvalidArgument, "duplicate gold passage id '" + g->id() + "'");
  std::vector<std::pair<const Passage*, const Passage*>> out;
  std::map<std::string, const Passage*> pred_by_id;
  for (const Passage* p : pred) {
    if (!pred_by_id.emplace(p->id(), p).second)
      throw Error(ErrorCode::InvalidArgument, "duplicate predicted passage id '" + p->id() + "'");
    auto it = gold_by_id.find(p->id());
    if (it == gold_by_id.end())
      throw Error(ErrorCode::MissingPassage,
                  "passage '" + p->id() + "' has no gold counterpart");
    out.emplace_back(p, it->second);
  }
  for (const Passage* g : gold)
    if (!pred_by_id.count(g->id()))
      throw Error(ErrorCode::MissingPassage,
                  "passage '" + g->id() + "' has no predicted counterpart");
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.second->id() < b.second->id(); });
  return out;
}

std::string format_percent(double value, bool defined) {
  if (!defined) return "--";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", value);
  return buf;
}

namespace {

void format_triple_cells(std::ostringstream& os, const ScoreTriple& t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, " %6s %6s %6s", format_percent(t.lp(), t.lp_defined()).c_str(),
                format_percent(t.lr(), t.lr_defined()).c_str(),
                format_percent(t.lf(), t.lp_defined() || t.lr_defined()).c_str());
  os << buf;
}

void emit_kv(std::ostringstream& os, const std::string& prefix, const ScoreTriple& t) {
  os << prefix << ".matched=" << t.matched << "\n";
  os << prefix << ".predicted=" << t.predicted << "\n";
  os << prefix << ".gold=" << t.gold << "\n";
  os << prefix << ".lp=" << format_percent(t.lp(), t.lp_defined()) << "\n";
  os << prefix << ".lr=" << format_percent(t.lr(), t.lr_defined()) << "\n";
  os << prefix << ".lf=" << format_percent(t.lf(), true) << "\n";
}

}  // namespace

std::string format_report(const EvalReport& report, bool per_category) {
  std::ostringstream os;
  os << "                Primary              Remote\n";
  os << "            LP     LR     LF     LP     LR     LF\n";
  os << "  coarse  ";
  format_triple_cells(os, report.primary);
  format_triple_cells(os, report.remote);
  os << "\n\nFine-grained          LP     LR     LF\n";
  for (const char* name : {"scene", "non_scene", "linkage"}) {
    auto it = report.category_sets.find(name);
    if (it == report.category_sets.end()) continue;
    char label[32];
    std::snprintf(label, sizeof label, "  %-12s    ", name);
    os << label;
    format_triple_cells(os, it->second);
    os << "\n";
  }
  if (report.implicit) {
    os << "\nImplicit              LP     LR     LF\n  implicit        ";
    format_triple_cells(os, *report.implicit);
    os << "\n";
  }
  if (per_category) {
    os << "\nPer category          LP     LR     LF\n";
    for (const auto& [c, t] : report.per_category) {
      char label[32];
      std::snprintf(label, sizeof label, "  %-12s    ", c.label.c_str());
      os << label;
      format_triple_cells(os, t);
      os << "\n";
    }
  }
  os << "\n";
  emit_kv(os, "primary", report.primary);
  emit_kv(os, "remote", report.remote);
  for (const auto& [name, t] : report.category_sets) emit_kv(os, "set/" + name, t);
  if (report.implicit) emit_kv(os, "implicit", *report.implicit);
  if (per_category)
    for (const auto& [c, t] : report.per_category) emit_kv(os, "category/" + c.label, t);
  return os.str();
}

}  // namespace ucca
