#ifndef UCCA_EVALUATE_HPP
#define UCCA_EVALUATE_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "graph.hpp"

namespace ucca {

// Labeled precision/recall/F1 counts for one edge class. 0/0 precision or
// recall is undefined (rendered "--") and forces F1 to 0.
struct ScoreTriple {
  long matched = 0;
  long predicted = 0;
  long gold = 0;

  bool lp_defined() const { return predicted > 0; }
  bool lr_defined() const { return gold > 0; }
  double lp() const { return lp_defined() ? 100.0 * matched / predicted : 0.0; }
  double lr() const { return lr_defined() ? 100.0 * matched / gold : 0.0; }
  double lf() const {
    if (!lp_defined() || !lr_defined()) return 0.0;
    double p = lp(), r = lr();
    if (p + r == 0.0) return 0.0;
    return 2.0 * p * r / (p + r);
  }

  ScoreTriple& operator+=(const ScoreTriple& o) {
    matched += o.matched;
    predicted += o.predicted;
    gold += o.gold;
    return *this;
  }
};

struct EvalOptions {
  bool include_punct = true;      // score U edges in the coarse metric
  bool implicit_extension = false;  // add the separate implicit-unit triple
};

// Category sets of the fine-grained report; Function, Relator and U stay out.
inline const std::map<std::string, std::vector<Category>> kCategorySets = {
    {"scene", {cat::S, cat::P, cat::A, cat::D}},
    {"non_scene", {cat::E, cat::N, cat::C}},
    {"linkage", {cat::H, cat::L, cat::G}},
};

struct EvalReport {
  ScoreTriple primary;
  ScoreTriple remote;
  std::optional<ScoreTriple> implicit;
  std::map<Category, ScoreTriple> per_category;       // primary+remote, per label
  std::map<std::string, ScoreTriple> category_sets;   // keys of kCategorySets

  EvalReport& operator+=(const EvalReport& o);
};

enum class EdgeClass { Primary, Remote };

// An edge as the metric sees it: child yield plus label. T attachments and
// edges into implicit units never reach this view.
struct ScoredEdge {
  std::vector<int> yield;
  Category category;
  std::string parent, child;
  bool remote = false;
};

std::vector<ScoredEdge> scored_edges(const Passage& p, EdgeClass klass,
                                     const EvalOptions& opts = {});

// Maximum multiset matching on (child yield, label); each gold edge pairs
// with at most one predicted edge. Pairs come out lowest yield-minimum
// first. Throws TokenMismatch when the passages disagree on tokens.
std::vector<std::pair<ScoredEdge, ScoredEdge>> match_edges(const Passage& pred,
                                                           const Passage& gold,
                                                           EdgeClass klass,
                                                           const EvalOptions& opts = {});

EvalReport score_pair(const Passage& pred, const Passage& gold, const EvalOptions& opts = {});

// Implicit-unit extension: units match on (label, parent yield).
ScoreTriple score_implicit(const Passage& pred, const Passage& gold);

std::map<std::string, ScoreTriple> fine_grained(const Passage& pred, const Passage& gold,
                                                const EvalOptions& opts = {});

// Micro-average across passages: counts are summed, ratios taken once.
class CorpusAccumulator {
 public:
  explicit CorpusAccumulator(EvalOptions opts = {}) : opts_(opts) {}
  void add_pair(const Passage& pred, const Passage& gold);
  void add_report(const EvalReport& report);
  const EvalReport& report() const { return report_; }
  const EvalOptions& options() const { return opts_; }
  size_t pairs() const { return pairs_; }

 private:
  EvalOptions opts_;
  EvalReport report_;
  size_t pairs_ = 0;
};

EvalReport aggregate_corpus(
    const std::vector<std::pair<const Passage*, const Passage*>>& pairs,
    const EvalOptions& opts = {});

// Pairs two sides by passage id; throws MissingPassage for one-sided ids.
std::vector<std::pair<const Passage*, const Passage*>> pair_by_id(
    const std::vector<const Passage*>& pred, const std::vector<const Passage*>& gold);

// Table-2-style text table plus a key=value block, one decimal place.
std::string format_report(const EvalReport& report, bool per_category = false);
std::string format_percent(double value, bool defined);

}  // namespace ucca

#endif
