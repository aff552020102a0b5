#ifndef UCCA_CONVERT_HPP
#define UCCA_CONVERT_HPP

#include <string>
#include <vector>

#include "evaluate.hpp"
#include "graph.hpp"

namespace ucca {

// Priority list over categories used to pick a unit's lexical head.
// Ties prefer a pre-terminal child, then the leftmost yield.
class HeadRules {
 public:
  HeadRules();  // default: C P S H A D E N R L G F U T
  static HeadRules parse(const std::string& comma_separated);

  int priority(const Category& c) const;  // lower wins; unknown labels rank last
  const std::vector<std::string>& order() const { return order_; }

 private:
  std::vector<std::string> order_;
};

struct BilexToken {
  int position = 0;
  std::string text;
  bool punct = false;
};

struct BilexArc {
  int head = 0;  // 1-based position; 0 is the virtual root
  int dep = 0;
  Category category;
  bool remote = false;
};

// Token-level approximation of a passage. "inner" keeps, per token, the
// label of its pre-terminal attachment so that flat structure reconstructs
// exactly; DEPREL serializes it as "outer/inner" on head tokens.
struct BilexicalGraph {
  std::string passage_id;
  std::vector<BilexToken> tokens;
  std::vector<BilexArc> arcs;
  int root = 0;                      // 1-based root token position
  std::vector<std::string> inner;    // size tokens.size(), may be empty labels
};

// Tree approximation: the same passage with remote edges dropped.
Passage to_constituency(const Passage& p);

// Lossy head-projection to token arcs. tree_mode drops remote edges,
// otherwise they ride along as flagged extra arcs.
BilexicalGraph to_bilexical(const Passage& p, const HeadRules& rules, bool tree_mode);

// Deterministic inverse: one unit per head token over its projection;
// non-projective arcs simply become discontinuous units.
Passage from_bilexical(const BilexicalGraph& b, const HeadRules& rules);

std::string bilexical_to_tsv(const BilexicalGraph& b);
BilexicalGraph bilexical_from_tsv(std::string_view tsv);

enum class Conversion { Constituency, BilexicalTree, BilexicalDag };
Conversion parse_conversion(const std::string& name);  // throws InvalidArgument

// convert, convert back, and score against the original.
Passage roundtrip(const Passage& p, Conversion conversion, const HeadRules& rules);

EvalReport upper_bound(const std::vector<const Passage*>& gold_corpus, Conversion conversion,
                       const HeadRules& rules, const EvalOptions& opts = {});

}  // namespace ucca

#endif
