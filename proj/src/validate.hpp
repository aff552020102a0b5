#ifndef UCCA_VALIDATE_HPP
#define UCCA_VALIDATE_HPP

#include <string>
#include <vector>

#include "graph.hpp"

namespace ucca {

enum class Severity { Warning, Error };

// One failed guideline rule. rule_id comes from the registry in RULES.md.
struct Violation {
  std::string rule_id;
  Severity severity = Severity::Warning;
  std::string unit_id;  // empty when the rule has no single locus
  std::string message;
};

// Applies the rule registry (R1..R6) to a structurally valid passage.
// Deterministic order: (rule, yield minimum, unit id). An empty result
// means the passage passes.
std::vector<Violation> validate(const Passage& p);

// Canonical form: breadth-first unit ids from "1.1", siblings ordered by
// (yield minimum, category, structure), duplicate edges dropped. Idempotent
// and score-neutral: the labeled edge multiset is untouched.
Passage normalize(const Passage& p);

// Unit-id-insensitive equality of two passages (terminals, unit flags, and
// the labeled edge structure; extra attributes ignored).
bool graphs_equal(const Passage& a, const Passage& b);

const char* severity_name(Severity s);

}  // namespace ucca

#endif
