#ifndef UCCA_XML_HPP
#define UCCA_XML_HPP

#include <string>
#include <string_view>
#include <vector>

#include "graph.hpp"

namespace ucca {

struct ReadOptions {
  bool extension_labels = false;  // keep unknown edge categories instead of rejecting
};

// Parses one passage document. Terminal order comes from position
// attributes, not document order. Model violations propagate from
// Passage::build with the offending node's line appended.
Passage read_passage(std::string_view xml, const ReadOptions& opts = {});

// Canonical serialization: UTF-8, LF, 2-space indent, nodes ordered by id,
// edges by (child, category), attributes alphabetical. Equal passages
// produce identical bytes.
std::string write_passage(const Passage& p);

// Removes the <layer layerID="1"> element(s) and nothing else; layer 0
// bytes pass through untouched. Idempotent.
std::string strip_annotation(std::string_view xml);

// Layer-0 view of a document that may or may not carry layer 1.
// Returns (passage id, terminals).
std::pair<std::string, std::vector<Terminal>> read_terminals(std::string_view xml);

// Whitespace tokenization for plain-text input; punct is set for tokens
// made entirely of ASCII punctuation.
std::vector<Terminal> tokenize_plain(std::string_view text);

std::string xml_escape_attr(std::string_view value);

}  // namespace ucca

#endif
