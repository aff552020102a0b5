#ifndef UCCA_CATEGORY_HPP
#define UCCA_CATEGORY_HPP

#include <array>
#include <compare>
#include <string>
#include <string_view>

#include "error.hpp"

namespace ucca {

// Foundational-layer edge label. The closed set below covers the layer;
// anything else is accepted only in extension-label mode, where the raw
// string is kept as-is. T is the internal pre-terminal attachment and
// never appears in a Passage edge set.
struct Category {
  std::string label;

  auto operator<=>(const Category&) const = default;
};

inline constexpr std::array<std::string_view, 14> kKnownCategories = {
    "P", "S", "A", "D", "C", "E", "N", "R", "F", "L", "H", "G", "U", "T"};

inline bool is_known_category(std::string_view label) {
  for (auto known : kKnownCategories)
    if (label == known) return true;
  return false;
}

inline Category parse_category(std::string_view label, bool extension_labels = false) {
  if (label.empty())
    throw Error(ErrorCode::Schema, "empty edge category");
  if (!extension_labels && !is_known_category(label))
    throw Error(ErrorCode::Schema, "unknown edge category '" + std::string(label) + "'");
  return Category{std::string(label)};
}

namespace cat {
inline const Category P{"P"}, S{"S"}, A{"A"}, D{"D"}, C{"C"}, E{"E"}, N{"N"},
    R{"R"}, F{"F"}, L{"L"}, H{"H"}, G{"G"}, U{"U"}, T{"T"};
}  // namespace cat

}  // namespace ucca

#endif
