#ifndef UCCA_MODEL_HPP
#define UCCA_MODEL_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "transition.hpp"

namespace ucca {

// Deterministic sparse features of a parser state. One feature per
// template, so the count is bounded by kFeatureTemplateCount.
inline constexpr size_t kFeatureTemplateCount = 34;
std::vector<std::string> extract_features(const TransitionState& s);

// FNV-1a hash of the frozen template registry; serialized models carrying a
// different hash are refused.
uint64_t feature_template_hash();

// Averaged perceptron over the transition inventory.
class SparseModel {
 public:
  SparseModel();

  double score(const std::vector<std::string>& feats, size_t action) const;
  size_t action_count() const { return actions_.size(); }
  const std::vector<std::string>& actions() const { return actions_; }

  void update(const std::vector<std::string>& feats, size_t good, size_t bad, uint64_t step);
  void finish_averaging(uint64_t total_steps);

  std::string save() const;                       // versioned text dump
  static SparseModel load(std::string_view bytes);  // throws ModelFormat

  bool operator==(const SparseModel& o) const {
    return weights_ == o.weights_ && actions_ == o.actions_;
  }

 private:
  std::vector<std::string> actions_;  // inventory names, fixed order
  std::map<std::string, std::vector<double>> weights_;
  std::map<std::string, std::vector<double>> accum_;  // averaging trick
};

// Static-oracle training: one weight update per state where the argmax over
// legal transitions disagrees with the oracle. Deterministic under a fixed
// seed (the seed only shuffles passage order between epochs).
SparseModel train(const std::vector<const Passage*>& corpus, unsigned epochs, uint64_t seed);

// Greedy decoding over legal transitions; always yields a valid passage and
// stays within transition_budget(tokens).
Passage parse(const std::vector<Terminal>& tokens, const SparseModel& model,
              const std::string& passage_id);

}  // namespace ucca

#endif
