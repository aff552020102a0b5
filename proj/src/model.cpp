#include "model.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <sstream>

namespace ucca {

namespace {

// The frozen template registry. Changing anything here changes the hash and
// invalidates previously saved models.
const char* kTemplates =
    "bias s0.t s0.w s0.m s0.c s0.k s0.p s0.h s0.kc s1.t s1.w s1.m s1.c s1.k "
    "s1.h s1.kc s2.w s2.c b0.t b0.w b0.u b1.w b2.w s0w|s1w s0c|s1c s0w|b0w "
    "s1w|b0w s0c|s1c|b0w s0m|s1m s0kc|s1kc a1 a2 a1|a2 st|bf";

std::string bucket(size_t v) { return v >= 4 ? "4+" : std::to_string(v); }

struct View {
  std::string t = "-", w = "-", m = "-", c = "-", k = "-", p = "-", h = "-", kc = "-";
};

View view_of(const TransitionState& s, int idx) {
  View v;
  if (idx < 0) return v;
  const auto& n = s.nodes()[idx];
  v.t = idx == 0 ? "R" : n.terminal ? "P" : n.implicit ? "I" : "N";
  if (n.terminal) v.w = s.terminals()[*n.terminal - 1].text;
  if (n.min_pos > 0) v.m = s.terminals()[n.min_pos - 1].text;
  if (!n.in_cat.empty()) v.c = n.in_cat;
  size_t kids = 0;
  std::vector<std::string> kid_cats;
  for (const Edge& e : s.edges())
    if (e.parent == n.id) {
      ++kids;
      if (!e.remote && kid_cats.size() < 4) kid_cats.push_back(e.category.label);
    }
  std::sort(kid_cats.begin(), kid_cats.end());
  v.kc = kid_cats.empty() ? "-" : "";
  for (const auto& c : kid_cats) v.kc += c;
  v.k = bucket(kids);
  v.p = n.has_parent ? "1" : "0";
  v.h = bucket(static_cast<size_t>(n.height));
  return v;
}

}  // namespace

uint64_t feature_template_hash() {
  uint64_t h = 1469598103934665603ull;
  for (const char* p = kTemplates; *p; ++p) {
    h ^= static_cast<unsigned char>(*p);
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<std::string> extract_features(const TransitionState& s) {
  const auto& stack = s.stack();
  const auto& buffer = s.buffer();
  int s0 = stack.size() >= 1 ? stack[stack.size() - 1] : -1;
  int s1 = stack.size() >= 2 ? stack[stack.size() - 2] : -1;
  int s2 = stack.size() >= 3 ? stack[stack.size() - 3] : -1;
  View v0 = view_of(s, s0), v1 = view_of(s, s1), v2 = view_of(s, s2);

  auto buf_word = [&](size_t i) -> std::string {
    if (i >= buffer.size()) return "-";
    const auto& n = s.nodes()[buffer[i]];
    return n.terminal ? s.terminals()[*n.terminal - 1].text : "-";
  };
  std::string b0u = "-";
  if (!buffer.empty()) {
    const auto& n = s.nodes()[buffer[0]];
    if (n.terminal) b0u = s.terminals()[*n.terminal - 1].punct ? "1" : "0";
  }
  const auto& hist = s.history();
  std::string a1 = hist.empty() ? "-" : hist.back().name();
  std::string a2 = hist.size() < 2 ? "-" : hist[hist.size() - 2].name();

  std::vector<std::string> f;
  f.reserve(kFeatureTemplateCount);
  f.push_back("bias");
  f.push_back("s0.t=" + v0.t);
  f.push_back("s0.w=" + v0.w);
  f.push_back("s0.m=" + v0.m);
  f.push_back("s0.c=" + v0.c);
  f.push_back("s0.k=" + v0.k);
  f.push_back("s0.p=" + v0.p);
  f.push_back("s0.h=" + v0.h);
  f.push_back("s0.kc=" + v0.kc);
  f.push_back("s1.t=" + v1.t);
  f.push_back("s1.w=" + v1.w);
  f.push_back("s1.m=" + v1.m);
  f.push_back("s1.c=" + v1.c);
  f.push_back("s1.k=" + v1.k);
  f.push_back("s1.h=" + v1.h);
  f.push_back("s1.kc=" + v1.kc);
  f.push_back("s2.w=" + v2.w);
  f.push_back("s2.c=" + v2.c);
  f.push_back("b0.t=" + (buffer.empty() ? std::string("-")
                                        : view_of(s, buffer[0]).t));
  f.push_back("b0.w=" + buf_word(0));
  f.push_back("b0.u=" + b0u);
  f.push_back("b1.w=" + buf_word(1));
  f.push_back("b2.w=" + buf_word(2));
  f.push_back("s0w|s1w=" + v0.w + "|" + v1.w);
  f.push_back("s0c|s1c=" + v0.c + "|" + v1.c);
  f.push_back("s0w|b0w=" + v0.w + "|" + buf_word(0));
  f.push_back("s1w|b0w=" + v1.w + "|" + buf_word(0));
  f.push_back("s0c|s1c|b0w=" + v0.c + "|" + v1.c + "|" + buf_word(0));
  f.push_back("s0m|s1m=" + v0.m + "|" + v1.m);
  f.push_back("s0kc|s1kc=" + v0.kc + "|" + v1.kc);
  f.push_back("a1=" + a1);
  f.push_back("a2=" + a2);
  f.push_back("a1|a2=" + a1 + "|" + a2);
  f.push_back("st|bf=" + bucket(stack.size()) + "|" + bucket(buffer.size()));
  return f;
}

SparseModel::SparseModel() {
  for (const Transition& t : transition_inventory()) actions_.push_back(t.name());
}

double SparseModel::score(const std::vector<std::string>& feats, size_t action) const {
  double total = 0;
  for (const std::string& f : feats) {
    auto it = weights_.find(f);
    if (it != weights_.end()) total += it->second[action];
  }
  return total;
}

void SparseModel::update(const std::vector<std::string>& feats, size_t good, size_t bad,
                         uint64_t step) {
  for (const std::string& f : feats) {
    auto& w = weights_[f];
    auto& a = accum_[f];
    if (w.empty()) w.assign(actions_.size(), 0.0);
    if (a.empty()) a.assign(actions_.size(), 0.0);
    w[good] += 1.0;
    a[good] += static_cast<double>(step);
    w[bad] -= 1.0;
    a[bad] -= static_cast<double>(step);
  }
}

void SparseModel::finish_averaging(uint64_t total_steps) {
  if (total_steps == 0) return;
  for (auto& [f, w] : weights_) {
    auto it = accum_.find(f);
    if (it == accum_.end()) continue;
    for (size_t i = 0; i < w.size(); ++i)
      w[i] -= it->second[i] / static_cast<double>(total_steps);
  }
  accum_.clear();
}

std::string SparseModel::save() const {
  std::ostringstream os;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%" PRIx64, feature_template_hash());
  os << "ucca-sparse-model 1\ntemplates " << buf << "\nactions " << actions_.size() << "\n";
  for (const std::string& a : actions_) os << a << "\n";
  for (const auto& [f, w] : weights_) {
    bool any = false;
    for (double x : w)
      if (x != 0.0) any = true;
    if (!any) continue;
    os << f;
    for (size_t i = 0; i < w.size(); ++i) {
      if (w[i] == 0.0) continue;
      std::snprintf(buf, sizeof buf, "\t%zu:%a", i, w[i]);
      os << buf;
    }
    os << "\n";
  }
  return os.str();
}

SparseModel SparseModel::load(std::string_view bytes) {
  std::istringstream in{std::string(bytes)};
  std::string line;
  if (!std::getline(in, line) || line != "ucca-sparse-model 1")
    throw Error(ErrorCode::ModelFormat, "not a ucca sparse model file");
  if (!std::getline(in, line) || line.rfind("templates ", 0) != 0)
    throw Error(ErrorCode::ModelFormat, "missing template hash");
  char expect[64];
  std::snprintf(expect, sizeof expect, "%" PRIx64, feature_template_hash());
  if (line.substr(10) != expect)
    throw Error(ErrorCode::ModelFormat,
                "feature template hash mismatch: model has " + line.substr(10) +
                    ", this build expects " + expect);
  if (!std::getline(in, line) || line.rfind("actions ", 0) != 0)
    throw Error(ErrorCode::ModelFormat, "missing action list");
  size_t n_actions = std::stoul(line.substr(8));
  SparseModel m;
  if (n_actions != m.actions_.size())
    throw Error(ErrorCode::ModelFormat, "action inventory size mismatch");
  for (size_t i = 0; i < n_actions; ++i) {
    if (!std::getline(in, line) || line != m.actions_[i])
      throw Error(ErrorCode::ModelFormat, "action inventory mismatch at index " +
                                              std::to_string(i));
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw Error(ErrorCode::ModelFormat, "bad weight line: " + line);
    std::string feat = line.substr(0, tab);
    auto& w = m.weights_[feat];
    w.assign(n_actions, 0.0);
    size_t start = tab + 1;
    while (start < line.size()) {
      size_t next = line.find('\t', start);
      std::string cell = line.substr(start, next == std::string::npos ? std::string::npos
                                                                       : next - start);
      size_t colon = cell.find(':');
      if (colon == std::string::npos)
        throw Error(ErrorCode::ModelFormat, "bad weight cell: " + cell);
      size_t idx = std::stoul(cell.substr(0, colon));
      if (idx >= n_actions) throw Error(ErrorCode::ModelFormat, "action index out of range");
      w[idx] = std::strtod(cell.c_str() + colon + 1, nullptr);
      start = next == std::string::npos ? line.size() : next + 1;
    }
  }
  return m;
}

namespace {

size_t argmax_legal(const TransitionState& state, const SparseModel& model,
                    const std::vector<std::string>& feats, bool suppress_node) {
  const auto& inv = transition_inventory();
  double best = 0;
  size_t best_idx = inv.size();
  for (size_t i = 0; i < inv.size(); ++i) {
    if (suppress_node && inv[i].type == TransitionType::Node) continue;
    if (!state.legal(inv[i])) continue;
    double s = model.score(feats, i);
    if (best_idx == inv.size() || s > best) {
      best = s;
      best_idx = i;
    }
  }
  return best_idx;
}

// Deterministic completion: attach whatever is parentless to the root and
// drain the buffer, all through legal transitions.
Transition wrapup_step(const TransitionState& state) {
  static const std::vector<Transition> priority = {
      {TransitionType::Finish, {}},          {TransitionType::Reduce, {}},
      {TransitionType::RightEdge, cat::H},   {TransitionType::Swap, {}},
      {TransitionType::Node, cat::H},        {TransitionType::Shift, {}},
  };
  for (const Transition& t : priority)
    if (state.legal(t)) return t;
  for (const Transition& t : transition_inventory())
    if (state.legal(t)) return t;
  throw Error(ErrorCode::IllegalTransition, "decoder wedged: no legal transition");
}

}  // namespace

SparseModel train(const std::vector<const Passage*>& corpus, unsigned epochs, uint64_t seed) {
  if (corpus.empty()) throw Error(ErrorCode::InvalidArgument, "empty training corpus");
  std::vector<std::vector<Transition>> sequences;
  for (const Passage* p : corpus) sequences.push_back(oracle(*p));

  SparseModel model;
  const auto& inv = transition_inventory();
  auto index_of = [&](const Transition& t) {
    for (size_t i = 0; i < inv.size(); ++i)
      if (inv[i] == t) return i;
    throw Error(ErrorCode::InvalidArgument, "transition outside the inventory: " + t.name());
  };

  std::vector<size_t> order(corpus.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  uint64_t rng = seed ? seed : 0x9e3779b97f4a7c15ull;
  auto next_rand = [&rng] {
    // xorshift64*, deterministic across platforms
    rng ^= rng >> 12;
    rng ^= rng << 25;
    rng ^= rng >> 27;
    return rng * 0x2545f4914f6cdd1dull;
  };

  uint64_t step = 0;
  for (unsigned epoch = 0; epoch < epochs; ++epoch) {
    for (size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[next_rand() % i]);
    for (size_t pi : order) {
      TransitionState state(corpus[pi]->id(), corpus[pi]->terminals());
      for (const Transition& gold_t : sequences[pi]) {
        ++step;
        auto feats = extract_features(state);
        size_t predicted = argmax_legal(state, model, feats, false);
        size_t wanted = index_of(gold_t);
        if (predicted != wanted) model.update(feats, wanted, predicted, step);
        state.apply(gold_t);
      }
    }
  }
  model.finish_averaging(step);
  return model;
}

Passage parse(const std::vector<Terminal>& tokens, const SparseModel& model,
              const std::string& passage_id) {
  TransitionState state(passage_id, tokens);
  const size_t n = tokens.size();
  const size_t model_phase = 8 * n + 10;
  const size_t hard_cap = 50 * n + 100;
  const size_t node_soft_cap = 2 * n + 8;
  const auto& inv = transition_inventory();
  while (!state.finished()) {
    if (state.history().size() >= hard_cap)
      throw Error(ErrorCode::IllegalTransition, "decoder exceeded the hard transition cap");
    if (state.history().size() < model_phase) {
      auto feats = extract_features(state);
      bool suppress_node = state.nodes().size() >= 1 + n + node_soft_cap;
      size_t idx = argmax_legal(state, model, feats, suppress_node);
      if (idx < inv.size()) {
        state.apply(inv[idx]);
        continue;
      }
    }
    state.apply(wrapup_step(state));
  }
  return state.finish_passage();
}

}  // namespace ucca
