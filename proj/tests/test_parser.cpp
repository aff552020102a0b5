#include "model.hpp"
#include "transition.hpp"

#include <doctest.h>

#include "evaluate.hpp"
#include "testutil.hpp"
#include "validate.hpp"

using namespace ucca;
namespace tu = ucca::testutil;

namespace {

Passage replay(const Passage& gold) {
  TransitionState state(gold.id(), gold.terminals());
  for (const Transition& t : oracle(gold)) state.apply(t);
  return state.finish_passage();
}

}  // namespace

TEST_CASE("initial state admits only SHIFT") {
  TransitionState s("x", {{1, "hi", false}, {2, "there", false}});
  auto legal = s.legal_transitions();
  REQUIRE(legal.size() == 1);
  CHECK(legal[0].type == TransitionType::Shift);
}

TEST_CASE("apply rejects illegal transitions") {
  TransitionState s("x", {{1, "hi", false}});
  CHECK_THROWS_AS(s.apply({TransitionType::Finish, {}}), Error);
  s.apply({TransitionType::Shift, {}});  // the root unit
  s.apply({TransitionType::Shift, {}});  // the token
  CHECK_THROWS_AS(s.apply({TransitionType::Finish, {}}), Error);  // parentless token
  CHECK_THROWS_AS(s.apply({TransitionType::Shift, {}}), Error);   // buffer empty
  s.apply({TransitionType::RightEdge, cat::H});
  s.apply({TransitionType::Reduce, {}});
  auto legal = s.legal_transitions();
  bool finish_legal = false, shift_legal = false;
  for (const Transition& t : legal) {
    if (t.type == TransitionType::Finish) finish_legal = true;
    if (t.type == TransitionType::Shift) shift_legal = true;
  }
  CHECK(finish_legal);        // graph is complete
  CHECK_FALSE(shift_legal);   // nothing left to shift
  s.apply({TransitionType::Finish, {}});
  Passage p = s.finish_passage();
  CHECK(p.terminals().size() == 1);
  CHECK(p.units().size() == 2);
}

TEST_CASE("one primary parent: LEFT-EDGE is excluded, LEFT-REMOTE stays") {
  // stack: [root, w1, X] where w1 already has a parent
  TransitionState s("x", {{1, "a", false}, {2, "b", false}});
  s.apply({TransitionType::Shift, {}});                 // root
  s.apply({TransitionType::Shift, {}});                 // w1
  s.apply({TransitionType::Node, cat::A});              // X parent of w1, on buffer
  s.apply({TransitionType::Shift, {}});                 // X
  CHECK_FALSE(s.legal({TransitionType::LeftEdge, cat::D}));   // X -> w1 again
  CHECK(s.legal({TransitionType::LeftRemote, cat::D}));       // remote second parent is fine
  s.apply({TransitionType::LeftRemote, cat::D});
  CHECK_FALSE(s.legal({TransitionType::LeftRemote, cat::E}));  // one remote per pair
}

TEST_CASE("SWAP moves the second item to the buffer front") {
  TransitionState s("x", {{1, "a", false}, {2, "b", false}, {3, "c", false}});
  s.apply({TransitionType::Shift, {}});  // root
  s.apply({TransitionType::Shift, {}});  // w1
  s.apply({TransitionType::Shift, {}});  // w2
  REQUIRE(s.stack().size() == 3);
  CHECK(s.legal({TransitionType::Swap, {}}));
  s.apply({TransitionType::Swap, {}});
  CHECK(s.stack().size() == 2);
  CHECK(s.nodes()[s.buffer().front()].terminal == 1);
  // same pair cannot ping-pong: re-shift puts w1 above w2
  s.apply({TransitionType::Shift, {}});
  CHECK_FALSE(s.legal({TransitionType::Swap, {}}));
  // and the root itself is never swappable
  TransitionState r("y", {{1, "a", false}});
  r.apply({TransitionType::Shift, {}});
  r.apply({TransitionType::Shift, {}});
  CHECK_FALSE(r.legal({TransitionType::Swap, {}}));
}

TEST_CASE("oracle reconstructs figure 1 with exactly one remote transition") {
  Passage g = tu::fig1();
  auto seq = oracle(g);
  int remotes = 0;
  for (const Transition& t : seq)
    if (t.type == TransitionType::LeftRemote || t.type == TransitionType::RightRemote)
      ++remotes;
  CHECK(remotes == 1);
  CHECK(graphs_equal(replay(g), g));
}

TEST_CASE("oracle covers figure 2's implicit unit") {
  Passage g = tu::fig2();
  auto seq = oracle(g);
  int implicits = 0;
  for (const Transition& t : seq)
    if (t.type == TransitionType::Implicit) ++implicits;
  CHECK(implicits == 1);
  CHECK(graphs_equal(replay(g), g));
}

TEST_CASE("oracle handles discontinuity via SWAP") {
  // unit with yield {1,3}
  std::vector<Terminal> terms{{1, "a", false}, {2, "b", false}, {3, "c", false}};
  std::vector<Unit> units{{"1.1", false, {}}, {"1.2", false, {}},
                          {"1.3", false, 1},  {"1.4", false, 2},  {"1.5", false, 3}};
  std::vector<Edge> edges{{"1.1", "1.2", cat::H, false},
                          {"1.1", "1.4", cat::L, false},
                          {"1.2", "1.3", cat::C, false},
                          {"1.2", "1.5", cat::E, false}};
  Passage g = Passage::build("disco", terms, units, edges);
  auto seq = oracle(g);
  int swaps = 0;
  for (const Transition& t : seq)
    if (t.type == TransitionType::Swap) ++swaps;
  CHECK(swaps >= 1);
  CHECK(graphs_equal(replay(g), g));
}

TEST_CASE("oracle completeness across the remote/discontinuous/implicit grid") {
  tu::PassageGen gen(4242);
  int count = 0;
  for (int mask = 0; mask < 8; ++mask) {
    for (int rep = 0; rep < 40; ++rep) {
      tu::GenOptions opt;
      opt.min_tokens = 1;
      opt.max_tokens = 12;
      opt.remote = mask & 1;
      opt.no_remote = !(mask & 1);
      opt.discontinuous = mask & 2;
      opt.implicit = mask & 4;
      opt.no_implicit = !(mask & 4);
      Passage g = gen.generate(opt);
      CAPTURE(mask);
      CAPTURE(g.id());
      Passage rebuilt = replay(g);
      CHECK(graphs_equal(rebuilt, g));
      ++count;
    }
  }
  CHECK(count == 320);
}

TEST_CASE("closure: random legal walks always end in a valid passage") {
  tu::PassageGen gen(5151);
  std::mt19937_64 rng(99);
  for (int i = 0; i < 60; ++i) {
    int n = 1 + static_cast<int>(rng() % 8);
    std::vector<Terminal> terms;
    for (int k = 1; k <= n; ++k) terms.push_back({k, "w" + std::to_string(k), false});
    TransitionState s("walk" + std::to_string(i), terms);
    size_t cap = transition_budget(n) * 4;
    while (!s.finished() && s.history().size() < cap) {
      auto legal = s.legal_transitions();
      REQUIRE_FALSE(legal.empty());
      // bias away from NODE/IMPLICIT so walks finish within the cap
      const Transition* pick = &legal[rng() % legal.size()];
      if ((pick->type == TransitionType::Node || pick->type == TransitionType::Implicit) &&
          rng() % 3)
        pick = &legal[0];
      s.apply(*pick);
    }
    if (s.finished()) {
      Passage p = s.finish_passage();
      CHECK(p.terminals().size() == static_cast<size_t>(n));
    }
  }
}

TEST_CASE("feature extraction is deterministic and bounded") {
  Passage g = tu::fig1();
  TransitionState a(g.id(), g.terminals());
  TransitionState b(g.id(), g.terminals());
  for (const Transition& t : oracle(g)) {
    auto fa = extract_features(a);
    auto fb = extract_features(b);
    CHECK(fa == fb);
    CHECK(fa.size() <= kFeatureTemplateCount);
    a.apply(t);
    b.apply(t);
  }
  TransitionState c("other", tu::fig2().terminals());
  CHECK(extract_features(c) != extract_features(TransitionState(g.id(), g.terminals())));
}

TEST_CASE("untrained model still parses into valid, flat passages") {
  SparseModel empty;
  std::vector<Terminal> toks{{1, "John", false}, {2, "moved", false}, {3, ".", true}};
  Passage p = parse(toks, empty, "flat");
  CHECK(p.terminals().size() == 3);
  for (const auto& v : validate(p)) CHECK(v.severity != Severity::Error);
  // 1-token input: root plus one pre-terminal, H attachment
  Passage single = parse({{1, "hi", false}}, empty, "one");
  CHECK(single.units().size() == 2);
  Passage gold = Passage::build("one", {{1, "hi", false}},
                                {{"1.1", false, {}}, {"1.2", false, 1}},
                                {{"1.1", "1.2", cat::H, false}});
  CHECK(score_pair(single, gold).primary.lf() == doctest::Approx(100.0));
}

TEST_CASE("decoding respects the documented budget") {
  SparseModel empty;
  tu::PassageGen gen(616);
  for (int i = 0; i < 25; ++i) {
    Passage g = gen.generate({.min_tokens = 1, .max_tokens = 20});
    TransitionState probe(g.id(), g.terminals());
    Passage out = parse(g.terminals(), empty, g.id());
    CHECK(out.terminals().size() == g.terminals().size());
    // replay through parse's own history is internal; re-derive the bound
    // from the output size instead: decode must stay within budget
    // (asserted inside parse via the hard cap; budget change breaks this)
    CHECK(transition_budget(g.terminals().size()) >= 2 * g.terminals().size() + 2);
  }
}

TEST_CASE("training overfits ten small passages") {
  tu::PassageGen gen(31337);
  std::vector<Passage> corpus;
  for (int i = 0; i < 10; ++i)
    corpus.push_back(gen.generate({.min_tokens = 2, .max_tokens = 7,
                                   .remote = i % 3 == 0, .discontinuous = i == 4,
                                   .implicit = i == 7}));
  std::vector<const Passage*> ptrs;
  for (const Passage& p : corpus) ptrs.push_back(&p);
  SparseModel model = train(ptrs, 50, 7);

  CorpusAccumulator acc;
  for (const Passage& g : corpus) {
    Passage out = parse(g.terminals(), model, g.id());
    acc.add_pair(out, g);
    for (const auto& v : validate(out)) CHECK(v.severity != Severity::Error);
  }
  CHECK(acc.report().primary.lf() >= 99.0);
}

TEST_CASE("training is deterministic under a fixed seed") {
  tu::PassageGen gen(808);
  std::vector<Passage> corpus;
  for (int i = 0; i < 4; ++i) corpus.push_back(gen.generate({.max_tokens = 6}));
  std::vector<const Passage*> ptrs;
  for (const Passage& p : corpus) ptrs.push_back(&p);
  SparseModel a = train(ptrs, 5, 123);
  SparseModel b = train(ptrs, 5, 123);
  CHECK(a.save() == b.save());
  SparseModel c = train(ptrs, 5, 124);
  CHECK(a.save() != c.save());  // different shuffle, different trajectory
}

TEST_CASE("zero-epoch training yields a usable uniform model") {
  Passage g = tu::fig1();
  SparseModel m = train({&g}, 0, 1);
  Passage out = parse(g.terminals(), m, g.id());
  CHECK(out.terminals().size() == 7);
}

TEST_CASE("model serialization round trips and checks its hash") {
  tu::PassageGen gen(99);
  Passage g = gen.generate({.max_tokens = 5});
  SparseModel m = train({&g}, 3, 42);
  std::string bytes = m.save();
  SparseModel loaded = SparseModel::load(bytes);
  CHECK(loaded == m);
  CHECK(loaded.save() == bytes);

  std::string corrupted = bytes;
  auto pos = corrupted.find("templates ");
  corrupted[pos + 10] = corrupted[pos + 10] == '0' ? '1' : '0';
  CHECK_THROWS_AS(SparseModel::load(corrupted), Error);
  try {
    SparseModel::load(corrupted);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ModelFormat);
  }
  CHECK_THROWS_AS(SparseModel::load("garbage"), Error);
}

TEST_CASE("empty corpus is refused") {
  CHECK_THROWS_AS(train({}, 3, 1), Error);
}
