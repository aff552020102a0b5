#include "validate.hpp"

#include <doctest.h>

#include "evaluate.hpp"
#include "testutil.hpp"

using namespace ucca;
namespace tu = ucca::testutil;

namespace {

std::vector<std::string> rule_ids(const std::vector<Violation>& vs) {
  std::vector<std::string> out;
  for (const auto& v : vs) out.push_back(v.rule_id);
  return out;
}

}  // namespace

TEST_CASE("figure 1 passes: the remote A satisfies the participant rule") {
  CHECK(validate(tu::fig1()).empty());
}

TEST_CASE("figure 2 passes: the implicit A is a participant") {
  CHECK(validate(tu::fig2()).empty());
}

TEST_CASE("deleting the remote A leaves the graduation scene without a participant") {
  Passage p = tu::drop_remote_edges(tu::fig1());
  auto vs = validate(p);
  REQUIRE(vs.size() == 1);
  CHECK(vs[0].rule_id == "R1");
  CHECK(vs[0].severity == Severity::Warning);
  CHECK(vs[0].unit_id == "1.3");
}

TEST_CASE("an implicit-only participant satisfies R1") {
  // scene with P + implicit A and nothing else
  std::vector<Terminal> terms{{1, "go", false}};
  std::vector<Unit> units{{"1.1", false, {}}, {"1.2", false, 1}, {"1.3", true, {}}};
  std::vector<Edge> edges{{"1.1", "1.2", cat::P, false}, {"1.1", "1.3", cat::A, false}};
  CHECK(validate(Passage::build("imp", terms, units, edges)).empty());
  edges.pop_back();
  units.pop_back();
  auto vs = validate(Passage::build("imp2", terms, units, edges));
  REQUIRE(vs.size() == 1);
  CHECK(vs[0].rule_id == "R1");
}

TEST_CASE("R2 flags a second main relation") {
  std::vector<Terminal> terms{{1, "a", false}, {2, "b", false}};
  std::vector<Unit> units{{"1.1", false, {}}, {"1.2", false, 1}, {"1.3", false, 2}};
  std::vector<Edge> edges{{"1.1", "1.2", cat::P, false}, {"1.1", "1.3", cat::S, false}};
  auto vs = validate(Passage::build("r2", terms, units, edges));
  auto ids = rule_ids(vs);
  CHECK(std::count(ids.begin(), ids.end(), "R2") == 1);
  for (const auto& v : vs)
    if (v.rule_id == "R2") CHECK(v.severity == Severity::Error);
}

TEST_CASE("R3 wants a center next to elaborators") {
  std::vector<Terminal> terms{{1, "a", false}, {2, "b", false}};
  std::vector<Unit> units{{"1.1", false, {}}, {"1.2", false, 1}, {"1.3", false, 2}};
  std::vector<Edge> edges{{"1.1", "1.2", cat::E, false}, {"1.1", "1.3", cat::E, false}};
  auto vs = validate(Passage::build("r3", terms, units, edges));
  REQUIRE(vs.size() == 1);
  CHECK(vs[0].rule_id == "R3");
  CHECK(vs[0].severity == Severity::Warning);
}

TEST_CASE("R6 flags U edges over non-punctuation") {
  std::vector<Terminal> terms{{1, "word", false}};
  std::vector<Unit> units{{"1.1", false, {}}, {"1.2", false, 1}};
  std::vector<Edge> edges{{"1.1", "1.2", cat::U, false}};
  auto vs = validate(Passage::build("r6", terms, units, edges));
  REQUIRE(vs.size() == 1);
  CHECK(vs[0].rule_id == "R6");
  CHECK(vs[0].severity == Severity::Error);
}

TEST_CASE("remote edges onto pre-terminal units are permitted, as in figure 1") {
  std::vector<Terminal> terms{{1, "a", false}, {2, "b", false}};
  std::vector<Unit> units{{"1.1", false, {}}, {"1.2", false, {}},
                          {"1.3", false, 1},  {"1.4", false, 2}};
  std::vector<Edge> edges{{"1.1", "1.2", cat::H, false},
                          {"1.2", "1.3", cat::P, false},
                          {"1.2", "1.4", cat::A, false},
                          {"1.1", "1.4", cat::A, true}};
  CHECK(validate(Passage::build("rp", terms, units, edges)).empty());
}

TEST_CASE("violations are id-permutation invariant") {
  Passage p = tu::drop_remote_edges(tu::fig1());
  Passage shuffled = normalize(p);  // different ids, same structure
  auto a = validate(p), b = validate(shuffled);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].rule_id == b[i].rule_id);
}

TEST_CASE("normalize is idempotent and id-insensitive") {
  tu::PassageGen gen(43);
  for (int i = 0; i < 40; ++i) {
    Passage p = gen.generate({.remote = i % 2 == 0, .discontinuous = i % 3 == 0,
                              .implicit = i % 4 == 0});
    Passage n1 = normalize(p);
    Passage n2 = normalize(n1);
    CHECK(n1 == n2);
    CHECK(graphs_equal(p, n1));
  }
}

TEST_CASE("figure 1 with shuffled ids normalizes to the same passage") {
  Passage a = normalize(tu::fig1());
  // manual shuffle: swap a couple of unit ids
  Passage p = tu::fig1();
  std::map<std::string, std::string> rename;
  for (const Unit& u : p.units()) rename[u.id] = u.id;
  rename["1.3"] = "1.11";
  rename["1.11"] = "1.3";
  rename["1.5"] = "1.7";
  rename["1.7"] = "1.5";
  std::vector<Unit> units;
  for (Unit u : p.units()) {
    u.id = rename.at(u.id);
    units.push_back(u);
  }
  std::vector<Edge> edges;
  for (Edge e : p.edges()) {
    e.parent = rename.at(e.parent);
    e.child = rename.at(e.child);
    edges.push_back(e);
  }
  Passage b = normalize(Passage::build("fig1", p.terminals(), units, edges));
  CHECK(a == b);
}

TEST_CASE("normalization never moves a score") {
  tu::PassageGen gen(17);
  for (int i = 0; i < 30; ++i) {
    Passage p = gen.generate({.remote = true, .implicit = i % 2 == 0});
    EvalReport r = score_pair(normalize(p), p, {.implicit_extension = true});
    CHECK(r.primary.lf() == doctest::Approx(100.0));
    CHECK(r.primary.matched == r.primary.gold);
    CHECK(r.remote.matched == r.remote.gold);
    CHECK(r.remote.lf() == doctest::Approx(100.0));
  }
}
