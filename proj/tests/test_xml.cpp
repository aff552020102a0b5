#include "xml.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

#include "testutil.hpp"
#include "validate.hpp"

using namespace ucca;
namespace tu = ucca::testutil;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fixture(const std::string& name) {
  return slurp(std::string(UCCA_FIXTURE_DIR) + "/" + name);
}

}  // namespace

TEST_CASE("toy fixtures parse into the figure structures") {
  Passage f1 = read_passage(fixture("toy/fig1.xml"));
  CHECK(f1.id() == "fig1");
  CHECK(graphs_equal(f1, tu::fig1()));
  Passage f2 = read_passage(fixture("toy/fig2.xml"));
  CHECK(graphs_equal(f2, tu::fig2()));
  CHECK(f2.unit("1.4").implicit);
}

TEST_CASE("write/read round trip is the identity, write is canonical") {
  for (const char* name : {"toy/fig1.xml", "toy/fig2.xml", "toy/disco.xml", "toy/simple.xml"}) {
    CAPTURE(name);
    Passage p = read_passage(fixture(name));
    std::string bytes = write_passage(p);
    Passage q = read_passage(bytes);
    CHECK(p == q);
    CHECK(write_passage(q) == bytes);  // write . read . write == write
  }
}

TEST_CASE("round trip survives random remote/implicit/discontinuous passages") {
  tu::PassageGen gen(23);
  for (int i = 0; i < 60; ++i) {
    Passage p = gen.generate({.remote = i % 2 == 0, .discontinuous = i % 3 == 0,
                              .implicit = i % 5 == 0});
    Passage q = read_passage(write_passage(p));
    CHECK(q == p);
  }
}

TEST_CASE("terminal order comes from position attributes") {
  std::string doc = R"(<passage passageID="shuffled">
  <layer layerID="0">
    <node ID="0.2" type="Word"><attributes position="2" text="world"/></node>
    <node ID="0.1" type="Word"><attributes position="1" text="hello"/></node>
  </layer>
  <layer layerID="1">
    <node ID="1.1" type="FN">
      <edge toID="1.2" type="H"/><edge toID="1.3" type="H"/>
    </node>
    <node ID="1.2" type="FN"><edge toID="0.1" type="T"/></node>
    <node ID="1.3" type="FN"><edge toID="0.2" type="T"/></node>
  </layer>
</passage>)";
  Passage p = read_passage(doc);
  CHECK(p.terminals()[0].text == "hello");
  CHECK(p.terminals()[1].text == "world");
}

TEST_CASE("unknown attributes survive the round trip") {
  std::string doc = R"(<passage passageID="x" annotationID="0">
  <layer layerID="0">
    <node ID="0.1" type="Word">
      <attributes paragraph="1" paragraph_position="1" position="1" text="hi"/>
    </node>
  </layer>
  <layer layerID="1">
    <node ID="1.1" type="FN"><edge toID="1.2" type="H"/></node>
    <node ID="1.2" type="FN"><edge toID="0.1" type="T"/></node>
  </layer>
</passage>)";
  Passage p = read_passage(doc);
  CHECK(p.extra().at("annotationID") == "0");
  CHECK(p.terminals()[0].extra.at("paragraph") == "1");
  std::string bytes = write_passage(p);
  CHECK(bytes.find("annotationID=\"0\"") != std::string::npos);
  CHECK(bytes.find("paragraph=\"1\"") != std::string::npos);
  CHECK(read_passage(bytes) == p);
}

TEST_CASE("schema errors name the offender") {
  SUBCASE("dangling toID") {
    std::string doc = R"(<passage passageID="x">
  <layer layerID="0">
    <node ID="0.1" type="Word"><attributes position="1" text="hi"/></node>
  </layer>
  <layer layerID="1">
    <node ID="1.1" type="FN"><edge toID="1.99" type="H"/></node>
  </layer>
</passage>)";
    CHECK_THROWS_WITH_AS(read_passage(doc), doctest::Contains("1.99"), Error);
  }
  SUBCASE("unknown layer") {
    CHECK_THROWS_WITH_AS(read_passage("<passage passageID=\"x\"><layer layerID=\"7\"/></passage>"),
                         doctest::Contains("layer"), Error);
  }
  SUBCASE("missing passageID") {
    CHECK_THROWS_AS(read_passage("<passage><layer layerID=\"0\"/></passage>"), Error);
  }
  SUBCASE("unknown category rejected unless extension labels are on") {
    std::string doc = R"(<passage passageID="x">
  <layer layerID="0">
    <node ID="0.1" type="Word"><attributes position="1" text="hi"/></node>
  </layer>
  <layer layerID="1">
    <node ID="1.1" type="FN"><edge toID="1.2" type="Q9"/></node>
    <node ID="1.2" type="FN"><edge toID="0.1" type="T"/></node>
  </layer>
</passage>)";
    CHECK_THROWS_WITH_AS(read_passage(doc), doctest::Contains("Q9"), Error);
    Passage p = read_passage(doc, ReadOptions{.extension_labels = true});
    CHECK(p.edges()[0].category.label == "Q9");
  }
  SUBCASE("malformed XML is a syntax error") {
    try {
      read_passage("<passage passageID=\"x\"><layer");
      FAIL("expected XmlSyntax");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::XmlSyntax);
    }
  }
}

TEST_CASE("model errors carry XML line context") {
  // two roots: 1.1 and 1.9 both lack a primary parent
  std::string doc = R"(<passage passageID="x">
  <layer layerID="0">
    <node ID="0.1" type="Word"><attributes position="1" text="hi"/></node>
  </layer>
  <layer layerID="1">
    <node ID="1.1" type="FN"><edge toID="1.2" type="H"/></node>
    <node ID="1.2" type="FN"><edge toID="0.1" type="T"/></node>
    <node ID="1.9" type="FN"><attributes implicit="True"/></node>
  </layer>
</passage>)";
  CHECK_THROWS_WITH_AS(read_passage(doc), doctest::Contains("line"), Error);
}

TEST_CASE("strip_annotation removes exactly layer 1 and is idempotent") {
  for (const char* name : {"toy/fig1.xml", "toy/fig2.xml"}) {
    CAPTURE(name);
    std::string full = fixture(name);
    std::string stripped = strip_annotation(full);
    CHECK(stripped.find("layerID=\"1\"") == std::string::npos);
    CHECK(stripped.find("layerID=\"0\"") != std::string::npos);
    CHECK(strip_annotation(stripped) == stripped);
    // layer 0 passes through byte-identically
    size_t l0 = full.find("<layer layerID=\"0\"");
    size_t l0end = full.find("</layer>", l0) + 8;
    CHECK(stripped.find(full.substr(l0, l0end - l0)) != std::string::npos);
    // a stripped passage no longer parses as an annotated one
    CHECK_THROWS_AS(read_passage(stripped), Error);
    // but its terminals stay readable
    auto [id, terms] = read_terminals(stripped);
    CHECK(terms.size() == read_passage(full).terminals().size());
  }
}

TEST_CASE("strip on an unannotated document is the identity") {
  std::string doc = "<passage passageID=\"x\">\n  <layer layerID=\"0\">\n  </layer>\n</passage>\n";
  CHECK(strip_annotation(doc) == doc);
}

TEST_CASE("plain text tokenization") {
  auto toks = tokenize_plain("John moved , fast .");
  REQUIRE(toks.size() == 5);
  CHECK(toks[0].text == "John");
  CHECK_FALSE(toks[0].punct);
  CHECK(toks[2].punct);
  CHECK(toks[4].punct);
  CHECK(toks[4].position == 5);
  CHECK(tokenize_plain("  \n ").empty());
}
