#include "xml.hpp"

#include <expat.h>

#include <algorithm>
#include <cctype>
#include <cstring>
#include <map>
#include <optional>
#include <sstream>

namespace ucca {

namespace {

struct RawEdge {
  std::string from, to, type;
  bool remote = false;
  std::map<std::string, std::string> extra;
  long line = 0;
};

struct RawNode {
  std::string id, layer, type;
  std::map<std::string, std::string> attrs;  // from the <attributes> block + element extras
  long line = 0;
};

struct ParseState {
  XML_Parser parser = nullptr;
  std::vector<std::string> stack;
  std::string passage_id;
  bool saw_passage = false;
  std::map<std::string, std::string> passage_extra;
  std::string layer_id;
  std::vector<RawNode> nodes;
  std::vector<RawEdge> edges;
  RawNode* node = nullptr;   // open <node>
  RawEdge* edge = nullptr;   // open <edge>
  std::optional<Error> error;

  void fail(ErrorCode code, const std::string& msg) {
    if (!error) {
      long line = XML_GetCurrentLineNumber(parser);
      error.emplace(code, msg + " (line " + std::to_string(line) + ")");
    }
    XML_StopParser(parser, XML_FALSE);
  }
};

std::map<std::string, std::string> attr_map(const XML_Char** attrs) {
  std::map<std::string, std::string> out;
  for (int i = 0; attrs[i]; i += 2) out[attrs[i]] = attrs[i + 1];
  return out;
}

std::string take(std::map<std::string, std::string>& attrs, const std::string& key) {
  auto it = attrs.find(key);
  if (it == attrs.end()) return {};
  std::string v = it->second;
  attrs.erase(it);
  return v;
}

bool parse_flag(ParseState& st, std::map<std::string, std::string>& attrs,
                const std::string& key) {
  auto it = attrs.find(key);
  if (it == attrs.end()) return false;
  std::string v = it->second;
  attrs.erase(it);
  if (v == "True") return true;
  if (v == "False") return false;
  st.fail(ErrorCode::Schema, "attribute " + key + "=\"" + v + "\" must be \"True\" or \"False\"");
  return false;
}

void XMLCALL on_start(void* user, const XML_Char* name, const XML_Char** attr_list) {
  auto& st = *static_cast<ParseState*>(user);
  if (st.error) return;
  auto attrs = attr_map(attr_list);
  std::string parent = st.stack.empty() ? "" : st.stack.back();
  std::string tag = name;
  st.stack.push_back(tag);

  if (parent.empty()) {
    if (tag != "passage")
      return st.fail(ErrorCode::Schema, "document element must be <passage>, got <" + tag + ">");
    st.passage_id = take(attrs, "passageID");
    if (st.passage_id.empty())
      return st.fail(ErrorCode::Schema, "<passage> is missing the passageID attribute");
    st.saw_passage = true;
    st.passage_extra = std::move(attrs);
    return;
  }
  if (tag == "layer") {
    if (parent != "passage")
      return st.fail(ErrorCode::Schema, "<layer> must be a direct child of <passage>");
    st.layer_id = take(attrs, "layerID");
    if (st.layer_id != "0" && st.layer_id != "1")
      return st.fail(ErrorCode::Schema, "unknown layer \"" + st.layer_id + "\"");
    return;
  }
  if (tag == "node") {
    if (parent != "layer")
      return st.fail(ErrorCode::Schema, "<node> outside of a <layer>");
    RawNode n;
    n.id = take(attrs, "ID");
    n.type = take(attrs, "type");
    n.layer = st.layer_id;
    n.line = XML_GetCurrentLineNumber(st.parser);
    if (n.id.empty()) return st.fail(ErrorCode::Schema, "<node> is missing the ID attribute");
    n.attrs = std::move(attrs);  // element-level extras fold into the attribute block
    st.nodes.push_back(std::move(n));
    st.node = &st.nodes.back();
    return;
  }
  if (tag == "edge") {
    if (parent != "node" || !st.node)
      return st.fail(ErrorCode::Schema, "<edge> outside of a <node>");
    if (st.node->layer == "0")
      return st.fail(ErrorCode::Schema,
                     "terminal node '" + st.node->id + "' cannot have outgoing edges");
    RawEdge e;
    e.from = st.node->id;
    e.to = take(attrs, "toID");
    e.type = take(attrs, "type");
    e.line = XML_GetCurrentLineNumber(st.parser);
    if (e.to.empty()) return st.fail(ErrorCode::Schema, "<edge> is missing the toID attribute");
    if (e.type.empty()) return st.fail(ErrorCode::Schema, "<edge> is missing the type attribute");
    e.extra = std::move(attrs);
    st.edges.push_back(std::move(e));
    st.edge = &st.edges.back();
    return;
  }
  if (tag == "attributes") {
    if (parent == "edge" && st.edge) {
      st.edge->remote = parse_flag(st, attrs, "remote");
      for (auto& [k, v] : attrs) st.edge->extra[k] = v;
      return;
    }
    if (parent == "node" && st.node) {
      for (auto& [k, v] : attrs) st.node->attrs[k] = v;
      return;
    }
    return st.fail(ErrorCode::Schema, "<attributes> outside of a <node> or <edge>");
  }
  // Unknown elements (e.g. other tools' extensions) are skipped wholesale.
}

void XMLCALL on_end(void* user, const XML_Char* name) {
  auto& st = *static_cast<ParseState*>(user);
  if (st.error) return;
  if (!st.stack.empty()) st.stack.pop_back();
  std::string tag = name;
  if (tag == "node") st.node = nullptr;
  if (tag == "edge") st.edge = nullptr;
  if (tag == "layer") st.layer_id.clear();
}

ParseState run_parser(std::string_view xml) {
  ParseState st;
  XML_Parser parser = XML_ParserCreate(nullptr);
  st.parser = parser;
  XML_SetUserData(parser, &st);
  XML_SetElementHandler(parser, on_start, on_end);
  auto ok = XML_Parse(parser, xml.data(), static_cast<int>(xml.size()), XML_TRUE);
  if (ok == XML_STATUS_ERROR && !st.error) {
    std::string msg = XML_ErrorString(XML_GetErrorCode(parser));
    long line = XML_GetCurrentLineNumber(parser);
    st.error.emplace(ErrorCode::XmlSyntax, msg + " (line " + std::to_string(line) + ")");
  }
  XML_ParserFree(parser);
  if (!st.error && !st.saw_passage)
    st.error.emplace(ErrorCode::Schema, "no <passage> element found");
  return st;
}

int parse_position(const std::string& value, const RawNode& n) {
  if (value.empty())
    throw Error(ErrorCode::Schema, "terminal node '" + n.id + "' is missing position (line " +
                                       std::to_string(n.line) + ")");
  try {
    size_t used = 0;
    int pos = std::stoi(value, &used);
    if (used != value.size() || pos < 1) throw std::invalid_argument(value);
    return pos;
  } catch (const std::exception&) {
    throw Error(ErrorCode::Schema, "terminal node '" + n.id + "' has bad position \"" + value +
                                       "\" (line " + std::to_string(n.line) + ")");
  }
}

}  // namespace

Passage read_passage(std::string_view xml, const ReadOptions& opts) {
  ParseState st = run_parser(xml);
  if (st.error) throw *st.error;

  std::map<std::string, int> terminal_of_node;  // layer-0 node id -> position
  std::map<std::string, long> line_of;
  std::vector<Terminal> terminals;
  std::vector<Unit> units;

  for (RawNode& n : st.nodes) {
    if (!line_of.emplace(n.id, n.line).second)
      throw Error(ErrorCode::Schema, "duplicate node ID '" + n.id + "' (line " +
                                         std::to_string(n.line) + ")");
    if (n.layer == "0") {
      Terminal t;
      t.position = parse_position(take(n.attrs, "position"), n);
      t.text = take(n.attrs, "text");
      if (t.text.empty())
        throw Error(ErrorCode::Schema, "terminal node '" + n.id + "' is missing text (line " +
                                           std::to_string(n.line) + ")");
      auto it = n.attrs.find("punct");
      if (it != n.attrs.end()) {
        t.punct = it->second == "True";
        n.attrs.erase(it);
      } else {
        t.punct = n.type == "Punctuation";
      }
      t.extra = std::move(n.attrs);
      terminal_of_node[n.id] = t.position;
      terminals.push_back(std::move(t));
    } else {
      Unit u;
      u.id = n.id;
      auto it = n.attrs.find("implicit");
      if (it != n.attrs.end()) {
        if (it->second != "True" && it->second != "False")
          throw Error(ErrorCode::Schema, "implicit=\"" + it->second + "\" on '" + n.id +
                                             "' must be \"True\" or \"False\"");
        u.implicit = it->second == "True";
        n.attrs.erase(it);
      }
      u.extra = std::move(n.attrs);
      units.push_back(std::move(u));
    }
  }

  std::vector<Edge> edges;
  std::map<std::string, int> unit_terminal;
  for (const RawEdge& re : st.edges) {
    auto term = terminal_of_node.find(re.to);
    if (term != terminal_of_node.end()) {
      if (re.type != "T")
        throw Error(ErrorCode::Schema, "edge from '" + re.from + "' to terminal node '" + re.to +
                                           "' must have type T (line " +
                                           std::to_string(re.line) + ")");
      if (re.remote)
        throw Error(ErrorCode::Schema,
                    "terminal attachment from '" + re.from + "' cannot be remote");
      if (!unit_terminal.emplace(re.from, term->second).second)
        throw Error(ErrorCode::Schema,
                    "unit '" + re.from + "' has multiple terminal attachments (line " +
                        std::to_string(re.line) + ")");
      continue;
    }
    if (!line_of.count(re.to))
      throw Error(ErrorCode::Schema, "edge toID '" + re.to + "' resolves to no node (line " +
                                         std::to_string(re.line) + ")");
    Edge e;
    e.parent = re.from;
    e.child = re.to;
    e.category = parse_category(re.type, opts.extension_labels);
    if (e.category == cat::T)
      throw Error(ErrorCode::Schema,
                  "type T is reserved for terminal attachments (edge '" + re.from + "' -> '" +
                      re.to + "')");
    e.remote = re.remote;
    e.extra = re.extra;
    edges.push_back(std::move(e));
  }
  for (Unit& u : units) {
    auto it = unit_terminal.find(u.id);
    if (it != unit_terminal.end()) u.terminal = it->second;
  }

  try {
    Passage p = Passage::build(st.passage_id, std::move(terminals), std::move(units),
                               std::move(edges));
    p.set_extra(std::move(st.passage_extra));
    return p;
  } catch (const Error& e) {
    std::string context;
    auto it = line_of.find(e.subject());
    if (it != line_of.end()) context = " (node at line " + std::to_string(it->second) + ")";
    throw Error(e.code(), e.what() + context, e.subject());
  }
}

std::string xml_escape_attr(std::string_view value) {
  std::string out;
  out.reserve(value.size());
  for (char c : value) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

namespace {

void write_attrs(std::string& out, const std::map<std::string, std::string>& attrs) {
  for (const auto& [k, v] : attrs) out += " " + k + "=\"" + xml_escape_attr(v) + "\"";
}

}  // namespace

std::string write_passage(const Passage& p) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<passage passageID=\"" + xml_escape_attr(p.id()) + "\"";
  write_attrs(out, p.extra());
  out += ">\n  <layer layerID=\"0\">\n";
  for (const Terminal& t : p.terminals()) {
    out += "    <node ID=\"0." + std::to_string(t.position) + "\" type=\"" +
           (t.punct ? "Punctuation" : "Word") + "\">\n      <attributes";
    std::map<std::string, std::string> attrs = t.extra;
    attrs["position"] = std::to_string(t.position);
    if (t.punct) attrs["punct"] = "True";
    attrs["text"] = t.text;
    write_attrs(out, attrs);
    out += "/>\n    </node>\n";
  }
  out += "  </layer>\n  <layer layerID=\"1\">\n";

  // edges().  Units come out of the passage already ordered by id key; the
  // edge list is already in canonical (parent, child, category) order.
  for (const Unit& u : p.units()) {
    std::map<std::string, std::string> attrs = u.extra;
    if (u.implicit) attrs["implicit"] = "True";
    out += "    <node ID=\"" + xml_escape_attr(u.id) + "\" type=\"FN\"";
    bool has_edges = u.terminal.has_value();
    if (!has_edges)
      for (const Edge& e : p.edges())
        if (e.parent == u.id) { has_edges = true; break; }
    if (attrs.empty() && !has_edges) {
      out += "/>\n";
      continue;
    }
    out += ">\n";
    if (!attrs.empty()) {
      out += "      <attributes";
      write_attrs(out, attrs);
      out += "/>\n";
    }
    for (const Edge& e : p.edges()) {
      if (e.parent != u.id) continue;
      out += "      <edge toID=\"" + xml_escape_attr(e.child) + "\" type=\"" +
             xml_escape_attr(e.category.label) + "\"";
      std::map<std::string, std::string> eattrs = e.extra;
      if (e.remote) eattrs["remote"] = "True";
      if (eattrs.empty()) {
        out += "/>\n";
      } else {
        out += ">\n        <attributes";
        write_attrs(out, eattrs);
        out += "/>\n      </edge>\n";
      }
    }
    if (u.terminal)
      out += "      <edge toID=\"0." + std::to_string(*u.terminal) + "\" type=\"T\"/>\n";
    out += "    </node>\n";
  }
  out += "  </layer>\n</passage>\n";
  return out;
}

namespace {

// Byte spans of <layer layerID="1"> elements, located with expat so that
// surrounding bytes stay untouched.
struct StripState {
  XML_Parser parser = nullptr;
  std::string_view xml;
  int depth_in_target = 0;
  long start = -1;
  std::vector<std::pair<long, long>> spans;
  std::optional<Error> error;
};

void XMLCALL strip_start(void* user, const XML_Char* name, const XML_Char** attrs) {
  auto& st = *static_cast<StripState*>(user);
  if (st.depth_in_target > 0) {
    st.depth_in_target++;
    return;
  }
  if (std::strcmp(name, "layer") != 0) return;
  for (int i = 0; attrs[i]; i += 2) {
    if (std::strcmp(attrs[i], "layerID") == 0 && std::strcmp(attrs[i + 1], "1") == 0) {
      st.depth_in_target = 1;
      st.start = XML_GetCurrentByteIndex(st.parser);
      return;
    }
  }
}

void XMLCALL strip_end(void* user, const XML_Char* name) {
  auto& st = *static_cast<StripState*>(user);
  if (st.depth_in_target == 0) return;
  if (--st.depth_in_target > 0) return;
  (void)name;
  long tag_start = XML_GetCurrentByteIndex(st.parser);
  size_t close = st.xml.find('>', static_cast<size_t>(tag_start));
  long end = close == std::string_view::npos ? static_cast<long>(st.xml.size())
                                             : static_cast<long>(close) + 1;
  st.spans.emplace_back(st.start, end);
}

}  // namespace

std::string strip_annotation(std::string_view xml) {
  StripState st;
  st.xml = xml;
  XML_Parser parser = XML_ParserCreate(nullptr);
  st.parser = parser;
  XML_SetUserData(parser, &st);
  XML_SetElementHandler(parser, strip_start, strip_end);
  auto ok = XML_Parse(parser, xml.data(), static_cast<int>(xml.size()), XML_TRUE);
  if (ok == XML_STATUS_ERROR) {
    std::string msg = XML_ErrorString(XML_GetErrorCode(parser));
    long line = XML_GetCurrentLineNumber(parser);
    XML_ParserFree(parser);
    throw Error(ErrorCode::XmlSyntax, msg + " (line " + std::to_string(line) + ")");
  }
  XML_ParserFree(parser);
  if (st.spans.empty()) return std::string(xml);

  std::string out;
  size_t cursor = 0;
  for (auto [a, b] : st.spans) {
    size_t begin = static_cast<size_t>(a), end = static_cast<size_t>(b);
    // Take the indentation before the tag and one trailing newline with it.
    while (begin > cursor && (xml[begin - 1] == ' ' || xml[begin - 1] == '\t')) --begin;
    if (end < xml.size() && xml[end] == '\r') ++end;
    if (end < xml.size() && xml[end] == '\n') ++end;
    out.append(xml.substr(cursor, begin - cursor));
    cursor = end;
  }
  out.append(xml.substr(cursor));
  return out;
}

std::pair<std::string, std::vector<Terminal>> read_terminals(std::string_view xml) {
  ParseState st = run_parser(xml);
  if (st.error) throw *st.error;
  std::vector<Terminal> terminals;
  for (RawNode& n : st.nodes) {
    if (n.layer != "0") continue;
    Terminal t;
    t.position = parse_position(take(n.attrs, "position"), n);
    t.text = take(n.attrs, "text");
    auto it = n.attrs.find("punct");
    if (it != n.attrs.end()) {
      t.punct = it->second == "True";
      n.attrs.erase(it);
    } else {
      t.punct = n.type == "Punctuation";
    }
    t.extra = std::move(n.attrs);
    terminals.push_back(std::move(t));
  }
  std::sort(terminals.begin(), terminals.end(),
            [](const Terminal& a, const Terminal& b) { return a.position < b.position; });
  return {st.passage_id, std::move(terminals)};
}

std::vector<Terminal> tokenize_plain(std::string_view text) {
  std::vector<Terminal> out;
  std::string tok;
  auto flush = [&] {
    if (tok.empty()) return;
    Terminal t;
    t.position = static_cast<int>(out.size()) + 1;
    t.text = tok;
    t.punct = std::all_of(tok.begin(), tok.end(),
                          [](unsigned char c) { return std::ispunct(c); });
    out.push_back(std::move(t));
    tok.clear();
  };
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c)))
      flush();
    else
      tok += c;
  }
  flush();
  return out;
}

}  // namespace ucca
