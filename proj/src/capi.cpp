// C surface over the C++ core: handles own their objects, errors map to
// status codes with the message parked in a thread-local slot.
#include "ucca.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "convert.hpp"
#include "evaluate.hpp"
#include "graph.hpp"
#include "model.hpp"
#include "validate.hpp"
#include "xml.hpp"

using namespace ucca;

struct ucca_passage {
  Passage value;
};
struct ucca_violations {
  std::vector<Violation> items;
};
struct ucca_report {
  CorpusAccumulator acc;
  explicit ucca_report(EvalOptions o) : acc(o) {}
};
struct ucca_bilexical {
  BilexicalGraph value;
};
struct ucca_model {
  SparseModel value;
};

namespace {

thread_local std::string g_last_error;

ucca_status status_of(const Error& e) {
  switch (e.code()) {
    case ErrorCode::InvalidArgument: return UCCA_EINVAL;
    case ErrorCode::XmlSyntax: return UCCA_EXML;
    case ErrorCode::Schema: return UCCA_ESCHEMA;
    case ErrorCode::Cycle:
    case ErrorCode::MultiplePrimaryParents:
    case ErrorCode::UnreachableTerminal:
    case ErrorCode::DanglingReference:
    case ErrorCode::InvalidModel:
    case ErrorCode::UnknownUnit: return UCCA_EMODEL;
    case ErrorCode::TokenMismatch: return UCCA_ETOKENS;
    case ErrorCode::MissingPassage: return UCCA_EMISSING;
    case ErrorCode::IllegalTransition: return UCCA_ETRANSITION;
    case ErrorCode::OracleFailure: return UCCA_EORACLE;
    case ErrorCode::ModelFormat: return UCCA_EMODELFORMAT;
    case ErrorCode::Io: return UCCA_EIO;
  }
  return UCCA_EINVAL;
}

template <typename Fn>
ucca_status guarded(Fn&& fn) {
  try {
    fn();
    return UCCA_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return UCCA_EINVAL;
  }
}

ucca_status take_string(const std::string& s, char** out, size_t* out_len) {
  char* buf = static_cast<char*>(::malloc(s.size() + 1));
  if (!buf) {
    g_last_error = "out of memory";
    return UCCA_EINVAL;
  }
  std::memcpy(buf, s.data(), s.size());
  buf[s.size()] = '\0';
  *out = buf;
  if (out_len) *out_len = s.size();
  return UCCA_OK;
}

EvalOptions options_of(const ucca_eval_options* opts) {
  EvalOptions o;
  if (opts) {
    o.include_punct = opts->include_punct != 0;
    o.implicit_extension = opts->implicit_extension != 0;
  }
  return o;
}

ucca_status require(bool ok, const char* what) {
  if (ok) return UCCA_OK;
  g_last_error = std::string("null ") + what;
  return UCCA_EINVAL;
}

HeadRules rules_of(const char* head_priority) {
  return head_priority && *head_priority ? HeadRules::parse(head_priority) : HeadRules();
}

}  // namespace

extern "C" {

const char* ucca_status_name(ucca_status status) {
  switch (status) {
    case UCCA_OK: return "ok";
    case UCCA_EINVAL: return "invalid-argument";
    case UCCA_EXML: return "xml-syntax";
    case UCCA_ESCHEMA: return "schema";
    case UCCA_EMODEL: return "model";
    case UCCA_ETOKENS: return "token-mismatch";
    case UCCA_EMISSING: return "missing-passage";
    case UCCA_ETRANSITION: return "illegal-transition";
    case UCCA_EORACLE: return "oracle-failure";
    case UCCA_EMODELFORMAT: return "model-format";
    case UCCA_EIO: return "io";
  }
  return "unknown";
}

const char* ucca_last_error(void) { return g_last_error.c_str(); }

const char* ucca_version(void) { return "0.1.0"; }

ucca_status ucca_passage_from_xml(const char* data, size_t len, int extension_labels,
                                  ucca_passage** out) {
  if (auto s = require(data && out, "argument")) return s;
  return guarded([&] {
    ReadOptions opts;
    opts.extension_labels = extension_labels != 0;
    *out = new ucca_passage{read_passage({data, len}, opts)};
  });
}

ucca_status ucca_passage_to_xml(const ucca_passage* p, char** out, size_t* out_len) {
  if (auto s = require(p && out, "argument")) return s;
  return guarded([&] {
    std::string bytes = write_passage(p->value);
    if (take_string(bytes, out, out_len)) throw Error(ErrorCode::Io, "alloc");
  });
}

ucca_status ucca_strip_annotation(const char* data, size_t len, char** out, size_t* out_len) {
  if (auto s = require(data && out, "argument")) return s;
  return guarded([&] {
    std::string bytes = strip_annotation({data, len});
    if (take_string(bytes, out, out_len)) throw Error(ErrorCode::Io, "alloc");
  });
}

void ucca_passage_free(ucca_passage* p) { delete p; }
void ucca_buffer_free(char* buf) { ::free(buf); }

const char* ucca_passage_id(const ucca_passage* p) { return p ? p->value.id().c_str() : ""; }

size_t ucca_passage_terminal_count(const ucca_passage* p) {
  return p ? p->value.terminals().size() : 0;
}

size_t ucca_passage_unit_count(const ucca_passage* p) {
  return p ? p->value.units().size() : 0;
}

size_t ucca_passage_edge_count(const ucca_passage* p, int remote) {
  if (!p) return 0;
  size_t n = 0;
  for (const Edge& e : p->value.edges())
    if (remote < 0 || e.remote == (remote > 0)) ++n;
  return n;
}

const char* ucca_passage_terminal_text(const ucca_passage* p, size_t position) {
  if (!p || position < 1 || position > p->value.terminals().size()) return nullptr;
  return p->value.terminals()[position - 1].text.c_str();
}

int ucca_passage_terminal_punct(const ucca_passage* p, size_t position) {
  if (!p || position < 1 || position > p->value.terminals().size()) return 0;
  return p->value.terminals()[position - 1].punct ? 1 : 0;
}

int ucca_passage_equal(const ucca_passage* a, const ucca_passage* b) {
  if (!a || !b) return 0;
  try {
    return graphs_equal(a->value, b->value) ? 1 : 0;
  } catch (const std::exception&) {
    return 0;
  }
}

ucca_status ucca_validate(const ucca_passage* p, ucca_violations** out) {
  if (auto s = require(p && out, "argument")) return s;
  return guarded([&] { *out = new ucca_violations{validate(p->value)}; });
}

size_t ucca_violations_count(const ucca_violations* v) { return v ? v->items.size() : 0; }

const char* ucca_violation_rule(const ucca_violations* v, size_t i) {
  return v && i < v->items.size() ? v->items[i].rule_id.c_str() : nullptr;
}

int ucca_violation_is_error(const ucca_violations* v, size_t i) {
  return v && i < v->items.size() && v->items[i].severity == Severity::Error ? 1 : 0;
}

const char* ucca_violation_unit(const ucca_violations* v, size_t i) {
  return v && i < v->items.size() ? v->items[i].unit_id.c_str() : nullptr;
}

const char* ucca_violation_message(const ucca_violations* v, size_t i) {
  return v && i < v->items.size() ? v->items[i].message.c_str() : nullptr;
}

void ucca_violations_free(ucca_violations* v) { delete v; }

ucca_status ucca_normalize(const ucca_passage* p, ucca_passage** out) {
  if (auto s = require(p && out, "argument")) return s;
  return guarded([&] { *out = new ucca_passage{normalize(p->value)}; });
}

ucca_status ucca_score_pair(const ucca_passage* pred, const ucca_passage* gold,
                            const ucca_eval_options* opts, ucca_report** out) {
  if (auto s = require(pred && gold && out, "argument")) return s;
  return guarded([&] {
    auto* r = new ucca_report(options_of(opts));
    try {
      r->acc.add_pair(pred->value, gold->value);
    } catch (...) {
      delete r;
      throw;
    }
    *out = r;
  });
}

ucca_status ucca_report_new(const ucca_eval_options* opts, ucca_report** out) {
  if (auto s = require(out != nullptr, "argument")) return s;
  return guarded([&] { *out = new ucca_report(options_of(opts)); });
}

ucca_status ucca_report_add_pair(ucca_report* report, const ucca_passage* pred,
                                 const ucca_passage* gold) {
  if (auto s = require(report && pred && gold, "argument")) return s;
  return guarded([&] { report->acc.add_pair(pred->value, gold->value); });
}

ucca_status ucca_report_get(const ucca_report* report, const char* key, ucca_score* out) {
  if (auto s = require(report && key && out, "argument")) return s;
  const EvalReport& r = report->acc.report();
  const ScoreTriple* t = nullptr;
  std::string k = key;
  if (k == "primary") t = &r.primary;
  else if (k == "remote") t = &r.remote;
  else if (k == "implicit") t = r.implicit ? &*r.implicit : nullptr;
  else if (k.rfind("set/", 0) == 0) {
    auto it = r.category_sets.find(k.substr(4));
    if (it != r.category_sets.end()) t = &it->second;
  } else if (k.rfind("category/", 0) == 0) {
    auto it = r.per_category.find(Category{k.substr(9)});
    if (it != r.per_category.end()) t = &it->second;
  } else {
    g_last_error = "unknown report key '" + k + "'";
    return UCCA_EINVAL;
  }
  *out = ucca_score{};
  if (!t) return UCCA_OK;  // present stays 0
  out->matched = t->matched;
  out->predicted = t->predicted;
  out->gold = t->gold;
  out->lp = t->lp();
  out->lr = t->lr();
  out->lf = t->lf();
  out->lp_defined = t->lp_defined() ? 1 : 0;
  out->lr_defined = t->lr_defined() ? 1 : 0;
  out->present = 1;
  return UCCA_OK;
}

ucca_status ucca_report_categories(const ucca_report* report, char** out, size_t* out_len) {
  if (auto s = require(report && out, "argument")) return s;
  std::string joined;
  for (const auto& [c, t] : report->acc.report().per_category) {
    if (!joined.empty()) joined += "\n";
    joined += c.label;
  }
  return take_string(joined, out, out_len);
}

ucca_status ucca_report_text(const ucca_report* report, int per_category, char** out,
                             size_t* out_len) {
  if (auto s = require(report && out, "argument")) return s;
  return guarded([&] {
    std::string text = format_report(report->acc.report(), per_category != 0);
    if (take_string(text, out, out_len)) throw Error(ErrorCode::Io, "alloc");
  });
}

void ucca_report_free(ucca_report* report) { delete report; }

ucca_status ucca_to_constituency(const ucca_passage* p, ucca_passage** out) {
  if (auto s = require(p && out, "argument")) return s;
  return guarded([&] { *out = new ucca_passage{to_constituency(p->value)}; });
}

ucca_status ucca_to_bilexical(const ucca_passage* p, const char* head_priority, int tree_mode,
                              ucca_bilexical** out) {
  if (auto s = require(p && out, "argument")) return s;
  return guarded([&] {
    *out = new ucca_bilexical{to_bilexical(p->value, rules_of(head_priority), tree_mode != 0)};
  });
}

ucca_status ucca_from_bilexical(const ucca_bilexical* b, const char* head_priority,
                                ucca_passage** out) {
  if (auto s = require(b && out, "argument")) return s;
  return guarded([&] {
    *out = new ucca_passage{from_bilexical(b->value, rules_of(head_priority))};
  });
}

ucca_status ucca_bilexical_to_tsv(const ucca_bilexical* b, char** out, size_t* out_len) {
  if (auto s = require(b && out, "argument")) return s;
  return guarded([&] {
    if (take_string(bilexical_to_tsv(b->value), out, out_len))
      throw Error(ErrorCode::Io, "alloc");
  });
}

ucca_status ucca_bilexical_from_tsv(const char* data, size_t len, ucca_bilexical** out) {
  if (auto s = require(data && out, "argument")) return s;
  return guarded([&] { *out = new ucca_bilexical{bilexical_from_tsv({data, len})}; });
}

void ucca_bilexical_free(ucca_bilexical* b) { delete b; }

ucca_status ucca_roundtrip(const ucca_passage* p, const char* conversion,
                           const char* head_priority, ucca_passage** out) {
  if (auto s = require(p && conversion && out, "argument")) return s;
  return guarded([&] {
    *out = new ucca_passage{
        roundtrip(p->value, parse_conversion(conversion), rules_of(head_priority))};
  });
}

ucca_status ucca_train(const ucca_passage* const* corpus, size_t n, unsigned epochs,
                       unsigned long long seed, ucca_model** out) {
  if (auto s = require(corpus && out, "argument")) return s;
  return guarded([&] {
    std::vector<const Passage*> ptrs;
    ptrs.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      if (!corpus[i]) throw Error(ErrorCode::InvalidArgument, "null passage in corpus");
      ptrs.push_back(&corpus[i]->value);
    }
    *out = new ucca_model{train(ptrs, epochs, seed)};
  });
}

ucca_status ucca_model_save(const ucca_model* m, char** out, size_t* out_len) {
  if (auto s = require(m && out, "argument")) return s;
  return guarded([&] {
    if (take_string(m->value.save(), out, out_len))
      throw Error(ErrorCode::Io, "alloc");
  });
}

ucca_status ucca_model_load(const char* data, size_t len, ucca_model** out) {
  if (auto s = require(data && out, "argument")) return s;
  return guarded([&] { *out = new ucca_model{SparseModel::load({data, len})}; });
}

void ucca_model_free(ucca_model* m) { delete m; }

ucca_status ucca_parse(const ucca_model* m, const char* const* tokens, const int* punct,
                       size_t n, const char* passage_id, ucca_passage** out) {
  if (auto s = require(m && tokens && out, "argument")) return s;
  return guarded([&] {
    std::vector<Terminal> terms;
    for (size_t i = 0; i < n; ++i) {
      if (!tokens[i]) throw Error(ErrorCode::InvalidArgument, "null token");
      Terminal t;
      t.position = static_cast<int>(i) + 1;
      t.text = tokens[i];
      if (punct) {
        t.punct = punct[i] != 0;
      } else {
        t.punct = !t.text.empty() &&
                  t.text.find_first_not_of("!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~") ==
                      std::string::npos;
      }
      terms.push_back(std::move(t));
    }
    *out = new ucca_passage{parse(terms, m->value, passage_id ? passage_id : "parsed")};
  });
}

ucca_status ucca_tokens_from_xml(const char* data, size_t len, char** id_out,
                                 char** texts_out, char** punct_out, size_t* n_out) {
  if (auto s = require(data && texts_out && n_out, "argument")) return s;
  return guarded([&] {
    auto [id, terms] = read_terminals({data, len});
    std::string texts, puncts;
    for (const Terminal& t : terms) {
      if (!texts.empty()) texts += "\n";
      texts += t.text;
      puncts += t.punct ? '1' : '0';
    }
    char* texts_buf = nullptr;
    char* punct_buf = nullptr;
    char* id_buf = nullptr;
    if (take_string(texts, &texts_buf, nullptr)) throw Error(ErrorCode::Io, "alloc");
    if (punct_out && take_string(puncts, &punct_buf, nullptr)) {
      ::free(texts_buf);
      throw Error(ErrorCode::Io, "alloc");
    }
    if (id_out && take_string(id, &id_buf, nullptr)) {
      ::free(texts_buf);
      ::free(punct_buf);
      throw Error(ErrorCode::Io, "alloc");
    }
    *texts_out = texts_buf;
    if (punct_out) *punct_out = punct_buf;
    if (id_out) *id_out = id_buf;
    *n_out = terms.size();
  });
}

}  // extern "C"
