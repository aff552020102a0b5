/* libucca - UCCA passages, validation, DAG F1 scoring, tree/bilexical
 * approximations, and a transition-based parser behind a C API.
 *
 * Every function returns a ucca_status; results come back through out
 * parameters as opaque handles or buffers. ucca_last_error() carries the
 * detail message of the most recent failure on the calling thread. Handles
 * are immutable once created and may be shared across threads; each one is
 * released with its matching *_free function.
 */
#ifndef UCCA_H
#define UCCA_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined _WIN32 || defined __CYGWIN__
#define UCCA_API __declspec(dllexport)
#else
#define UCCA_API __attribute__((visibility("default")))
#endif

typedef enum ucca_status {
  UCCA_OK = 0,
  UCCA_EINVAL = 1,          /* bad argument */
  UCCA_EXML = 2,            /* XML syntax error */
  UCCA_ESCHEMA = 3,         /* document violates the passage schema */
  UCCA_EMODEL = 4,          /* graph invariant violation (cycle, parents, ...) */
  UCCA_ETOKENS = 5,         /* evaluation inputs disagree on tokens */
  UCCA_EMISSING = 6,        /* passage present on one side only */
  UCCA_ETRANSITION = 7,     /* illegal parser transition */
  UCCA_EORACLE = 8,         /* oracle could not reconstruct a passage */
  UCCA_EMODELFORMAT = 9,    /* bad or incompatible model file */
  UCCA_EIO = 10,
} ucca_status;

UCCA_API const char* ucca_status_name(ucca_status status);

/* Message for the last failing call on this thread. */
UCCA_API const char* ucca_last_error(void);

UCCA_API const char* ucca_version(void);

/* ------------------------------------------------------------------ */
/* Passages                                                            */

typedef struct ucca_passage ucca_passage;

/* Parse one passage document. extension_labels != 0 keeps unknown edge
 * categories instead of rejecting them. */
UCCA_API ucca_status ucca_passage_from_xml(const char* data, size_t len,
                                           int extension_labels, ucca_passage** out);

/* Canonical serialization; equal passages yield identical bytes.
 * Free the buffer with ucca_buffer_free. */
UCCA_API ucca_status ucca_passage_to_xml(const ucca_passage* p, char** out, size_t* out_len);

/* Remove the layer-1 element, leaving layer 0 byte-identical. Idempotent. */
UCCA_API ucca_status ucca_strip_annotation(const char* data, size_t len, char** out,
                                           size_t* out_len);

UCCA_API void ucca_passage_free(ucca_passage* p);
UCCA_API void ucca_buffer_free(char* buf);

UCCA_API const char* ucca_passage_id(const ucca_passage* p);
UCCA_API size_t ucca_passage_terminal_count(const ucca_passage* p);
UCCA_API size_t ucca_passage_unit_count(const ucca_passage* p);
/* remote < 0: all edges; remote == 0: primary only; remote > 0: remote only */
UCCA_API size_t ucca_passage_edge_count(const ucca_passage* p, int remote);
/* 1-based position; NULL when out of range */
UCCA_API const char* ucca_passage_terminal_text(const ucca_passage* p, size_t position);
UCCA_API int ucca_passage_terminal_punct(const ucca_passage* p, size_t position);

/* Unit-id-insensitive structural equality. */
UCCA_API int ucca_passage_equal(const ucca_passage* a, const ucca_passage* b);

/* ------------------------------------------------------------------ */
/* Validation and normalization                                        */

typedef struct ucca_violations ucca_violations;

UCCA_API ucca_status ucca_validate(const ucca_passage* p, ucca_violations** out);
UCCA_API size_t ucca_violations_count(const ucca_violations* v);
UCCA_API const char* ucca_violation_rule(const ucca_violations* v, size_t i);
/* 1 = error, 0 = warning */
UCCA_API int ucca_violation_is_error(const ucca_violations* v, size_t i);
UCCA_API const char* ucca_violation_unit(const ucca_violations* v, size_t i);
UCCA_API const char* ucca_violation_message(const ucca_violations* v, size_t i);
UCCA_API void ucca_violations_free(ucca_violations* v);

UCCA_API ucca_status ucca_normalize(const ucca_passage* p, ucca_passage** out);

/* ------------------------------------------------------------------ */
/* Evaluation                                                          */

typedef struct ucca_report ucca_report;

typedef struct ucca_eval_options {
  int include_punct;      /* score U edges in the coarse metric (default 1) */
  int implicit_extension; /* add the separate implicit-unit triple (default 0) */
} ucca_eval_options;

typedef struct ucca_score {
  long long matched;
  long long predicted;
  long long gold;
  double lp, lr, lf; /* percentages; lp/lr meaningless unless defined */
  int lp_defined;
  int lr_defined;
  int present; /* 0 when the requested key does not exist in the report */
} ucca_score;

/* Score a single pair into a fresh report. opts may be NULL for defaults. */
UCCA_API ucca_status ucca_score_pair(const ucca_passage* pred, const ucca_passage* gold,
                                     const ucca_eval_options* opts, ucca_report** out);

/* Micro-average accumulator: create empty, fold pairs in, read, free. */
UCCA_API ucca_status ucca_report_new(const ucca_eval_options* opts, ucca_report** out);
UCCA_API ucca_status ucca_report_add_pair(ucca_report* report, const ucca_passage* pred,
                                          const ucca_passage* gold);

/* Keys: "primary", "remote", "implicit", "set/scene", "set/non_scene",
 * "set/linkage", "category/<label>". */
UCCA_API ucca_status ucca_report_get(const ucca_report* report, const char* key,
                                     ucca_score* out);
/* All per-category labels present in the report, joined by '\n'. */
UCCA_API ucca_status ucca_report_categories(const ucca_report* report, char** out,
                                            size_t* out_len);
/* Table-2-style text block plus key=value lines. */
UCCA_API ucca_status ucca_report_text(const ucca_report* report, int per_category, char** out,
                                      size_t* out_len);
UCCA_API void ucca_report_free(ucca_report* report);

/* ------------------------------------------------------------------ */
/* Conversions                                                         */

typedef struct ucca_bilexical ucca_bilexical;

UCCA_API ucca_status ucca_to_constituency(const ucca_passage* p, ucca_passage** out);

/* head_priority: comma-separated category list, NULL for the default
 * C,P,S,H,A,D,E,N,R,L,G,F,U,T. tree_mode != 0 drops remote edges. */
UCCA_API ucca_status ucca_to_bilexical(const ucca_passage* p, const char* head_priority,
                                       int tree_mode, ucca_bilexical** out);
UCCA_API ucca_status ucca_from_bilexical(const ucca_bilexical* b, const char* head_priority,
                                         ucca_passage** out);
UCCA_API ucca_status ucca_bilexical_to_tsv(const ucca_bilexical* b, char** out,
                                           size_t* out_len);
UCCA_API ucca_status ucca_bilexical_from_tsv(const char* data, size_t len,
                                             ucca_bilexical** out);
UCCA_API void ucca_bilexical_free(ucca_bilexical* b);

/* conversion: "constituency", "bilexical-tree" or "bilexical-dag". Converts
 * the passage there and back; scoring the result against the original gives
 * the conversion's F1 upper bound. */
UCCA_API ucca_status ucca_roundtrip(const ucca_passage* p, const char* conversion,
                                    const char* head_priority, ucca_passage** out);

/* ------------------------------------------------------------------ */
/* Baseline parser                                                     */

typedef struct ucca_model ucca_model;

UCCA_API ucca_status ucca_train(const ucca_passage* const* corpus, size_t n, unsigned epochs,
                                unsigned long long seed, ucca_model** out);
UCCA_API ucca_status ucca_model_save(const ucca_model* m, char** out, size_t* out_len);
/* Refuses models whose feature-template hash differs from this build. */
UCCA_API ucca_status ucca_model_load(const char* data, size_t len, ucca_model** out);
UCCA_API void ucca_model_free(ucca_model* m);

/* tokens[i] is UTF-8 text; punct may be NULL (then inferred from the text).
 * The output passage always satisfies the graph invariants. */
UCCA_API ucca_status ucca_parse(const ucca_model* m, const char* const* tokens,
                                const int* punct, size_t n, const char* passage_id,
                                ucca_passage** out);

/* Layer-0 tokens of a stripped or annotated document. Returns the passage
 * id and token texts joined by '\n' plus a punctuation bitmap. */
UCCA_API ucca_status ucca_tokens_from_xml(const char* data, size_t len, char** id_out,
                                          char** texts_out, char** punct_out,
                                          size_t* n_out);

#ifdef __cplusplus
}
#endif

#endif /* UCCA_H */
