/* SPDX-License-Identifier: Apache-2.0 */

/*
 * C API for the token-level policy optimization library.
 *
 * All state lives behind opaque handles; every function returns a status
 * code and a human-readable message is available from tlpo_last_error()
 * (thread-local) after a failure. Configuration goes in as JSON strings,
 * reports come back as heap-allocated JSON strings released with
 * tlpo_string_free(). No exceptions cross this boundary.
 */

#ifndef TLPO_H
#define TLPO_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef int32_t tlpo_status;

enum {
  TLPO_STATUS_OK = 0,
  TLPO_STATUS_INVALID_ARGUMENT = 1, /* bad config values or null pointers */
  TLPO_STATUS_IO_ERROR = 2,         /* missing or unwritable files */
  TLPO_STATUS_BAD_FORMAT = 3,       /* malformed or incompatible inputs */
  TLPO_STATUS_NUMERIC = 4,          /* non-finite values / incident limit */
  TLPO_STATUS_UNDEFINED_METRIC = 5, /* metric with no denominator */
  TLPO_STATUS_INTERNAL = 6
};

typedef struct tlpo_corpus tlpo_corpus; /* vocab + prompts + base policy */
typedef struct tlpo_policy tlpo_policy; /* one policy checkpoint */

const char* tlpo_version(void);
const char* tlpo_status_name(tlpo_status status);

/* Message describing the last failure on this thread; never NULL. */
const char* tlpo_last_error(void);

void tlpo_string_free(char* s);

/* ---- corpus ---------------------------------------------------------- */

/* spec_json: generator spec (all fields optional). See the README for the
 * field list; defaults give a Korean-target corpus with 6% seeded confusion. */
tlpo_status tlpo_corpus_generate(const char* spec_json, tlpo_corpus** out);
tlpo_status tlpo_corpus_save(const tlpo_corpus* corpus, const char* dir);
tlpo_status tlpo_corpus_open(const char* dir, tlpo_corpus** out);
void tlpo_corpus_close(tlpo_corpus* corpus);

/* Fresh copy of the corpus's seeded base policy. */
tlpo_status tlpo_corpus_base_policy(const tlpo_corpus* corpus, tlpo_policy** out);

/* ---- policy checkpoints ---------------------------------------------- */

tlpo_status tlpo_policy_open(const char* path, tlpo_policy** out);
tlpo_status tlpo_policy_save(const tlpo_policy* policy, const char* path);
tlpo_status tlpo_policy_step(const tlpo_policy* policy, uint64_t* step_out);
void tlpo_policy_close(tlpo_policy* policy);

/* ---- pipeline --------------------------------------------------------- */

/* Trains starting from `init` (NULL: the corpus base policy). config_json
 * accepts the training fields documented in the README; "start_step"
 * defaults to the init checkpoint's stored step. On success *trained_out
 * owns the final policy and *report_json_out the JSON training report. */
tlpo_status tlpo_train(const tlpo_corpus* corpus, const tlpo_policy* init,
                       const char* config_json, tlpo_policy** trained_out,
                       char** report_json_out);

tlpo_status tlpo_evaluate(const tlpo_corpus* corpus, const tlpo_policy* policy,
                          const char* config_json, char** report_json_out);

/* Probability-shift analysis between two checkpoints at the confusion
 * contexts recorded in a training report (pass the report JSON text). */
tlpo_status tlpo_shift(const tlpo_corpus* corpus, const tlpo_policy* baseline,
                       const tlpo_policy* trained, const char* train_report_json,
                       char** report_json_out);

/* Runs the 3 advantage variants x 2 selection strategies with shared seeds
 * and returns the ranked comparison report. */
tlpo_status tlpo_ablate(const tlpo_corpus* corpus, const char* config_json,
                        char** report_json_out);

/* ---- detector --------------------------------------------------------- */

/* Classifies raw text. rules_json: {"lang": "ko", "mode": "neutral",
 * "extra_exclude": [...]} — all fields optional. */
tlpo_status tlpo_detect_text(const char* text, const char* rules_json,
                             char** report_json_out);

/* ---- utilities -------------------------------------------------------- */

/* FNV-1a digest of a file, as a 16-hex-digit string in out_hex (>= 17 bytes). */
tlpo_status tlpo_digest_file(const char* path, char* out_hex);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* TLPO_H */
