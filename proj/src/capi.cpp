// SPDX-License-Identifier: Apache-2.0

#include "tlpo.h"

#include <cstring>
#include <new>
#include <string>

#include "tlpo/analysis.hpp"
#include "tlpo/corpus.hpp"
#include "tlpo/digest.hpp"
#include "tlpo/errors.hpp"
#include "tlpo/json_util.hpp"
#include "tlpo/policy.hpp"
#include "tlpo/trainer.hpp"

struct tlpo_corpus {
  tlpo::Corpus impl;
};

struct tlpo_policy {
  tlpo::PolicyTable impl;
  std::uint64_t step = 0;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(::operator new(s.size() + 1, std::nothrow));
  if (!out) return nullptr;
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
tlpo_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return TLPO_STATUS_OK;
  } catch (const tlpo::ConfigError& e) {
    g_last_error = e.what();
    return TLPO_STATUS_INVALID_ARGUMENT;
  } catch (const tlpo::IoError& e) {
    g_last_error = e.what();
    return TLPO_STATUS_IO_ERROR;
  } catch (const tlpo::FormatError& e) {
    g_last_error = e.what();
    return TLPO_STATUS_BAD_FORMAT;
  } catch (const tlpo::NumericError& e) {
    g_last_error = e.what();
    return TLPO_STATUS_NUMERIC;
  } catch (const tlpo::UndefinedMetricError& e) {
    g_last_error = e.what();
    return TLPO_STATUS_UNDEFINED_METRIC;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TLPO_STATUS_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return TLPO_STATUS_INTERNAL;
  }
}

tlpo_status require(bool ok, const char* message) {
  if (ok) return TLPO_STATUS_OK;
  g_last_error = message;
  return TLPO_STATUS_INVALID_ARGUMENT;
}

tlpo::CorpusSpec spec_from_config(const char* spec_json) {
  tlpo::CorpusSpec spec;
  if (!spec_json || !*spec_json) return spec;
  const tlpo::Json j = tlpo::parse_json(spec_json, "corpus spec");
  spec.lang = j.value("lang", spec.lang);
  spec.target_words = j.value("target_words", spec.target_words);
  spec.confused_words = j.value("confused_words", spec.confused_words);
  spec.english_words = j.value("english_words", spec.english_words);
  spec.neutral_words = j.value("neutral_words", spec.neutral_words);
  spec.prompts = j.value("prompts", spec.prompts);
  spec.confusion_rate = j.value("confusion_rate", spec.confusion_rate);
  spec.english_mass = j.value("english_mass", spec.english_mass);
  spec.neutral_mass = j.value("neutral_mass", spec.neutral_mass);
  spec.stop_mass = j.value("stop_mass", spec.stop_mass);
  spec.window = j.value("window", spec.window);
  spec.max_response_len = j.value("max_response_len", spec.max_response_len);
  spec.holdout_fraction = j.value("holdout_fraction", spec.holdout_fraction);
  spec.tag_coupling = j.value("tag_coupling", spec.tag_coupling);
  spec.seed = j.value("seed", spec.seed);
  return spec;
}

tlpo::TrainConfig train_config_from_json(const char* config_json) {
  tlpo::TrainConfig config;
  if (!config_json || !*config_json) return config;
  const tlpo::Json j = tlpo::parse_json(config_json, "train config");
  config.candidate_count = j.value("candidate_count", config.candidate_count);
  config.lookahead = j.value("lookahead", config.lookahead);
  config.inner_iterations = j.value("inner_iterations", config.inner_iterations);
  config.steps = j.value("steps", config.steps);
  config.batch_size = j.value("batch_size", config.batch_size);
  config.step_size = j.value("step_size", config.step_size);
  config.clip_eps = j.value("clip_eps", config.clip_eps);
  config.kl_beta = j.value("kl_beta", config.kl_beta);
  if (j.contains("mode"))
    config.mode = tlpo::english_mode_from_name(j.at("mode").get<std::string>());
  if (j.contains("variant"))
    config.variant =
        tlpo::advantage_variant_from_name(j.at("variant").get<std::string>());
  if (j.contains("strategy"))
    config.strategy =
        tlpo::selection_strategy_from_name(j.at("strategy").get<std::string>());
  config.max_response_len = j.value("max_response_len", config.max_response_len);
  config.greedy_lookahead = j.value("greedy_lookahead", config.greedy_lookahead);
  config.seed = j.value("seed", config.seed);
  config.incident_limit = j.value("incident_limit", config.incident_limit);
  config.checkpoint_interval =
      j.value("checkpoint_interval", config.checkpoint_interval);
  config.checkpoint_dir = j.value("checkpoint_dir", config.checkpoint_dir);
  return config;
}

tlpo::EvalConfig eval_config_from_json(const char* config_json) {
  tlpo::EvalConfig config;
  if (!config_json || !*config_json) return config;
  const tlpo::Json j = tlpo::parse_json(config_json, "eval config");
  if (j.contains("mode"))
    config.mode = tlpo::english_mode_from_name(j.at("mode").get<std::string>());
  if (j.contains("split"))
    config.split = tlpo::eval_split_from_name(j.at("split").get<std::string>());
  config.samples_per_prompt = j.value("samples_per_prompt", config.samples_per_prompt);
  config.max_response_len = j.value("max_response_len", config.max_response_len);
  config.seed = j.value("seed", config.seed);
  return config;
}

}  // namespace

extern "C" {

const char* tlpo_version(void) { return "0.1.0"; }

const char* tlpo_status_name(tlpo_status status) {
  switch (status) {
    case TLPO_STATUS_OK: return "ok";
    case TLPO_STATUS_INVALID_ARGUMENT: return "invalid_argument";
    case TLPO_STATUS_IO_ERROR: return "io_error";
    case TLPO_STATUS_BAD_FORMAT: return "bad_format";
    case TLPO_STATUS_NUMERIC: return "numeric";
    case TLPO_STATUS_UNDEFINED_METRIC: return "undefined_metric";
    default: return "internal";
  }
}

const char* tlpo_last_error(void) { return g_last_error.c_str(); }

void tlpo_string_free(char* s) { ::operator delete(s); }

tlpo_status tlpo_corpus_generate(const char* spec_json, tlpo_corpus** out) {
  if (auto rc = require(out != nullptr, "out must not be null")) return rc;
  return guarded([&] {
    auto* handle = new tlpo_corpus{tlpo::gen_synthetic_corpus(spec_from_config(spec_json))};
    *out = handle;
  });
}

tlpo_status tlpo_corpus_save(const tlpo_corpus* corpus, const char* dir) {
  if (auto rc = require(corpus && dir, "corpus and dir must not be null")) return rc;
  return guarded([&] { tlpo::save_corpus(corpus->impl, dir); });
}

tlpo_status tlpo_corpus_open(const char* dir, tlpo_corpus** out) {
  if (auto rc = require(dir && out, "dir and out must not be null")) return rc;
  return guarded([&] { *out = new tlpo_corpus{tlpo::load_corpus(dir)}; });
}

void tlpo_corpus_close(tlpo_corpus* corpus) { delete corpus; }

tlpo_status tlpo_corpus_base_policy(const tlpo_corpus* corpus, tlpo_policy** out) {
  if (auto rc = require(corpus && out, "corpus and out must not be null")) return rc;
  return guarded([&] { *out = new tlpo_policy{corpus->impl.base_policy, 0}; });
}

tlpo_status tlpo_policy_open(const char* path, tlpo_policy** out) {
  if (auto rc = require(path && out, "path and out must not be null")) return rc;
  return guarded([&] {
    auto [policy, step] = tlpo::load_checkpoint(path);
    *out = new tlpo_policy{std::move(policy), step};
  });
}

tlpo_status tlpo_policy_save(const tlpo_policy* policy, const char* path) {
  if (auto rc = require(policy && path, "policy and path must not be null")) return rc;
  return guarded([&] { tlpo::save_checkpoint(policy->impl, policy->step, path); });
}

tlpo_status tlpo_policy_step(const tlpo_policy* policy, uint64_t* step_out) {
  if (auto rc = require(policy && step_out, "policy and step_out must not be null"))
    return rc;
  *step_out = policy->step;
  return TLPO_STATUS_OK;
}

void tlpo_policy_close(tlpo_policy* policy) { delete policy; }

tlpo_status tlpo_train(const tlpo_corpus* corpus, const tlpo_policy* init,
                       const char* config_json, tlpo_policy** trained_out,
                       char** report_json_out) {
  if (auto rc = require(corpus && trained_out && report_json_out,
                        "corpus, trained_out and report_json_out must not be null"))
    return rc;
  return guarded([&] {
    tlpo::TrainConfig config = train_config_from_json(config_json);
    tlpo::PolicyTable start = init ? init->impl : corpus->impl.base_policy;
    int start_step = init ? static_cast<int>(init->step) : 0;
    if (config_json && *config_json) {
      const tlpo::Json j = tlpo::parse_json(config_json, "train config");
      start_step = j.value("start_step", start_step);
    }
    tlpo::TrainingReport report;
    tlpo::TrainState state =
        tlpo::run_training(config, corpus->impl, std::move(start), start_step, &report);
    const tlpo::Json report_json =
        tlpo::train_report_to_json(report, state, config);
    *trained_out = new tlpo_policy{std::move(state.theta),
                                   static_cast<std::uint64_t>(state.step)};
    *report_json_out = dup_string(report_json.dump(2) + "\n");
  });
}

tlpo_status tlpo_evaluate(const tlpo_corpus* corpus, const tlpo_policy* policy,
                          const char* config_json, char** report_json_out) {
  if (auto rc = require(corpus && policy && report_json_out,
                        "corpus, policy and report_json_out must not be null"))
    return rc;
  return guarded([&] {
    const tlpo::EvalConfig config = eval_config_from_json(config_json);
    const tlpo::EvalResult result =
        tlpo::evaluate_policy(corpus->impl, policy->impl, config);
    *report_json_out =
        dup_string(tlpo::eval_to_json(result, corpus->impl, policy->impl).dump(2) + "\n");
  });
}

tlpo_status tlpo_shift(const tlpo_corpus* corpus, const tlpo_policy* baseline,
                       const tlpo_policy* trained, const char* train_report_json,
                       char** report_json_out) {
  if (auto rc = require(corpus && baseline && trained && train_report_json &&
                            report_json_out,
                        "all arguments must not be null"))
    return rc;
  return guarded([&] {
    const tlpo::Json report = tlpo::parse_json(train_report_json, "train report");
    const auto contexts = tlpo::trained_contexts_from_json(report);
    const tlpo::ShiftReport shift = tlpo::shift_analysis(
        corpus->impl, baseline->impl, trained->impl, contexts);
    *report_json_out = dup_string(tlpo::shift_to_json(shift).dump(2) + "\n");
  });
}

tlpo_status tlpo_ablate(const tlpo_corpus* corpus, const char* config_json,
                        char** report_json_out) {
  if (auto rc = require(corpus && report_json_out,
                        "corpus and report_json_out must not be null"))
    return rc;
  return guarded([&] {
    const tlpo::TrainConfig config = train_config_from_json(config_json);
    tlpo::EvalConfig eval_config;
    if (config_json && *config_json) {
      const tlpo::Json j = tlpo::parse_json(config_json, "ablate config");
      if (j.contains("eval"))
        eval_config = eval_config_from_json(j.at("eval").dump().c_str());
    }
    eval_config.mode = config.mode;
    const tlpo::AblationReport report =
        tlpo::run_ablation(corpus->impl, config, eval_config);
    tlpo::Json out = tlpo::ablation_to_json(report);
    out["summary"] = tlpo::ablation_summary(report);
    *report_json_out = dup_string(out.dump(2) + "\n");
  });
}

tlpo_status tlpo_detect_text(const char* text, const char* rules_json,
                             char** report_json_out) {
  if (auto rc = require(text && report_json_out,
                        "text and report_json_out must not be null"))
    return rc;
  return guarded([&] {
    tlpo::ScriptRules rules = tlpo::ScriptRules::for_lang(tlpo::TargetLang::Korean);
    tlpo::EnglishMode mode = tlpo::EnglishMode::Neutral;
    if (rules_json && *rules_json) {
      const tlpo::Json j = tlpo::parse_json(rules_json, "detector rules");
      if (j.contains("lang"))
        rules = tlpo::ScriptRules::for_lang(
            tlpo::target_lang_from_name(j.at("lang").get<std::string>()));
      if (j.contains("mode"))
        mode = tlpo::english_mode_from_name(j.at("mode").get<std::string>());
      if (j.contains("extra_exclude"))
        rules.extra_exclude = j.at("extra_exclude").get<std::vector<std::string>>();
    }
    tlpo::Json words = tlpo::Json::array();
    for (const tlpo::Word& w : tlpo::analyze_text(text, rules, mode))
      words.push_back(tlpo::Json{{"word", w.surface},
                                 {"class", tlpo::word_class_name(w.cls)}});
    const tlpo::Json out{{"command", "detect"},
                         {"lang", tlpo::target_lang_name(rules.lang)},
                         {"mode", tlpo::english_mode_name(mode)},
                         {"unicode_version", tlpo::kUnicodeVersionPin},
                         {"words", words}};
    *report_json_out = dup_string(out.dump(2) + "\n");
  });
}

tlpo_status tlpo_digest_file(const char* path, char* out_hex) {
  if (auto rc = require(path && out_hex, "path and out_hex must not be null"))
    return rc;
  return guarded([&] {
    const std::string hex = tlpo::to_hex64(tlpo::digest_file(path));
    std::memcpy(out_hex, hex.c_str(), hex.size() + 1);
  });
}

}  // extern "C"
