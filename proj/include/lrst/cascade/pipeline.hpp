#pragma once

#include <chrono>
#include <span>
#include <string>
#include <vector>

#include "lrst/adapter/adapter.hpp"
#include "lrst/augment/tag.hpp"
#include "lrst/cascade/config.hpp"
#include "lrst/cascade/run_report.hpp"
#include "lrst/corpus/utterance.hpp"
#include "lrst/error.hpp"

namespace lrst::cascade {

namespace detail {

inline void check_inputs(const Corpus& corpus, const PipelineConfig& config, Mode expected) {
  validate(config);
  if (config.mode != expected) {
    throw ValidationError("config mode is " + std::string(to_string(config.mode)) + ", expected " +
                          std::string(to_string(expected)));
  }
  if (corpus.empty()) throw ValidationError("empty corpus");
  for (const auto& u : corpus) {
    if (!u.translation) throw ValidationError("missing reference translation for '" + u.id + "'");
    if (expected != Mode::mt_only && !u.audio) throw ValidationError("utterance '" + u.id + "' has no audio");
  }
}

inline adapter::AdapterRequest make_request(std::string id, adapter::Task task, const LanguagePair& pair,
                                            const PipelineConfig& config) {
  adapter::AdapterRequest r;
  r.id = std::move(id);
  r.task = task;
  r.src_lang = pair.src;
  r.tgt_lang = pair.tgt;
  r.beam_size = config.beam_size;
  return r;
}

inline void fail_if_strict(const PipelineConfig& config, const UtteranceRecord& rec) {
  if (config.strict && !rec.ok) {
    throw AdapterError("utterance '" + rec.id + "' failed: " + rec.error.value_or("unknown error"));
  }
}

inline nlohmann::json adapter_snapshot(adapter::Adapter& backend, const adapter::Capabilities& caps) {
  nlohmann::json j;
  j["endpoint"] = backend.describe();
  j["backend"] = caps.backend;
  j["metadata"] = caps.metadata;
  return j;
}

inline RunReport finish(const Corpus& corpus, const PipelineConfig& config, std::vector<UtteranceRecord> records,
                        nlohmann::json adapter_info, std::chrono::steady_clock::time_point started) {
  RunReport r;
  r.system = config.system;
  r.mode = config.mode;
  r.records = std::move(records);
  r.config = config;
  r.adapter_info = std::move(adapter_info);
  score_records(r);
  if (r.records.size() != corpus.size() || r.evaluated + r.failed != corpus.size()) {
    throw Error("internal: record accounting does not match corpus size");
  }
  r.duration_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return r;
}

}  // namespace detail

/// ASR then MT for every utterance. An utterance whose transcription fails
/// is not translated; failed utterances are kept in the report but excluded
/// from the aggregates (unless `strict`, which aborts).
inline RunReport run_cascaded(const Corpus& corpus, const PipelineConfig& config, adapter::Adapter& backend) {
  const auto started = std::chrono::steady_clock::now();
  detail::check_inputs(corpus, config, Mode::cascaded);
  const auto& pair = corpus.languages();
  const auto caps = backend.capabilities();
  adapter::require(caps, adapter::Task::transcribe, pair);
  adapter::require(caps, adapter::Task::translate, pair);

  std::vector<adapter::AdapterRequest> asr;
  asr.reserve(corpus.size());
  for (const auto& u : corpus) {
    auto r = detail::make_request("asr:" + u.id, adapter::Task::transcribe, pair, config);
    r.audio = u.audio;
    asr.push_back(std::move(r));
  }
  const auto transcripts = backend.infer(asr, config.concurrency_limit);

  std::vector<UtteranceRecord> records(corpus.size());
  std::vector<adapter::AdapterRequest> mt;
  std::vector<std::size_t> mt_index;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& u = corpus[i];
    auto& rec = records[i];
    rec.id = u.id;
    rec.ref_transcript = u.transcript;
    rec.ref_translation = u.translation;
    if (!transcripts[i].ok) {
      rec.ok = false;
      rec.error = "transcribe: " + transcripts[i].error.value_or("unknown error");
      detail::fail_if_strict(config, rec);
      continue;
    }
    rec.hyp_transcript = transcripts[i].text;
    auto r = detail::make_request("mt:" + u.id, adapter::Task::translate, pair, config);
    r.text = *transcripts[i].text;
    mt.push_back(std::move(r));
    mt_index.push_back(i);
  }

  const auto translations = backend.infer(mt, config.concurrency_limit);
  for (std::size_t k = 0; k < translations.size(); ++k) {
    auto& rec = records[mt_index[k]];
    if (translations[k].ok) {
      rec.hyp_translation = translations[k].text;
    } else {
      rec.ok = false;
      rec.error = "translate: " + translations[k].error.value_or("unknown error");
      detail::fail_if_strict(config, rec);
    }
  }
  return detail::finish(corpus, config, std::move(records), detail::adapter_snapshot(backend, caps), started);
}

/// One audio-to-translation call per utterance; no transcripts.
inline RunReport run_end_to_end(const Corpus& corpus, const PipelineConfig& config, adapter::Adapter& backend) {
  const auto started = std::chrono::steady_clock::now();
  detail::check_inputs(corpus, config, Mode::end_to_end);
  const auto& pair = corpus.languages();
  const auto caps = backend.capabilities();
  adapter::require(caps, adapter::Task::translate_audio, pair);

  std::vector<adapter::AdapterRequest> reqs;
  reqs.reserve(corpus.size());
  for (const auto& u : corpus) {
    auto r = detail::make_request("st:" + u.id, adapter::Task::translate_audio, pair, config);
    r.audio = u.audio;
    reqs.push_back(std::move(r));
  }
  const auto out = backend.infer(reqs, config.concurrency_limit);

  std::vector<UtteranceRecord> records(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    auto& rec = records[i];
    rec.id = corpus[i].id;
    rec.ref_translation = corpus[i].translation;
    if (out[i].ok) {
      rec.hyp_translation = out[i].text;
    } else {
      rec.ok = false;
      rec.error = "translate_audio: " + out[i].error.value_or("unknown error");
      detail::fail_if_strict(config, rec);
    }
  }
  return detail::finish(corpus, config, std::move(records), detail::adapter_snapshot(backend, caps), started);
}

/// Text-to-text evaluation of the MT component on the corpus transcripts.
inline RunReport run_mt_only(const Corpus& corpus, const PipelineConfig& config, adapter::Adapter& backend) {
  const auto started = std::chrono::steady_clock::now();
  detail::check_inputs(corpus, config, Mode::mt_only);
  const auto& pair = corpus.languages();
  const auto caps = backend.capabilities();
  adapter::require(caps, adapter::Task::translate, pair);

  std::vector<adapter::AdapterRequest> reqs;
  reqs.reserve(corpus.size());
  for (const auto& u : corpus) {
    auto r = detail::make_request("mt:" + u.id, adapter::Task::translate, pair, config);
    r.text = config.tag_policy == InferenceTagPolicy::strip ? augment::strip_bt_tag(u.transcript, config.tag)
                                                            : u.transcript;
    reqs.push_back(std::move(r));
  }
  const auto out = backend.infer(reqs, config.concurrency_limit);

  std::vector<UtteranceRecord> records(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    auto& rec = records[i];
    rec.id = corpus[i].id;
    rec.ref_translation = corpus[i].translation;
    if (out[i].ok) {
      rec.hyp_translation = out[i].text;
    } else {
      rec.ok = false;
      rec.error = "translate: " + out[i].error.value_or("unknown error");
      detail::fail_if_strict(config, rec);
    }
  }
  return detail::finish(corpus, config, std::move(records), detail::adapter_snapshot(backend, caps), started);
}

inline RunReport run_pipeline(const Corpus& corpus, const PipelineConfig& config, adapter::Adapter& backend) {
  switch (config.mode) {
    case Mode::cascaded: return run_cascaded(corpus, config, backend);
    case Mode::end_to_end: return run_end_to_end(corpus, config, backend);
    case Mode::mt_only: return run_mt_only(corpus, config, backend);
  }
  throw ValidationError("unknown mode");
}

/// Builds a report from pre-computed translations (one per utterance, in
/// corpus order), e.g. outputs of an earlier run or of an external system.
inline RunReport replay_hypotheses(const Corpus& corpus, std::span<const std::string> hypotheses,
                                   PipelineConfig config) {
  const auto started = std::chrono::steady_clock::now();
  if (config.adapter.empty()) config.adapter = "replay";
  validate(config);
  if (corpus.empty()) throw ValidationError("empty corpus");
  if (hypotheses.size() != corpus.size()) {
    throw ValidationError("expected " + std::to_string(corpus.size()) + " hypotheses, got " +
                          std::to_string(hypotheses.size()));
  }
  std::vector<UtteranceRecord> records(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& u = corpus[i];
    if (!u.translation) throw ValidationError("missing reference translation for '" + u.id + "'");
    records[i].id = u.id;
    records[i].ref_translation = u.translation;
    records[i].hyp_translation = hypotheses[i];
  }
  return detail::finish(corpus, config, std::move(records), nlohmann::json{{"endpoint", "replay"}}, started);
}

}  // namespace lrst::cascade
