#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lrst/cascade/config.hpp"
#include "lrst/error.hpp"
#include "lrst/metrics/report.hpp"

namespace lrst::cascade {

/// Outputs for one utterance, plus the references they are scored against,
/// so a report can be re-scored without the corpus.
struct UtteranceRecord {
  std::string id;
  bool ok = true;
  std::optional<std::string> hyp_transcript;
  std::optional<std::string> hyp_translation;
  std::optional<std::string> ref_transcript;
  std::optional<std::string> ref_translation;
  std::optional<std::string> error;

  bool operator==(const UtteranceRecord&) const = default;
};

struct RunReport {
  std::string system;
  Mode mode = Mode::cascaded;
  std::vector<UtteranceRecord> records;
  std::optional<metrics::MetricReport> metrics;      ///< translation vs reference translations
  std::optional<metrics::MetricReport> asr_metrics;  ///< transcripts vs reference transcripts
  std::size_t evaluated = 0;
  std::size_t failed = 0;
  PipelineConfig config;
  nlohmann::json adapter_info = nlohmann::json::object();
  double duration_seconds = 0.0;

  /// Equal in everything a deterministic run must reproduce. Ignores wall
  /// clock, the concurrency setting and the adapter description.
  bool same_outcome(const RunReport& o) const {
    return system == o.system && mode == o.mode && records == o.records && metrics == o.metrics &&
           asr_metrics == o.asr_metrics && evaluated == o.evaluated && failed == o.failed;
  }
};

/// Which metrics go where: WER scores the ASR stage when there is one,
/// otherwise it is computed on the translations.
struct MetricSplit {
  metrics::MetricSet mt;
  metrics::MetricSet asr;
};

inline MetricSplit split_metrics(Mode mode, const metrics::MetricSet& requested) {
  MetricSplit s;
  s.mt = requested;
  if (mode == Mode::cascaded) {
    s.mt.wer = false;
    s.asr.wer = requested.wer;
  }
  return s;
}

inline metrics::EvalOptions eval_options(const PipelineConfig& c) {
  metrics::EvalOptions o;
  o.wer_normalization = c.wer_normalization;
  return o;
}

/// Recomputes aggregates from the stored records (successful ones only).
inline void score_records(RunReport& r) {
  std::vector<std::string> mt_refs, mt_hyps, asr_refs, asr_hyps;
  r.evaluated = 0;
  r.failed = 0;
  for (const auto& rec : r.records) {
    if (!rec.ok) {
      ++r.failed;
      continue;
    }
    ++r.evaluated;
    mt_refs.push_back(rec.ref_translation.value_or(""));
    mt_hyps.push_back(rec.hyp_translation.value_or(""));
    if (rec.hyp_transcript && rec.ref_transcript) {
      asr_refs.push_back(*rec.ref_transcript);
      asr_hyps.push_back(*rec.hyp_transcript);
    }
  }
  const auto split = split_metrics(r.mode, r.config.metrics);
  const auto opts = eval_options(r.config);
  const auto comet = r.metrics ? r.metrics->comet : std::nullopt;
  r.metrics.reset();
  r.asr_metrics.reset();
  if (!mt_refs.empty() && !split.mt.empty()) {
    r.metrics = metrics::evaluate(mt_refs, mt_hyps, split.mt, opts);
    r.metrics->comet = comet;
  }
  if (!asr_refs.empty() && !split.asr.empty()) r.asr_metrics = metrics::evaluate(asr_refs, asr_hyps, split.asr, opts);
}

/// True when re-scoring the stored per-utterance outputs reproduces the
/// stored aggregates exactly.
inline bool verify_report(const RunReport& r) {
  RunReport copy = r;
  score_records(copy);
  return copy.metrics == r.metrics && copy.asr_metrics == r.asr_metrics && copy.evaluated == r.evaluated &&
         copy.failed == r.failed;
}

inline nlohmann::ordered_json to_json(const UtteranceRecord& rec) {
  nlohmann::ordered_json j;
  j["id"] = rec.id;
  j["ok"] = rec.ok;
  if (rec.hyp_transcript) j["hyp_transcript"] = *rec.hyp_transcript;
  if (rec.hyp_translation) j["hyp_translation"] = *rec.hyp_translation;
  if (rec.ref_transcript) j["ref_transcript"] = *rec.ref_transcript;
  if (rec.ref_translation) j["ref_translation"] = *rec.ref_translation;
  if (rec.error) j["error"] = *rec.error;
  return j;
}

inline nlohmann::ordered_json to_json(const RunReport& r) {
  nlohmann::ordered_json j;
  j["system"] = r.system;
  j["mode"] = std::string(to_string(r.mode));
  j["evaluated"] = r.evaluated;
  j["failed"] = r.failed;
  if (r.metrics) j["metrics"] = metrics::to_json(*r.metrics);
  if (r.asr_metrics) j["asr_metrics"] = metrics::to_json(*r.asr_metrics);
  j["config"] = to_json(r.config);
  j["adapter"] = r.adapter_info;
  j["duration_seconds"] = r.duration_seconds;
  auto records = nlohmann::ordered_json::array();
  for (const auto& rec : r.records) records.push_back(to_json(rec));
  j["records"] = std::move(records);
  return j;
}

inline RunReport run_report_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("run report must be a JSON object");
  RunReport r;
  try {
    r.system = j.at("system").get<std::string>();
    r.mode = parse_mode(j.at("mode").get<std::string>());
    r.evaluated = j.at("evaluated").get<std::size_t>();
    r.failed = j.at("failed").get<std::size_t>();
    if (j.contains("metrics")) r.metrics = metrics::metric_report_from_json(j.at("metrics"));
    if (j.contains("asr_metrics")) r.asr_metrics = metrics::metric_report_from_json(j.at("asr_metrics"));
    if (j.contains("config")) r.config = config_from_json(j.at("config"));
    if (j.contains("adapter")) r.adapter_info = j.at("adapter");
    r.duration_seconds = j.value("duration_seconds", 0.0);
    const auto opt = [](const nlohmann::json& o, const char* key) -> std::optional<std::string> {
      if (!o.contains(key) || o.at(key).is_null()) return std::nullopt;
      return o.at(key).get<std::string>();
    };
    for (const auto& o : j.at("records")) {
      UtteranceRecord rec;
      rec.id = o.at("id").get<std::string>();
      rec.ok = o.at("ok").get<bool>();
      rec.hyp_transcript = opt(o, "hyp_transcript");
      rec.hyp_translation = opt(o, "hyp_translation");
      rec.ref_transcript = opt(o, "ref_transcript");
      rec.ref_translation = opt(o, "ref_translation");
      rec.error = opt(o, "error");
      r.records.push_back(std::move(rec));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad run report: ") + e.what());
  }
  if (r.evaluated + r.failed != r.records.size()) {
    throw ValidationError("bad run report: evaluated + failed != record count");
  }
  return r;
}

inline void save_report(const RunReport& r, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out << to_json(r).dump(2) << '\n';
  out.flush();
  if (!out) throw IoError(path.string(), "write failed");
}

inline RunReport load_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  try {
    return run_report_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

}  // namespace lrst::cascade
