#pragma once

#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <string_view>

#include <json.hpp>

#include "lrst/adapter/protocol.hpp"
#include "lrst/augment/tag.hpp"
#include "lrst/error.hpp"
#include "lrst/metrics/report.hpp"

namespace lrst::cascade {

enum class Mode { cascaded, end_to_end, mt_only };

/// What to do with a leading back-translation tag on source text at inference.
enum class InferenceTagPolicy { keep, strip };

inline std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::cascaded: return "cascaded";
    case Mode::end_to_end: return "end_to_end";
    case Mode::mt_only: return "mt_only";
  }
  return "cascaded";
}

inline Mode parse_mode(std::string_view s) {
  if (s == "cascaded") return Mode::cascaded;
  if (s == "end_to_end") return Mode::end_to_end;
  if (s == "mt_only") return Mode::mt_only;
  throw ValidationError("unknown mode '" + std::string(s) + "' (expected cascaded, end_to_end or mt_only)");
}

inline std::string_view to_string(InferenceTagPolicy p) { return p == InferenceTagPolicy::keep ? "keep" : "strip"; }

inline InferenceTagPolicy parse_inference_tag_policy(std::string_view s) {
  if (s == "keep") return InferenceTagPolicy::keep;
  if (s == "strip") return InferenceTagPolicy::strip;
  throw ValidationError("unknown tag_policy '" + std::string(s) + "' (expected keep or strip)");
}

struct PipelineConfig {
  Mode mode = Mode::cascaded;
  std::string adapter;
  int beam_size = adapter::kDefaultBeamSize;
  InferenceTagPolicy tag_policy = InferenceTagPolicy::strip;
  std::string tag = std::string(augment::kDefaultTag);
  metrics::MetricSet metrics = metrics::MetricSet::all();
  std::size_t concurrency_limit = 4;
  metrics::WerNormalization wer_normalization = metrics::WerNormalization::lowercase_nopunct;
  std::string system = "Primary";
  bool strict = false;
  /// Provenance only (learning rate, warm-up ratio, epochs, quantization...).
  nlohmann::json training_metadata = nlohmann::json::object();
};

inline void validate(const PipelineConfig& c) {
  if (c.adapter.empty()) throw ValidationError("config: adapter must be set");
  if (c.beam_size < 1) throw ValidationError("config: beam_size must be >= 1");
  if (c.concurrency_limit < 1) throw ValidationError("config: concurrency_limit must be >= 1");
  if (c.metrics.empty()) throw ValidationError("config: metrics must not be empty");
  if (c.tag_policy == InferenceTagPolicy::strip) augment::validate_tag(c.tag);
}

inline PipelineConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  static const std::set<std::string> known = {"mode",     "adapter",           "beam_size",         "tag_policy",
                                              "tag",      "metrics",           "concurrency_limit", "wer_normalization",
                                              "system",   "strict",            "training_metadata"};
  std::string unknown;
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) unknown += (unknown.empty() ? "" : ", ") + key;
  }
  if (!unknown.empty()) throw ValidationError("config: unknown keys: " + unknown);
  if (!j.contains("mode")) throw ValidationError("config: missing key 'mode'");
  if (!j.contains("adapter")) throw ValidationError("config: missing key 'adapter'");

  PipelineConfig c;
  try {
    c.mode = parse_mode(j.at("mode").get<std::string>());
    c.adapter = j.at("adapter").get<std::string>();
    if (j.contains("beam_size")) c.beam_size = j.at("beam_size").get<int>();
    if (j.contains("tag_policy")) c.tag_policy = parse_inference_tag_policy(j.at("tag_policy").get<std::string>());
    if (j.contains("tag")) c.tag = j.at("tag").get<std::string>();
    if (j.contains("metrics")) {
      const auto& m = j.at("metrics");
      if (m.is_string()) {
        c.metrics = metrics::parse_metric_set(m.get<std::string>());
      } else {
        std::string joined;
        for (const auto& name : m) joined += name.get<std::string>() + ",";
        c.metrics = metrics::parse_metric_set(joined);
      }
    }
    if (j.contains("concurrency_limit")) {
      const auto v = j.at("concurrency_limit").get<long long>();
      if (v < 1) throw ValidationError("config: concurrency_limit must be >= 1");
      c.concurrency_limit = static_cast<std::size_t>(v);
    }
    if (j.contains("wer_normalization")) {
      c.wer_normalization = metrics::parse_wer_normalization(j.at("wer_normalization").get<std::string>());
    }
    if (j.contains("system")) c.system = j.at("system").get<std::string>();
    if (j.contains("strict")) c.strict = j.at("strict").get<bool>();
    if (j.contains("training_metadata")) c.training_metadata = j.at("training_metadata");
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  validate(c);
  return c;
}

inline PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  try {
    return config_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

inline nlohmann::ordered_json to_json(const PipelineConfig& c) {
  nlohmann::ordered_json j;
  j["mode"] = std::string(to_string(c.mode));
  j["adapter"] = c.adapter;
  j["beam_size"] = c.beam_size;
  j["tag_policy"] = std::string(to_string(c.tag_policy));
  j["tag"] = c.tag;
  j["metrics"] = metrics::metric_names(c.metrics);
  j["concurrency_limit"] = c.concurrency_limit;
  j["wer_normalization"] = std::string(metrics::to_string(c.wer_normalization));
  j["system"] = c.system;
  j["strict"] = c.strict;
  j["training_metadata"] = c.training_metadata;
  return j;
}

}  // namespace lrst::cascade
