#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lrst/corpus/utterance.hpp"
#include "lrst/error.hpp"

namespace lrst::adapter {

enum class Task { transcribe, translate, translate_audio, capabilities };

inline std::string_view to_string(Task t) {
  switch (t) {
    case Task::transcribe: return "transcribe";
    case Task::translate: return "translate";
    case Task::translate_audio: return "translate_audio";
    case Task::capabilities: return "capabilities";
  }
  return "capabilities";
}

inline std::optional<Task> parse_task(std::string_view s) {
  if (s == "transcribe") return Task::transcribe;
  if (s == "translate") return Task::translate;
  if (s == "translate_audio") return Task::translate_audio;
  if (s == "capabilities") return Task::capabilities;
  return std::nullopt;
}

inline constexpr int kDefaultBeamSize = 5;

struct AdapterRequest {
  std::string id;
  Task task = Task::translate;
  std::optional<std::string> audio;
  std::optional<std::string> text;
  std::string src_lang;
  std::string tgt_lang;
  int beam_size = kDefaultBeamSize;
  bool return_score = false;

  bool operator==(const AdapterRequest&) const = default;
};

struct AdapterResponse {
  std::string id;
  bool ok = false;
  std::optional<std::string> text;
  std::optional<double> avg_log_prob;
  std::optional<std::string> error;

  static AdapterResponse success(std::string id, std::string text, std::optional<double> score = std::nullopt) {
    return {std::move(id), true, std::move(text), score, std::nullopt};
  }
  static AdapterResponse failure(std::string id, std::string error) {
    return {std::move(id), false, std::nullopt, std::nullopt, std::move(error)};
  }

  bool operator==(const AdapterResponse&) const = default;
};

struct Capabilities {
  std::vector<Task> tasks;
  std::vector<LanguagePair> language_pairs;
  std::string backend;
  nlohmann::json metadata = nlohmann::json::object();

  bool supports(Task t) const { return std::find(tasks.begin(), tasks.end(), t) != tasks.end(); }
  bool supports(const LanguagePair& p) const {
    return std::find(language_pairs.begin(), language_pairs.end(), p) != language_pairs.end();
  }
};

/// Throws CapabilityError unless `caps` offers `task` for `pair`.
inline void require(const Capabilities& caps, Task task, const LanguagePair& pair) {
  if (!caps.supports(task)) {
    throw CapabilityError("adapter '" + caps.backend + "' does not support task '" + std::string(to_string(task)) + "'");
  }
  if (!caps.supports(pair)) {
    throw CapabilityError("adapter '" + caps.backend + "' does not support language pair " + pair.str());
  }
}

inline void validate(const AdapterRequest& r) {
  if (r.id.empty()) throw ValidationError("request id must be non-empty");
  if ((r.task == Task::transcribe || r.task == Task::translate_audio) && !r.audio) {
    throw ValidationError("request '" + r.id + "': task " + std::string(to_string(r.task)) + " needs audio");
  }
  if (r.task == Task::translate && !r.text) throw ValidationError("request '" + r.id + "': translate needs text");
  if (r.beam_size < 1) throw ValidationError("request '" + r.id + "': beam_size must be >= 1");
}

inline nlohmann::ordered_json to_json(const AdapterRequest& r) {
  nlohmann::ordered_json j;
  j["id"] = r.id;
  j["task"] = std::string(to_string(r.task));
  if (r.audio) j["audio"] = *r.audio;
  if (r.text) j["text"] = *r.text;
  j["src_lang"] = r.src_lang;
  j["tgt_lang"] = r.tgt_lang;
  j["beam_size"] = r.beam_size;
  j["return_score"] = r.return_score;
  return j;
}

/// Parses a request as a server would. Throws ProtocolError on anything that
/// does not follow the grammar.
inline AdapterRequest request_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ProtocolError("request is not a JSON object");
  try {
    AdapterRequest r;
    r.id = j.at("id").get<std::string>();
    const auto task = parse_task(j.at("task").get<std::string>());
    if (!task) throw ProtocolError("unknown task '" + j.at("task").get<std::string>() + "'");
    r.task = *task;
    if (j.contains("audio") && !j["audio"].is_null()) r.audio = j["audio"].get<std::string>();
    if (j.contains("text") && !j["text"].is_null()) r.text = j["text"].get<std::string>();
    r.src_lang = j.value("src_lang", "");
    r.tgt_lang = j.value("tgt_lang", "");
    r.beam_size = j.value("beam_size", kDefaultBeamSize);
    r.return_score = j.value("return_score", false);
    validate(r);
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("bad request: ") + e.what());
  } catch (const ValidationError& e) {
    throw ProtocolError(e.what());
  }
}

inline nlohmann::ordered_json to_json(const AdapterResponse& r) {
  nlohmann::ordered_json j;
  j["id"] = r.id;
  j["ok"] = r.ok;
  if (r.text) j["text"] = *r.text;
  if (r.avg_log_prob) j["avg_log_prob"] = *r.avg_log_prob;
  if (r.error) j["error"] = *r.error;
  return j;
}

inline AdapterResponse response_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ProtocolError("response is not a JSON object");
  try {
    AdapterResponse r;
    r.id = j.at("id").is_null() ? std::string() : j.at("id").get<std::string>();
    r.ok = j.at("ok").get<bool>();
    if (j.contains("text") && !j["text"].is_null()) r.text = j["text"].get<std::string>();
    if (j.contains("avg_log_prob") && !j["avg_log_prob"].is_null()) r.avg_log_prob = j["avg_log_prob"].get<double>();
    if (j.contains("error") && !j["error"].is_null()) r.error = j["error"].get<std::string>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("bad response: ") + e.what());
  }
}

inline AdapterResponse parse_response_line(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw ProtocolError(std::string("malformed response line: ") + e.what());
  }
  return response_from_json(j);
}

/// Client-side conformance check of a response against its request.
/// A response that breaks the protocol (rather than reporting a failure)
/// is a ProtocolError: the whole exchange is untrustworthy.
inline void check_response(const AdapterRequest& req, const AdapterResponse& resp) {
  if (resp.id != req.id) throw ProtocolError("response id '" + resp.id + "' does not match request '" + req.id + "'");
  if (!resp.ok) return;
  if (!resp.text) throw ProtocolError("response '" + resp.id + "' is ok but has no text");
  if (req.return_score) {
    if (!resp.avg_log_prob) throw ProtocolError("response '" + resp.id + "' is missing avg_log_prob");
    const double s = *resp.avg_log_prob;
    if (!std::isfinite(s) || s > 0.0) {
      throw ProtocolError("response '" + resp.id + "' has avg_log_prob " + std::to_string(s) +
                          "; expected a mean per-token natural log probability <= 0");
    }
  }
}

inline nlohmann::ordered_json capabilities_to_json(const Capabilities& c, const std::string& id) {
  nlohmann::ordered_json j;
  j["id"] = id;
  j["ok"] = true;
  auto tasks = nlohmann::json::array();
  for (auto t : c.tasks) tasks.push_back(std::string(to_string(t)));
  j["tasks"] = tasks;
  auto pairs = nlohmann::json::array();
  for (const auto& p : c.language_pairs) pairs.push_back({p.src, p.tgt});
  j["language_pairs"] = pairs;
  j["backend"] = c.backend;
  j["metadata"] = c.metadata;
  return j;
}

/// Language pairs are accepted as ["bem","eng"], "bem-eng" or {"src","tgt"}.
inline LanguagePair language_pair_from_json(const nlohmann::json& p) {
  if (p.is_array() && p.size() == 2) return {p[0].get<std::string>(), p[1].get<std::string>()};
  if (p.is_object()) return {p.at("src").get<std::string>(), p.at("tgt").get<std::string>()};
  if (p.is_string()) {
    const auto s = p.get<std::string>();
    const auto dash = s.find('-');
    if (dash != std::string::npos && dash > 0 && dash + 1 < s.size()) return {s.substr(0, dash), s.substr(dash + 1)};
  }
  throw ProtocolError("bad language pair " + p.dump());
}

inline Capabilities capabilities_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ProtocolError("capabilities response is not an object");
  if (j.contains("ok") && j["ok"].is_boolean() && !j["ok"].get<bool>()) {
    throw CapabilityError("capabilities request failed: " + j.value("error", std::string("unknown error")));
  }
  try {
    Capabilities c;
    for (const auto& t : j.at("tasks")) {
      if (auto task = parse_task(t.get<std::string>())) c.tasks.push_back(*task);
    }
    for (const auto& p : j.at("language_pairs")) c.language_pairs.push_back(language_pair_from_json(p));
    c.backend = j.value("backend", std::string("unknown"));
    if (j.contains("metadata")) c.metadata = j["metadata"];
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("bad capabilities response: ") + e.what());
  }
}

}  // namespace lrst::adapter
