#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "lrst/adapter/adapter.hpp"
#include "lrst/adapter/protocol.hpp"
#include "lrst/error.hpp"

namespace lrst::adapter {

inline constexpr const char* kFixtureEnv = "LRST_ADAPTER_FIXTURE";

/// Deterministic, table-driven backend.
///
/// Fixture layout (JSON):
///
///     {
///       "backend": "mock",
///       "tasks": ["transcribe", "translate", "translate_audio"],
///       "language_pairs": [["bem", "eng"]],
///       "metadata": {...},                     // copied into capabilities
///       "transcribe": {"<audio>": ENTRY},
///       "translate": {"bem-eng": {"<text>": ENTRY}},
///       "translate_audio": {"bem-eng": {"<audio>": ENTRY}},
///       "translate_fallback": "error" | "identity",
///       "default_avg_log_prob": -0.1
///     }
///
/// ENTRY is a string, {"text": ..., "avg_log_prob": ...}, or {"error": ...}.
/// Audio keys match the full reference first, then its file stem, so
/// "clips/u1.wav" finds an entry keyed "u1".
class MockAdapter final : public Adapter {
 public:
  explicit MockAdapter(nlohmann::json table, std::string origin = "inline")
      : table_(std::move(table)), origin_(std::move(origin)) {
    if (!table_.is_object()) throw ValidationError("mock fixture must be a JSON object");
    caps_ = capabilities_from_json(table_);
    if (!table_.contains("backend")) caps_.backend = "mock";
    fallback_identity_ = table_.value("translate_fallback", std::string("error")) == "identity";
    default_score_ = table_.value("default_avg_log_prob", 0.0);
  }

  static MockAdapter from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw AdapterError("mock fixture " + path.string() + ": cannot open");
    try {
      return MockAdapter(nlohmann::json::parse(in), path.string());
    } catch (const nlohmann::json::parse_error& e) {
      throw AdapterError("mock fixture " + path.string() + ": " + e.what());
    }
  }

  static MockAdapter from_env() {
    const char* path = std::getenv(kFixtureEnv);
    if (path == nullptr || *path == '\0') throw AdapterError(std::string(kFixtureEnv) + " is not set");
    return from_file(path);
  }

  Capabilities capabilities() override { return caps_; }

  std::vector<AdapterResponse> infer(std::span<const AdapterRequest> requests, std::size_t in_flight) override {
    validate_batch(requests);
    std::vector<AdapterResponse> out(requests.size());
    parallel_for(requests.size(), in_flight, [&](std::size_t i) {
      out[i] = answer(requests[i]);
      check_response(requests[i], out[i]);
    });
    return out;
  }

  std::string describe() const override { return "mock:" + origin_; }

  /// Server-side behaviour for one request. Pure; safe to call concurrently.
  AdapterResponse answer(const AdapterRequest& r) const {
    const LanguagePair pair{r.src_lang, r.tgt_lang};
    switch (r.task) {
      case Task::capabilities:
        return AdapterResponse::success(r.id, caps_.backend);
      case Task::transcribe: {
        if (!caps_.supports(Task::transcribe)) return unsupported(r);
        return from_entry(r, lookup_audio(child(table_, "transcribe"), *r.audio));
      }
      case Task::translate_audio: {
        if (!caps_.supports(Task::translate_audio)) return unsupported(r);
        if (!caps_.supports(pair)) return unsupported_pair(r);
        return from_entry(r, lookup_audio(child(child(table_, "translate_audio"), pair.str()), *r.audio));
      }
      case Task::translate: {
        if (!caps_.supports(Task::translate)) return unsupported(r);
        if (!caps_.supports(pair)) return unsupported_pair(r);
        const auto& entries = child(child(table_, "translate"), pair.str());
        if (auto it = entries.find(*r.text); it != entries.end()) return from_entry(r, &*it);
        if (fallback_identity_) return AdapterResponse::success(r.id, *r.text, score_for(r, default_score_));
        return AdapterResponse::failure(r.id, "no table entry for text");
      }
    }
    return AdapterResponse::failure(r.id, "unknown task");
  }

  /// One wire line in, one wire line out. Malformed lines get an ok=false
  /// reply with a null id so a server loop can keep going.
  std::string answer_line(std::string_view line) const {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      return error_line(nullptr, std::string("parse error: ") + e.what());
    }
    const auto id = j.is_object() && j.contains("id") && j["id"].is_string() ? nlohmann::json(j["id"]) : nullptr;
    AdapterRequest req;
    try {
      req = request_from_json(j);
    } catch (const ProtocolError& e) {
      return error_line(id, e.what());
    }
    if (req.task == Task::capabilities) return capabilities_to_json(caps_, req.id).dump();
    return to_json(answer(req)).dump();
  }

 private:
  static const nlohmann::json& child(const nlohmann::json& j, const std::string& key) {
    static const nlohmann::json empty = nlohmann::json::object();
    if (!j.is_object()) return empty;
    auto it = j.find(key);
    return it == j.end() ? empty : *it;
  }

  static std::string error_line(const nlohmann::json& id, const std::string& msg) {
    nlohmann::ordered_json j;
    j["id"] = id;
    j["ok"] = false;
    j["error"] = msg;
    return j.dump();
  }

  static const nlohmann::json* lookup_audio(const nlohmann::json& table, const std::string& audio) {
    if (auto it = table.find(audio); it != table.end()) return &*it;
    const auto stem = std::filesystem::path(audio).stem().string();
    if (auto it = table.find(stem); it != table.end()) return &*it;
    return nullptr;
  }

  std::optional<double> score_for(const AdapterRequest& r, double score) const {
    return r.return_score ? std::optional<double>(score) : std::nullopt;
  }

  AdapterResponse from_entry(const AdapterRequest& r, const nlohmann::json* e) const {
    if (e == nullptr) {
      return AdapterResponse::failure(r.id, r.audio ? "no such file: " + *r.audio : "no table entry for text");
    }
    if (e->is_string()) return AdapterResponse::success(r.id, e->get<std::string>(), score_for(r, default_score_));
    if (e->contains("error")) return AdapterResponse::failure(r.id, (*e)["error"].get<std::string>());
    return AdapterResponse::success(r.id, e->at("text").get<std::string>(),
                                    score_for(r, e->value("avg_log_prob", default_score_)));
  }

  AdapterResponse unsupported(const AdapterRequest& r) const {
    return AdapterResponse::failure(r.id, "capability error: task '" + std::string(to_string(r.task)) +
                                              "' not supported by " + caps_.backend);
  }

  AdapterResponse unsupported_pair(const AdapterRequest& r) const {
    return AdapterResponse::failure(r.id, "capability error: unsupported language pair " + r.src_lang + "-" +
                                              r.tgt_lang);
  }

  nlohmann::json table_;
  std::string origin_;
  Capabilities caps_;
  bool fallback_identity_ = false;
  double default_score_ = 0.0;
};

}  // namespace lrst::adapter
