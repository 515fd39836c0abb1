#pragma once

#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lrst/augment/quality.hpp"
#include "lrst/error.hpp"
#include "lrst/text/utf8.hpp"

namespace lrst::augment {

/// A back-translation request the adapter could not serve.
struct Reject {
  std::string id;
  std::string text;
  std::string error;

  bool operator==(const Reject&) const = default;
};

inline void write_segments(std::ostream& out, std::span<const ScoredSegment> segments) {
  for (const auto& s : segments) {
    nlohmann::ordered_json j;
    j["source_text"] = s.source_text;
    j["target_text"] = s.target_text;
    j["avg_log_prob"] = s.avg_log_prob;
    j["quality"] = s.quality;
    out << j.dump() << '\n';
  }
}

/// Reads scored-segment JSONL. `quality` may be omitted and is then derived;
/// when present it must equal exp(avg_log_prob).
inline std::vector<ScoredSegment> read_segments(std::istream& in) {
  std::vector<ScoredSegment> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim_ascii(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      auto seg = ScoredSegment::from_log_prob(j.at("source_text").get<std::string>(),
                                              j.at("target_text").get<std::string>(),
                                              j.at("avg_log_prob").get<double>());
      if (j.contains("quality")) seg.quality = j.at("quality").get<double>();
      validate(seg);
      out.push_back(std::move(seg));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(lineno, e.what());
    } catch (const ValidationError& e) {
      throw ParseError(lineno, e.what());
    }
  }
  return out;
}

inline void write_rejects(std::ostream& out, std::span<const Reject> rejects) {
  for (const auto& r : rejects) {
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["text"] = r.text;
    j["error"] = r.error;
    out << j.dump() << '\n';
  }
}

inline std::vector<ScoredSegment> load_segments(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  try {
    return read_segments(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.detail(), path.string());
  }
}

template <typename Writer, typename Items>
void write_file(const std::filesystem::path& path, Writer&& writer, const Items& items) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  writer(out, items);
  out.flush();
  if (!out) throw IoError(path.string(), "write failed");
}

inline void save_segments(const std::filesystem::path& path, std::span<const ScoredSegment> segments) {
  write_file(path, [](std::ostream& o, auto s) { write_segments(o, s); }, segments);
}

inline void save_rejects(const std::filesystem::path& path, std::span<const Reject> rejects) {
  write_file(path, [](std::ostream& o, auto r) { write_rejects(o, r); }, rejects);
}

}  // namespace lrst::augment
