#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lrst/corpus/utterance.hpp"
#include "lrst/error.hpp"
#include "lrst/text/utf8.hpp"

namespace lrst {

enum class CorpusFormat { tsv, jsonl };

inline CorpusFormat parse_corpus_format(std::string_view s) {
  if (s == "tsv") return CorpusFormat::tsv;
  if (s == "jsonl") return CorpusFormat::jsonl;
  throw ValidationError("unknown corpus format '" + std::string(s) + "' (expected tsv or jsonl)");
}

/// Guesses the format from the file extension (.tsv or .jsonl/.json).
inline CorpusFormat corpus_format_for(const std::filesystem::path& p) {
  const auto ext = p.extension().string();
  if (ext == ".tsv") return CorpusFormat::tsv;
  if (ext == ".jsonl" || ext == ".json") return CorpusFormat::jsonl;
  throw ValidationError("cannot infer corpus format from '" + p.string() + "'; pass --format");
}

/// Corpus-level metadata that the record files do not carry.
struct LoadOptions {
  std::string name;  ///< empty: use the file stem
  Split split = Split::train;
  LanguagePair langs{"bem", "eng"};
};

inline constexpr std::string_view kTsvHeader = "id\taudio\ttranscript\ttranslation\torigin\tquality";

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s, std::size_t line) {
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ParseError(line, "bad number '" + std::string(s) + "'");
  }
  return v;
}

// TSV fields escape backslash, tab, CR and LF so any transcript round-trips.
inline std::string tsv_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

inline std::string tsv_unescape(std::string_view s, std::size_t line) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\') {
      out.push_back(s[i]);
      continue;
    }
    if (++i == s.size()) throw ParseError(line, "dangling backslash");
    switch (s[i]) {
      case '\\': out.push_back('\\'); break;
      case 't': out.push_back('\t'); break;
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      default: throw ParseError(line, std::string("unknown escape \\") + s[i]);
    }
  }
  return out;
}

inline std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return fields;
}

inline Utterance utterance_from_tsv(std::string_view line, std::size_t lineno, const LanguagePair& langs) {
  const auto f = split_tabs(line);
  if (f.size() != 6) {
    throw ParseError(lineno, "expected 6 tab-separated fields, got " + std::to_string(f.size()));
  }
  const auto opt = [&](std::string_view v) -> std::optional<std::string> {
    if (v.empty()) return std::nullopt;
    return tsv_unescape(v, lineno);
  };
  Utterance u;
  u.id = tsv_unescape(f[0], lineno);
  u.audio = opt(f[1]);
  u.transcript = tsv_unescape(f[2], lineno);
  u.translation = opt(f[3]);
  u.src_lang = langs.src;
  u.tgt_lang = langs.tgt;
  try {
    if (!f[4].empty()) u.origin = parse_origin(f[4]);
  } catch (const ValidationError& e) {
    throw ParseError(lineno, e.what());
  }
  if (!f[5].empty()) u.quality = parse_double(f[5], lineno);
  return u;
}

inline Utterance utterance_from_json(std::string_view line, std::size_t lineno, const LanguagePair& langs) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(lineno, std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError(lineno, "record is not a JSON object");

  Utterance u;
  u.src_lang = langs.src;
  u.tgt_lang = langs.tgt;
  bool have_id = false;
  bool have_transcript = false;
  const auto str = [&](const nlohmann::json& v, const std::string& key) {
    if (!v.is_string()) throw ParseError(lineno, "key '" + key + "' must be a string");
    return v.get<std::string>();
  };
  for (const auto& [key, v] : j.items()) {
    if (v.is_null()) continue;
    if (key == "id") {
      u.id = str(v, key);
      have_id = true;
    } else if (key == "audio") {
      u.audio = str(v, key);
    } else if (key == "transcript") {
      u.transcript = str(v, key);
      have_transcript = true;
    } else if (key == "translation") {
      u.translation = str(v, key);
    } else if (key == "origin") {
      try {
        u.origin = parse_origin(str(v, key));
      } catch (const ValidationError& e) {
        throw ParseError(lineno, e.what());
      }
    } else if (key == "quality") {
      if (!v.is_number()) throw ParseError(lineno, "key 'quality' must be a number");
      u.quality = v.get<double>();
    } else {
      throw ParseError(lineno, "unknown key '" + key + "'");
    }
  }
  if (!have_id) throw ParseError(lineno, "missing key 'id'");
  if (!have_transcript) throw ParseError(lineno, "missing key 'transcript'");
  return u;
}

}  // namespace detail

/// Reads a corpus from a stream. Line numbers in errors are 1-based and count
/// the TSV header.
inline Corpus read_corpus(std::istream& in, CorpusFormat format, const LoadOptions& opts) {
  std::vector<Utterance> utts;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  bool any_line = false;
  bool header_seen = false;

  while (std::getline(in, line)) {
    ++lineno;
    any_line = true;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (auto bad = text::find_invalid_utf8(line)) {
      throw ParseError(lineno, "invalid UTF-8 at byte " + std::to_string(*bad));
    }
    if (format == CorpusFormat::tsv && !header_seen) {
      if (line != kTsvHeader) throw ParseError(lineno, "bad TSV header; expected '" + std::string(kTsvHeader) + "'");
      header_seen = true;
      continue;
    }
    if (format == CorpusFormat::jsonl && text::trim_ascii(line).empty()) continue;

    Utterance u = format == CorpusFormat::tsv ? detail::utterance_from_tsv(line, lineno, opts.langs)
                                              : detail::utterance_from_json(line, lineno, opts.langs);
    try {
      validate(u);
    } catch (const ValidationError& e) {
      throw ParseError(lineno, e.what());
    }
    if (!seen.insert(u.id).second) throw ParseError(lineno, "duplicate id '" + u.id + "'");
    utts.push_back(std::move(u));
  }
  if (!any_line || (format == CorpusFormat::jsonl && utts.empty())) throw ParseError(0, "empty corpus");
  return Corpus(opts.name, opts.split, opts.langs, std::move(utts));
}

inline Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format, LoadOptions opts = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  if (opts.name.empty()) opts.name = path.stem().string();
  try {
    return read_corpus(in, format, opts);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.detail(), path.string());
  }
}

inline void write_corpus(std::ostream& out, const Corpus& corpus, CorpusFormat format) {
  if (format == CorpusFormat::tsv) {
    out << kTsvHeader << '\n';
    for (const auto& u : corpus) {
      out << detail::tsv_escape(u.id) << '\t' << (u.audio ? detail::tsv_escape(*u.audio) : "") << '\t'
          << detail::tsv_escape(u.transcript) << '\t' << (u.translation ? detail::tsv_escape(*u.translation) : "")
          << '\t' << to_string(u.origin) << '\t' << (u.quality ? detail::format_double(*u.quality) : "") << '\n';
    }
    return;
  }
  for (const auto& u : corpus) {
    nlohmann::ordered_json j;
    j["id"] = u.id;
    if (u.audio) j["audio"] = *u.audio;
    j["transcript"] = u.transcript;
    if (u.translation) j["translation"] = *u.translation;
    j["origin"] = std::string(to_string(u.origin));
    if (u.quality) j["quality"] = *u.quality;
    out << j.dump() << '\n';
  }
}

inline void write_corpus(const Corpus& corpus, const std::filesystem::path& path, CorpusFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  write_corpus(out, corpus, format);
  out.flush();
  if (!out) throw IoError(path.string(), "write failed");
}

}  // namespace lrst
