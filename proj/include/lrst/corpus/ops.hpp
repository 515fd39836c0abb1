#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lrst/corpus/utterance.hpp"
#include "lrst/error.hpp"
#include "lrst/text/normalize.hpp"

namespace lrst {

enum class MatchMode {
  normalized,  ///< compare dedup_key forms (case and punctuation insensitive)
  exact,       ///< compare raw transcripts byte for byte
};

inline std::string overlap_key(std::string_view transcript, MatchMode mode) {
  return mode == MatchMode::exact ? std::string(transcript)
                                  : text::normalize_text(transcript, text::NormScheme::dedup_key);
}

struct DedupResult {
  Corpus corpus;
  std::size_t removed_count = 0;
};

/// Drops every train utterance whose transcript key occurs in any held-out
/// corpus. Order of the survivors is preserved; held-out corpora are untouched.
inline DedupResult dedup_against(const Corpus& train, std::span<const Corpus> held_out,
                                 MatchMode mode = MatchMode::normalized) {
  std::unordered_set<std::string> banned;
  for (const auto& h : held_out) {
    if (h.languages().src != train.languages().src) {
      throw ValidationError("language-pair mismatch: '" + h.name() + "' has source " + h.languages().src +
                            ", train '" + train.name() + "' has " + train.languages().src);
    }
    for (const auto& u : h) banned.insert(overlap_key(u.transcript, mode));
  }

  std::vector<Utterance> kept;
  kept.reserve(train.size());
  for (const auto& u : train) {
    if (!banned.contains(overlap_key(u.transcript, mode))) kept.push_back(u);
  }
  const auto removed = train.size() - kept.size();
  return {Corpus(train.name(), train.split(), train.languages(), std::move(kept)), removed};
}

/// Number of utterances in `a` whose transcript key also occurs in `b`.
/// Used to report dev/test overlap, which is never removed.
inline std::size_t count_overlap(const Corpus& a, const Corpus& b, MatchMode mode = MatchMode::normalized) {
  std::unordered_set<std::string> keys;
  for (const auto& u : b) keys.insert(overlap_key(u.transcript, mode));
  std::size_t n = 0;
  for (const auto& u : a) n += keys.contains(overlap_key(u.transcript, mode)) ? 1 : 0;
  return n;
}

/// Concatenates corpora sharing one language pair. Ids that occur in more than
/// one input are rewritten to "<corpus name>/<id>" in every input holding them.
/// The merged corpus takes the split of the first input.
inline Corpus merge(std::span<const Corpus> corpora, std::string name) {
  if (corpora.empty()) throw ValidationError("no corpora");
  const auto& langs = corpora.front().languages();

  std::unordered_map<std::string, std::size_t> owners;
  std::size_t total = 0;
  for (const auto& c : corpora) {
    if (c.languages() != langs) {
      throw ValidationError("language-pair mismatch: '" + c.name() + "' is " + c.languages().str() + ", expected " +
                            langs.str());
    }
    total += c.size();
    for (const auto& u : c) ++owners[u.id];
  }

  std::vector<Utterance> out;
  out.reserve(total);
  std::unordered_set<std::string> used;
  for (const auto& c : corpora) {
    for (auto u : c) {
      if (owners[u.id] > 1) u.id = c.name() + "/" + u.id;
      if (!used.insert(u.id).second) {
        throw ValidationError("id '" + u.id + "' still collides after prefixing; give the corpora distinct names");
      }
      out.push_back(std::move(u));
    }
  }
  return Corpus(std::move(name), corpora.front().split(), langs, std::move(out));
}

struct CorpusStats {
  std::size_t count = 0;
  std::size_t with_audio = 0;
  std::size_t with_translation = 0;
  std::size_t synthetic = 0;
  Split split = Split::train;
  LanguagePair langs;

  bool operator==(const CorpusStats&) const = default;
};

inline CorpusStats stats(const Corpus& c) {
  CorpusStats s;
  s.count = c.size();
  s.split = c.split();
  s.langs = c.languages();
  for (const auto& u : c) {
    s.with_audio += u.audio.has_value();
    s.with_translation += u.translation.has_value();
    s.synthetic += u.origin == Origin::synthetic;
  }
  return s;
}

}  // namespace lrst
