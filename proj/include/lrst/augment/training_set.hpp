#pragma once

#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include "lrst/augment/quality.hpp"
#include "lrst/augment/tag.hpp"
#include "lrst/corpus/utterance.hpp"
#include "lrst/error.hpp"

namespace lrst::augment {

inline std::string synthetic_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "bt-%06zu", index + 1);
  return buf;
}

/// Appends quality-filtered synthetic pairs to the authentic corpus.
/// `synthetic_pair` is the pair the synthetic data is oriented as (source
/// side = back-translated text) and must match the authentic corpus.
inline Corpus build_training_set(const Corpus& authentic, std::span<const ScoredSegment> synthetic,
                                 const AugmentConfig& config, const LanguagePair& synthetic_pair) {
  validate(config);
  if (synthetic_pair != authentic.languages()) {
    throw ValidationError("language mismatch: synthetic data is " + synthetic_pair.str() + ", authentic corpus '" +
                          authentic.name() + "' is " + authentic.languages().str());
  }
  const auto filtered = filter_by_quality(synthetic, config.threshold);

  std::vector<Utterance> utts(authentic.begin(), authentic.end());
  utts.reserve(utts.size() + filtered.kept.size());
  for (std::size_t i = 0; i < filtered.kept.size(); ++i) {
    const auto& s = filtered.kept[i];
    validate(s);
    Utterance u;
    u.id = synthetic_id(i);
    u.transcript = config.tag_policy == TagPolicy::prepend ? apply_bt_tag(s.source_text, config.tag) : s.source_text;
    u.translation = s.target_text;
    u.src_lang = synthetic_pair.src;
    u.tgt_lang = synthetic_pair.tgt;
    u.origin = Origin::synthetic;
    u.quality = s.quality;
    utts.push_back(std::move(u));
  }
  if (filtered.kept.empty()) return authentic;
  return Corpus(authentic.name() + "+bt", authentic.split(), authentic.languages(), std::move(utts));
}

}  // namespace lrst::augment
