#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <unicode/uchar.h>

#include "lrst/error.hpp"
#include "lrst/metrics/edit_distance.hpp"
#include "lrst/text/normalize.hpp"
#include "lrst/text/utf8.hpp"

namespace lrst::metrics {

enum class WerNormalization {
  lowercase_nopunct,  ///< lowercase, drop everything but letters, digits and spaces
  verbatim,           ///< whitespace tokenization only
};

inline WerNormalization parse_wer_normalization(std::string_view s) {
  if (s == "lowercase_nopunct") return WerNormalization::lowercase_nopunct;
  if (s == "verbatim") return WerNormalization::verbatim;
  throw ValidationError("unknown WER normalization '" + std::string(s) + "'");
}

inline std::string_view to_string(WerNormalization n) {
  return n == WerNormalization::verbatim ? "verbatim" : "lowercase_nopunct";
}

inline std::vector<std::string> wer_tokens(std::string_view s, WerNormalization norm) {
  if (norm == WerNormalization::verbatim) return text::split_whitespace(s);
  std::u32string kept;
  for (char32_t c : text::decode(text::lowercase(s))) {
    const auto uc = static_cast<UChar32>(c);
    if (u_isUWhiteSpace(uc)) {
      kept.push_back(U' ');
    } else if (u_isalpha(uc) || u_isdigit(uc)) {
      kept.push_back(c);
    }
  }
  return text::split_whitespace(text::encode(kept));
}

inline EditCounts levenshtein_words(const std::vector<std::string>& ref, const std::vector<std::string>& hyp) {
  return levenshtein(ref, hyp);
}

inline void check_parallel(std::size_t refs, std::size_t hyps) {
  if (refs != hyps) {
    throw ValidationError("length mismatch: " + std::to_string(refs) + " references vs " + std::to_string(hyps) +
                          " hypotheses");
  }
  if (refs == 0) throw ValidationError("empty corpus");
}

/// Corpus-level edit counts, summed over pairs.
inline EditCounts wer_counts(std::span<const std::string> refs, std::span<const std::string> hyps,
                             WerNormalization norm = WerNormalization::lowercase_nopunct) {
  check_parallel(refs.size(), hyps.size());
  EditCounts total;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    total += levenshtein_words(wer_tokens(refs[i], norm), wer_tokens(hyps[i], norm));
  }
  if (total.ref_length() == 0) throw ValidationError("zero-length reference");
  return total;
}

/// Total edit distance over total reference tokens. Can exceed 1.
inline double wer(std::span<const std::string> refs, std::span<const std::string> hyps,
                  WerNormalization norm = WerNormalization::lowercase_nopunct) {
  const auto c = wer_counts(refs, hyps, norm);
  return static_cast<double>(c.distance()) / static_cast<double>(c.ref_length());
}

}  // namespace lrst::metrics
