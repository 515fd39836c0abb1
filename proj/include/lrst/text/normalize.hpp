#pragma once

#include <string>
#include <string_view>

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "lrst/error.hpp"
#include "lrst/text/utf8.hpp"

namespace lrst::text {

enum class NormScheme {
  display,    ///< NFC, whitespace runs collapsed to one space, trimmed.
  dedup_key,  ///< display, lowercased, only letters/digits/spaces kept.
};

namespace detail {

inline icu::UnicodeString to_icu(std::string_view s) {
  if (!is_valid_utf8(s)) throw ValidationError("invalid UTF-8 input");
  return icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
}

inline std::string from_icu(const icu::UnicodeString& u) {
  std::string out;
  u.toUTF8String(out);
  return out;
}

inline icu::UnicodeString nfc(const icu::UnicodeString& u) {
  UErrorCode status = U_ZERO_ERROR;
  const auto* normalizer = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error(std::string("ICU NFC unavailable: ") + u_errorName(status));
  auto out = normalizer->normalize(u, status);
  if (U_FAILURE(status)) throw Error(std::string("ICU normalize failed: ") + u_errorName(status));
  return out;
}

// Collapses White_Space runs into a single U+0020 and trims both ends.
inline icu::UnicodeString collapse_whitespace(const icu::UnicodeString& u) {
  icu::UnicodeString out;
  bool pending_space = false;
  for (int32_t i = 0; i < u.length(); i = u.moveIndex32(i, 1)) {
    const UChar32 c = u.char32At(i);
    if (u_isUWhiteSpace(c)) {
      pending_space = !out.isEmpty();
      continue;
    }
    if (pending_space) out.append(static_cast<UChar>(0x20));
    pending_space = false;
    out.append(c);
  }
  return out;
}

}  // namespace detail

/// Full Unicode lowercase (root locale). Total on valid UTF-8.
inline std::string lowercase(std::string_view s) {
  auto u = detail::to_icu(s);
  u.toLower(icu::Locale::getRoot());
  return detail::from_icu(u);
}

inline bool is_letter_or_digit(char32_t c) {
  return u_isalpha(static_cast<UChar32>(c)) || u_isdigit(static_cast<UChar32>(c));
}

inline std::string normalize_text(std::string_view s, NormScheme scheme) {
  auto display = detail::collapse_whitespace(detail::nfc(detail::to_icu(s)));
  if (scheme == NormScheme::display) return detail::from_icu(display);

  display.toLower(icu::Locale::getRoot());
  // Lowercasing can leave decomposed sequences behind; recompose before filtering.
  const auto lowered = detail::nfc(display);
  icu::UnicodeString kept;
  for (int32_t i = 0; i < lowered.length(); i = lowered.moveIndex32(i, 1)) {
    const UChar32 c = lowered.char32At(i);
    if (u_isUWhiteSpace(c) || u_isalpha(c) || u_isdigit(c)) kept.append(c);
  }
  return detail::from_icu(detail::collapse_whitespace(kept));
}

/// True when `s` has at least one non-whitespace code point.
inline bool has_content(std::string_view s) {
  for (char32_t c : decode(s)) {
    if (!u_isUWhiteSpace(static_cast<UChar32>(c))) return true;
  }
  return false;
}

}  // namespace lrst::text
