#pragma once

#include <string>
#include <string_view>

#include "lrst/error.hpp"

namespace lrst::augment {

inline constexpr std::string_view kDefaultTag = "<bt>";

inline void validate_tag(std::string_view tag) {
  if (tag.empty()) throw ValidationError("tag must be non-empty");
  if (tag.find_first_of(" \t\r\n\v\f") != std::string_view::npos) {
    throw ValidationError("tag must not contain whitespace");
  }
}

inline bool has_bt_tag(std::string_view text, std::string_view tag) {
  return text.size() > tag.size() && text.starts_with(tag) && text[tag.size()] == ' ';
}

/// Prefixes "<tag> ". Already-tagged text is returned unchanged.
inline std::string apply_bt_tag(std::string_view text, std::string_view tag = kDefaultTag) {
  validate_tag(tag);
  if (has_bt_tag(text, tag)) return std::string(text);
  std::string out;
  out.reserve(tag.size() + 1 + text.size());
  out.append(tag).push_back(' ');
  out.append(text);
  return out;
}

/// Removes one leading "<tag> " if present.
inline std::string strip_bt_tag(std::string_view text, std::string_view tag = kDefaultTag) {
  if (tag.empty() || !has_bt_tag(text, tag)) return std::string(text);
  return std::string(text.substr(tag.size() + 1));
}

}  // namespace lrst::augment
