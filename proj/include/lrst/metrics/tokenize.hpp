#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "lrst/text/utf8.hpp"

namespace lrst::metrics {

namespace detail {

inline void replace_all(std::string& s, std::string_view from, std::string_view to) {
  std::string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (true) {
    const auto hit = s.find(from, pos);
    if (hit == std::string::npos) break;
    out.append(s, pos, hit - pos).append(to);
    pos = hit + from.size();
  }
  out.append(s, pos);
  s = std::move(out);
}

inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Symbols split off unconditionally: ASCII punctuation except ' - . , and
// the digits/letters. Space is in the class too (harmless, it only pads).
inline bool is_split_symbol(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (u >= '{' && u <= '~') || (u >= '[' && u <= '`') || (u >= ' ' && u <= '&') || (u >= '(' && u <= '+') ||
         (u >= ':' && u <= '@') || u == '/';
}

inline bool is_period_or_comma(char c) { return c == '.' || c == ','; }

// Each pass below reproduces one left-to-right, non-overlapping rewrite.
// Matching on UTF-8 bytes is equivalent to matching on code points here
// because every pattern anchors on an ASCII byte.

inline std::string pad_symbols(std::string_view s) {
  std::string out;
  out.reserve(s.size() * 2);
  for (char c : s) {
    if (is_split_symbol(c)) {
      out.push_back(' ');
      out.push_back(c);
      out.push_back(' ');
    } else {
      out.push_back(c);
    }
  }
  return out;
}

// ([^0-9])([.,]) -> "\1 \2 "
inline std::string split_punct_after_nondigit(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 16);
  std::size_t i = 0;
  while (i < s.size()) {
    if (i + 1 < s.size() && !is_digit(s[i]) && is_period_or_comma(s[i + 1])) {
      out.push_back(s[i]);
      out.push_back(' ');
      out.push_back(s[i + 1]);
      out.push_back(' ');
      i += 2;
    } else {
      out.push_back(s[i++]);
    }
  }
  return out;
}

// ([.,])([^0-9]) -> " \1 \2"
inline std::string split_punct_before_nondigit(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 16);
  std::size_t i = 0;
  while (i < s.size()) {
    if (i + 1 < s.size() && is_period_or_comma(s[i]) && !is_digit(s[i + 1])) {
      out.push_back(' ');
      out.push_back(s[i]);
      out.push_back(' ');
      out.push_back(s[i + 1]);
      i += 2;
    } else {
      out.push_back(s[i++]);
    }
  }
  return out;
}

// ([0-9])(-) -> "\1 \2 "
inline std::string split_dash_after_digit(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 16);
  std::size_t i = 0;
  while (i < s.size()) {
    if (i + 1 < s.size() && is_digit(s[i]) && s[i + 1] == '-') {
      out.push_back(s[i]);
      out.append(" - ");
      i += 2;
    } else {
      out.push_back(s[i++]);
    }
  }
  return out;
}

}  // namespace detail

/// mteval-v13a tokenization as used for corpus BLEU. Returns the tokens
/// joined by single spaces.
inline std::string tokenize_13a_joined(std::string_view text) {
  std::string line(text);
  detail::replace_all(line, "<skipped>", "");
  detail::replace_all(line, "-\n", "");
  detail::replace_all(line, "\n", " ");
  if (line.find('&') != std::string::npos) {
    detail::replace_all(line, "&quot;", "\"");
    detail::replace_all(line, "&amp;", "&");
    detail::replace_all(line, "&lt;", "<");
    detail::replace_all(line, "&gt;", ">");
  }
  line = " " + line + " ";
  line = detail::pad_symbols(line);
  line = detail::split_punct_after_nondigit(line);
  line = detail::split_punct_before_nondigit(line);
  line = detail::split_dash_after_digit(line);

  std::string out;
  for (const auto& tok : text::split_whitespace(std::u32string_view(text::decode(line)))) {
    if (!out.empty()) out.push_back(' ');
    out += text::encode(tok);
  }
  return out;
}

inline std::vector<std::string> tokenize_13a(std::string_view text) {
  std::vector<std::string> tokens;
  const auto joined = tokenize_13a_joined(text);
  std::size_t start = 0;
  while (start < joined.size()) {
    auto sp = joined.find(' ', start);
    if (sp == std::string::npos) sp = joined.size();
    tokens.emplace_back(joined, start, sp - start);
    start = sp + 1;
  }
  return tokens;
}

/// Strips trailing whitespace the way Python's `str.rstrip()` does.
inline std::string rstrip(std::string_view s) {
  auto cps = text::decode(s);
  while (!cps.empty() && text::is_split_space(cps.back())) cps.pop_back();
  return text::encode(cps);
}

}  // namespace lrst::metrics
