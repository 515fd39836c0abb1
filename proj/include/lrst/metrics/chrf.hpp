#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lrst/error.hpp"
#include "lrst/metrics/wer.hpp"
#include "lrst/text/utf8.hpp"

namespace lrst::metrics {

/// How per-order statistics are folded into one score.
enum class ChrfAveraging {
  /// Average precision and recall over the orders where both sides have
  /// n-grams, then take a single F-beta. The reference toolkit's default.
  effective_order,
  /// Arithmetic mean of per-order F-beta over all orders, with a 1e-16 floor
  /// for empty orders.
  per_order_f,
};

struct ChrfOptions {
  std::size_t char_order = 6;
  std::size_t word_order = 2;
  double beta = 2.0;
  ChrfAveraging averaging = ChrfAveraging::effective_order;
};

/// Per-order [hyp, ref, match] counts: char orders first, then word orders.
struct ChrfStats {
  struct Order {
    std::size_t hyp = 0;
    std::size_t ref = 0;
    std::size_t match = 0;
    bool operator==(const Order&) const = default;
  };
  std::vector<Order> orders;

  ChrfStats& operator+=(const ChrfStats& o) {
    if (o.orders.size() != orders.size()) throw ValidationError("chrF order mismatch");
    for (std::size_t i = 0; i < orders.size(); ++i) {
      orders[i].hyp += o.orders[i].hyp;
      orders[i].ref += o.orders[i].ref;
      orders[i].match += o.orders[i].match;
    }
    return *this;
  }

  bool operator==(const ChrfStats&) const = default;
};

namespace detail {

inline bool is_ascii_punct(char32_t c) {
  return (c >= U'!' && c <= U'/') || (c >= U':' && c <= U'@') || (c >= U'[' && c <= U'`') || (c >= U'{' && c <= U'~');
}

// Splits one leading or trailing punctuation mark off each word; a trailing
// mark wins when both are present.
inline std::vector<std::u32string> chrf_words(std::u32string_view s) {
  std::vector<std::u32string> out;
  for (auto& w : text::split_whitespace(s)) {
    if (w.size() == 1) {
      out.push_back(std::move(w));
    } else if (is_ascii_punct(w.back())) {
      out.push_back(w.substr(0, w.size() - 1));
      out.push_back(w.substr(w.size() - 1));
    } else if (is_ascii_punct(w.front())) {
      out.push_back(w.substr(0, 1));
      out.push_back(w.substr(1));
    } else {
      out.push_back(std::move(w));
    }
  }
  return out;
}

using Counts = std::unordered_map<std::u32string, std::size_t>;

inline std::vector<Counts> chrf_ngrams(std::string_view sentence, const ChrfOptions& opt) {
  const auto cps = text::decode(sentence);
  std::vector<Counts> grams;
  grams.reserve(opt.char_order + opt.word_order);

  std::u32string packed;
  packed.reserve(cps.size());
  for (char32_t c : cps) {
    if (!text::is_split_space(c)) packed.push_back(c);
  }
  for (std::size_t n = 1; n <= opt.char_order; ++n) {
    Counts c;
    for (std::size_t i = 0; i + n <= packed.size(); ++i) ++c[packed.substr(i, n)];
    grams.push_back(std::move(c));
  }

  const auto words = chrf_words(cps);
  for (std::size_t n = 1; n <= opt.word_order; ++n) {
    Counts c;
    for (std::size_t i = 0; i + n <= words.size(); ++i) {
      std::u32string key = words[i];
      for (std::size_t k = 1; k < n; ++k) key.append(U" ").append(words[i + k]);
      ++c[key];
    }
    grams.push_back(std::move(c));
  }
  return grams;
}

}  // namespace detail

inline ChrfStats chrf_segment_stats(std::string_view ref, std::string_view hyp, const ChrfOptions& opt = {}) {
  const auto ref_grams = detail::chrf_ngrams(ref, opt);
  const auto hyp_grams = detail::chrf_ngrams(hyp, opt);
  ChrfStats s;
  s.orders.resize(ref_grams.size());
  for (std::size_t i = 0; i < ref_grams.size(); ++i) {
    std::size_t hyp_count = 0;
    std::size_t match = 0;
    for (const auto& [gram, count] : hyp_grams[i]) {
      hyp_count += count;
      if (auto it = ref_grams[i].find(gram); it != ref_grams[i].end()) match += std::min(count, it->second);
    }
    std::size_t ref_count = 0;
    for (const auto& [gram, count] : ref_grams[i]) ref_count += count;
    // Hypothesis n-grams are not counted for an order the reference lacks.
    s.orders[i] = {ref_grams[i].empty() ? 0 : hyp_count, ref_count, match};
  }
  return s;
}

inline ChrfStats chrf_stats(std::span<const std::string> refs, std::span<const std::string> hyps,
                            const ChrfOptions& opt = {}) {
  check_parallel(refs.size(), hyps.size());
  ChrfStats total;
  total.orders.resize(opt.char_order + opt.word_order);
  for (std::size_t i = 0; i < refs.size(); ++i) total += chrf_segment_stats(refs[i], hyps[i], opt);
  return total;
}

inline double chrf_from_stats(const ChrfStats& s, const ChrfOptions& opt = {}) {
  constexpr double eps = 1e-16;
  const double factor = opt.beta * opt.beta;
  double f_sum = 0.0;
  double avg_prec = 0.0;
  double avg_rec = 0.0;
  std::size_t effective = 0;

  for (const auto& o : s.orders) {
    const double prec = o.hyp > 0 ? static_cast<double>(o.match) / static_cast<double>(o.hyp) : eps;
    const double rec = o.ref > 0 ? static_cast<double>(o.match) / static_cast<double>(o.ref) : eps;
    const double denom = factor * prec + rec;
    f_sum += denom > 0 ? (1 + factor) * prec * rec / denom : eps;
    if (o.hyp > 0 && o.ref > 0) {
      avg_prec += prec;
      avg_rec += rec;
      ++effective;
    }
  }

  if (opt.averaging == ChrfAveraging::per_order_f) {
    return s.orders.empty() ? 0.0 : 100.0 * f_sum / static_cast<double>(s.orders.size());
  }
  if (effective == 0) return 0.0;
  avg_prec /= static_cast<double>(effective);
  avg_rec /= static_cast<double>(effective);
  if (avg_prec + avg_rec == 0.0) return 0.0;
  return 100.0 * (1 + factor) * avg_prec * avg_rec / (factor * avg_prec + avg_rec);
}

/// Corpus chrF++ in [0, 100]; statistics are summed over all pairs first.
inline double chrf_pp(std::span<const std::string> refs, std::span<const std::string> hyps,
                      const ChrfOptions& opt = {}) {
  if (opt.char_order == 0 && opt.word_order == 0) throw ValidationError("chrF needs at least one order");
  return chrf_from_stats(chrf_stats(refs, hyps, opt), opt);
}

}  // namespace lrst::metrics
