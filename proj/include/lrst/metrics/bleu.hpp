#pragma once

#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lrst/error.hpp"
#include "lrst/metrics/tokenize.hpp"
#include "lrst/metrics/wer.hpp"

namespace lrst::metrics {

enum class BleuSmoothing {
  none,
  exp_halving,  ///< k-th zero-match order gets precision 1 / (2^k * total)
};

inline BleuSmoothing parse_bleu_smoothing(std::string_view s) {
  if (s == "none") return BleuSmoothing::none;
  if (s == "exp" || s == "exp_halving") return BleuSmoothing::exp_halving;
  throw ValidationError("unknown BLEU smoothing '" + std::string(s) + "'");
}

/// Sufficient statistics for corpus BLEU. Shards can be summed.
struct BleuStats {
  std::vector<std::size_t> correct;
  std::vector<std::size_t> total;
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;

  explicit BleuStats(std::size_t max_n = 4) : correct(max_n, 0), total(max_n, 0) {}

  BleuStats& operator+=(const BleuStats& o) {
    if (o.correct.size() != correct.size()) throw ValidationError("BLEU order mismatch");
    for (std::size_t n = 0; n < correct.size(); ++n) {
      correct[n] += o.correct[n];
      total[n] += o.total[n];
    }
    hyp_len += o.hyp_len;
    ref_len += o.ref_len;
    return *this;
  }

  bool operator==(const BleuStats&) const = default;
};

struct BleuResult {
  double bleu = 0.0;
  std::vector<double> precisions;  ///< per order, in [0, 1], after smoothing
  double brevity_penalty = 0.0;
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;
};

namespace detail {

// n-grams keyed by their tokens joined with a space; tokens never contain one.
inline std::vector<std::unordered_map<std::string, std::size_t>> count_ngrams(const std::vector<std::string>& toks,
                                                                               std::size_t max_n) {
  std::vector<std::unordered_map<std::string, std::size_t>> counts(max_n);
  for (std::size_t n = 1; n <= max_n; ++n) {
    if (toks.size() < n) break;
    for (std::size_t i = 0; i + n <= toks.size(); ++i) {
      std::string key = toks[i];
      for (std::size_t k = 1; k < n; ++k) key.append(" ").append(toks[i + k]);
      ++counts[n - 1][key];
    }
  }
  return counts;
}

}  // namespace detail

inline std::vector<std::string> bleu_tokens(std::string_view s) { return tokenize_13a(rstrip(s)); }

inline BleuStats bleu_segment_stats(std::string_view ref, std::string_view hyp, std::size_t max_n = 4) {
  const auto ref_toks = bleu_tokens(ref);
  const auto hyp_toks = bleu_tokens(hyp);
  BleuStats s(max_n);
  s.hyp_len = hyp_toks.size();
  s.ref_len = ref_toks.size();
  const auto ref_counts = detail::count_ngrams(ref_toks, max_n);
  const auto hyp_counts = detail::count_ngrams(hyp_toks, max_n);
  for (std::size_t n = 0; n < max_n; ++n) {
    for (const auto& [gram, count] : hyp_counts[n]) {
      s.total[n] += count;
      if (auto it = ref_counts[n].find(gram); it != ref_counts[n].end()) s.correct[n] += std::min(count, it->second);
    }
  }
  return s;
}

inline BleuStats bleu_stats(std::span<const std::string> refs, std::span<const std::string> hyps,
                            std::size_t max_n = 4) {
  check_parallel(refs.size(), hyps.size());
  BleuStats total(max_n);
  for (std::size_t i = 0; i < refs.size(); ++i) total += bleu_segment_stats(refs[i], hyps[i], max_n);
  return total;
}

inline double brevity_penalty(std::size_t hyp_len, std::size_t ref_len) {
  if (hyp_len >= ref_len) return 1.0;
  if (hyp_len == 0) return 0.0;
  return std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(hyp_len));
}

/// Score from aggregated statistics. Without smoothing any zero precision
/// yields 0; an order with no hypothesis n-grams at all always does.
inline BleuResult bleu_from_stats(const BleuStats& s, BleuSmoothing smoothing = BleuSmoothing::exp_halving) {
  const std::size_t max_n = s.correct.size();
  BleuResult r;
  r.precisions.assign(max_n, 0.0);
  r.brevity_penalty = brevity_penalty(s.hyp_len, s.ref_len);
  r.hyp_len = s.hyp_len;
  r.ref_len = s.ref_len;

  bool any_match = false;
  for (auto c : s.correct) any_match = any_match || c > 0;
  if (!any_match) return r;

  double halving = 1.0;
  for (std::size_t n = 0; n < max_n; ++n) {
    if (s.total[n] == 0) break;
    if (s.correct[n] == 0) {
      if (smoothing == BleuSmoothing::exp_halving) {
        halving *= 2.0;
        r.precisions[n] = 1.0 / (halving * static_cast<double>(s.total[n]));
      }
    } else {
      r.precisions[n] = static_cast<double>(s.correct[n]) / static_cast<double>(s.total[n]);
    }
  }

  double log_sum = 0.0;
  for (double p : r.precisions) {
    if (p == 0.0) return r;
    log_sum += std::log(p);
  }
  r.bleu = 100.0 * r.brevity_penalty * std::exp(log_sum / static_cast<double>(max_n));
  return r;
}

inline BleuResult bleu_corpus(std::span<const std::string> refs, std::span<const std::string> hyps,
                              std::size_t max_n = 4, BleuSmoothing smoothing = BleuSmoothing::exp_halving) {
  if (max_n == 0) throw ValidationError("max_n must be >= 1");
  return bleu_from_stats(bleu_stats(refs, hyps, max_n), smoothing);
}

}  // namespace lrst::metrics
