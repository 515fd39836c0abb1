#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace lrst::metrics {

struct EditCounts {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t hits = 0;

  std::size_t distance() const noexcept { return substitutions + deletions + insertions; }
  std::size_t ref_length() const noexcept { return hits + substitutions + deletions; }
  std::size_t hyp_length() const noexcept { return hits + substitutions + insertions; }

  EditCounts& operator+=(const EditCounts& o) noexcept {
    substitutions += o.substitutions;
    deletions += o.deletions;
    insertions += o.insertions;
    hits += o.hits;
    return *this;
  }

  bool operator==(const EditCounts&) const = default;
};

/// Unit-cost Levenshtein alignment of two token sequences. When several
/// minimal alignments exist the backtrace prefers, at every step,
/// hit > substitution > deletion > insertion.
template <typename T>
EditCounts levenshtein(std::span<const T> ref, std::span<const T> hyp) {
  const std::size_t n = ref.size();
  const std::size_t m = hyp.size();
  const std::size_t w = m + 1;
  std::vector<std::size_t> d((n + 1) * w);
  for (std::size_t i = 0; i <= n; ++i) d[i * w] = i;
  for (std::size_t j = 0; j <= m; ++j) d[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t diag = d[(i - 1) * w + j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      const std::size_t up = d[(i - 1) * w + j] + 1;
      const std::size_t left = d[i * w + j - 1] + 1;
      d[i * w + j] = std::min(diag, std::min(up, left));
    }
  }

  EditCounts c;
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    const std::size_t here = d[i * w + j];
    if (i > 0 && j > 0) {
      const std::size_t diag = d[(i - 1) * w + j - 1];
      if (ref[i - 1] == hyp[j - 1] && here == diag) {
        ++c.hits, --i, --j;
        continue;
      }
      if (here == diag + 1) {
        ++c.substitutions, --i, --j;
        continue;
      }
    }
    if (i > 0 && here == d[(i - 1) * w + j] + 1) {
      ++c.deletions, --i;
    } else {
      ++c.insertions, --j;
    }
  }
  return c;
}

template <typename T>
EditCounts levenshtein(const std::vector<T>& ref, const std::vector<T>& hyp) {
  return levenshtein(std::span<const T>(ref), std::span<const T>(hyp));
}

}  // namespace lrst::metrics
