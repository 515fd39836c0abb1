#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lrst/error.hpp"

namespace lrst::augment {

/// Maps a mean per-token natural-log probability to a (0, 1] quality score.
inline double quality_from_log_prob(double avg_log_prob) {
  if (!std::isfinite(avg_log_prob)) throw ValidationError("avg_log_prob must be finite");
  if (avg_log_prob > 0.0) throw ValidationError("avg_log_prob must be <= 0, got " + std::to_string(avg_log_prob));
  return std::exp(avg_log_prob);
}

/// A back-translated pair: synthetic source side, authentic target side.
struct ScoredSegment {
  std::string source_text;
  std::string target_text;
  double avg_log_prob = 0.0;
  double quality = 1.0;

  static ScoredSegment from_log_prob(std::string source, std::string target, double avg_log_prob) {
    const double q = quality_from_log_prob(avg_log_prob);
    return {std::move(source), std::move(target), avg_log_prob, q};
  }

  bool operator==(const ScoredSegment&) const = default;
};

inline constexpr double kQualityRelTolerance = 1e-12;

inline void validate(const ScoredSegment& s) {
  const double expected = quality_from_log_prob(s.avg_log_prob);
  if (!std::isfinite(s.quality) || s.quality <= 0.0 || s.quality > 1.0) {
    throw ValidationError("quality must lie in (0, 1]");
  }
  if (std::abs(s.quality - expected) > kQualityRelTolerance * expected) {
    throw ValidationError("quality " + std::to_string(s.quality) + " is not exp(avg_log_prob)");
  }
}

enum class TagPolicy { none, prepend };

struct AugmentConfig {
  double threshold = 0.77;
  std::string tag = "<bt>";
  TagPolicy tag_policy = TagPolicy::none;
};

inline void validate_threshold(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw ValidationError("threshold must lie in [0, 1]");
}

inline void validate(const AugmentConfig& c) {
  validate_threshold(c.threshold);
  if (c.tag_policy == TagPolicy::prepend && c.tag.empty()) throw ValidationError("tag must be non-empty");
}

struct FilterResult {
  std::vector<ScoredSegment> kept;
  std::size_t removed_count = 0;
};

/// Keeps segments with quality >= threshold; only scores strictly below are dropped.
inline FilterResult filter_by_quality(std::span<const ScoredSegment> segments, double threshold) {
  validate_threshold(threshold);
  FilterResult r;
  for (const auto& s : segments) {
    if (s.quality >= threshold) r.kept.push_back(s);
  }
  r.removed_count = segments.size() - r.kept.size();
  return r;
}

}  // namespace lrst::augment
