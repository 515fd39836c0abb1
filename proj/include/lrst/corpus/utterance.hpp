#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "lrst/error.hpp"
#include "lrst/text/normalize.hpp"

namespace lrst {

enum class Origin { authentic, synthetic };
enum class Split { train, dev, test };

inline std::string_view to_string(Origin o) {
  return o == Origin::authentic ? "authentic" : "synthetic";
}

inline std::string_view to_string(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::dev: return "dev";
    case Split::test: return "test";
  }
  return "train";
}

inline Origin parse_origin(std::string_view s) {
  if (s == "authentic") return Origin::authentic;
  if (s == "synthetic") return Origin::synthetic;
  throw ValidationError("unknown origin '" + std::string(s) + "'");
}

inline Split parse_split(std::string_view s) {
  if (s == "train") return Split::train;
  if (s == "dev") return Split::dev;
  if (s == "test") return Split::test;
  throw ValidationError("unknown split '" + std::string(s) + "'");
}

struct LanguagePair {
  std::string src;
  std::string tgt;

  bool operator==(const LanguagePair&) const = default;
  std::string str() const { return src + "-" + tgt; }
};

/// One speech-translation record.
struct Utterance {
  std::string id;
  std::optional<std::string> audio;
  std::string transcript;
  std::optional<std::string> translation;
  std::string src_lang;
  std::string tgt_lang;
  Origin origin = Origin::authentic;
  std::optional<double> quality;

  bool operator==(const Utterance&) const = default;
};

/// Throws ValidationError naming the utterance when a record invariant fails.
inline void validate(const Utterance& u) {
  const auto fail = [&](const std::string& why) {
    throw ValidationError("utterance '" + u.id + "': " + why);
  };
  if (u.id.empty()) throw ValidationError("utterance with empty id");
  if (!text::has_content(u.transcript)) fail("transcript is empty");
  if (u.quality) {
    const double q = *u.quality;
    if (!std::isfinite(q) || q <= 0.0 || q > 1.0) fail("quality must lie in (0, 1]");
  }
  if (u.origin == Origin::synthetic && !u.quality) fail("synthetic utterance without quality");
}

/// Named, split-labelled collection of utterances with unique ids.
/// Immutable once constructed; the constructor enforces every invariant.
class Corpus {
 public:
  Corpus(std::string name, Split split, LanguagePair langs, std::vector<Utterance> utterances = {})
      : name_(std::move(name)), split_(split), langs_(std::move(langs)), utterances_(std::move(utterances)) {
    std::unordered_set<std::string_view> seen;
    seen.reserve(utterances_.size());
    for (const auto& u : utterances_) {
      validate(u);
      if (u.src_lang != langs_.src || u.tgt_lang != langs_.tgt) {
        throw ValidationError("utterance '" + u.id + "' has language pair " + u.src_lang + "-" + u.tgt_lang +
                              ", corpus is " + langs_.str());
      }
      if (!seen.insert(u.id).second) throw ValidationError("duplicate id '" + u.id + "'");
    }
  }

  const std::string& name() const noexcept { return name_; }
  Split split() const noexcept { return split_; }
  const LanguagePair& languages() const noexcept { return langs_; }
  std::span<const Utterance> utterances() const noexcept { return utterances_; }
  std::size_t size() const noexcept { return utterances_.size(); }
  bool empty() const noexcept { return utterances_.empty(); }
  const Utterance& operator[](std::size_t i) const { return utterances_.at(i); }

  auto begin() const noexcept { return utterances_.begin(); }
  auto end() const noexcept { return utterances_.end(); }

  bool operator==(const Corpus&) const = default;

 private:
  std::string name_;
  Split split_;
  LanguagePair langs_;
  std::vector<Utterance> utterances_;
};

}  // namespace lrst
