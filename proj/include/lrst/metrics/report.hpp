#pragma once

#include <cstdio>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lrst/error.hpp"
#include "lrst/metrics/bleu.hpp"
#include "lrst/metrics/chrf.hpp"
#include "lrst/metrics/wer.hpp"

namespace lrst::metrics {

struct MetricSet {
  bool bleu = false;
  bool chrf = false;
  bool wer = false;

  static MetricSet all() { return {true, true, true}; }

  bool empty() const noexcept { return !bleu && !chrf && !wer; }
  bool operator==(const MetricSet&) const = default;
};

/// Parses "bleu,chrf,wer" (any subset, any order; "chrf++" accepted).
inline MetricSet parse_metric_set(std::string_view list) {
  MetricSet m;
  std::size_t start = 0;
  while (start <= list.size()) {
    auto comma = list.find(',', start);
    if (comma == std::string_view::npos) comma = list.size();
    const auto name = text::trim_ascii(list.substr(start, comma - start));
    if (name == "bleu") {
      m.bleu = true;
    } else if (name == "chrf" || name == "chrf++" || name == "chrf_pp") {
      m.chrf = true;
    } else if (name == "wer") {
      m.wer = true;
    } else if (!name.empty()) {
      throw ValidationError("unknown metric '" + std::string(name) + "'");
    }
    start = comma + 1;
  }
  if (m.empty()) throw ValidationError("no metrics requested");
  return m;
}

inline std::vector<std::string> metric_names(const MetricSet& m) {
  std::vector<std::string> out;
  if (m.bleu) out.emplace_back("bleu");
  if (m.chrf) out.emplace_back("chrf");
  if (m.wer) out.emplace_back("wer");
  return out;
}

struct EvalOptions {
  BleuSmoothing smoothing = BleuSmoothing::exp_halving;
  WerNormalization wer_normalization = WerNormalization::lowercase_nopunct;
  ChrfOptions chrf;
};

/// Aggregate evaluation result. Scores are kept at full precision; only the
/// rendering helpers round.
struct MetricReport {
  std::optional<double> bleu;
  std::optional<double> chrf_pp;
  std::optional<double> wer;
  std::optional<std::vector<double>> precisions;
  std::optional<double> brevity_penalty;
  std::optional<std::size_t> hyp_len;
  std::optional<std::size_t> ref_len;
  std::optional<EditCounts> edits;
  std::size_t segment_count = 0;
  std::optional<double> comet;  ///< only ever injected from an external scorer

  bool operator==(const MetricReport&) const = default;
};

inline MetricReport evaluate(std::span<const std::string> refs, std::span<const std::string> hyps,
                             const MetricSet& metrics, const EvalOptions& opt = {}) {
  check_parallel(refs.size(), hyps.size());
  MetricReport r;
  r.segment_count = refs.size();
  if (metrics.bleu) {
    const auto b = bleu_corpus(refs, hyps, 4, opt.smoothing);
    r.bleu = b.bleu;
    r.precisions = b.precisions;
    r.brevity_penalty = b.brevity_penalty;
    r.hyp_len = b.hyp_len;
    r.ref_len = b.ref_len;
  }
  if (metrics.chrf) r.chrf_pp = chrf_pp(refs, hyps, opt.chrf);
  if (metrics.wer) {
    const auto c = wer_counts(refs, hyps, opt.wer_normalization);
    r.edits = c;
    r.wer = static_cast<double>(c.distance()) / static_cast<double>(c.ref_length());
  }
  return r;
}

inline nlohmann::ordered_json to_json(const MetricReport& r) {
  nlohmann::ordered_json j;
  if (r.bleu) j["bleu"] = *r.bleu;
  if (r.chrf_pp) j["chrf_pp"] = *r.chrf_pp;
  if (r.wer) j["wer"] = *r.wer;
  if (r.precisions) j["precisions"] = *r.precisions;
  if (r.brevity_penalty) j["brevity_penalty"] = *r.brevity_penalty;
  if (r.hyp_len) j["hyp_len"] = *r.hyp_len;
  if (r.ref_len) j["ref_len"] = *r.ref_len;
  if (r.edits) {
    j["edits"] = {{"substitutions", r.edits->substitutions},
                  {"deletions", r.edits->deletions},
                  {"insertions", r.edits->insertions},
                  {"hits", r.edits->hits}};
  }
  j["segment_count"] = r.segment_count;
  if (r.comet) j["comet"] = *r.comet;
  return j;
}

template <typename Json>
MetricReport metric_report_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("metric report must be a JSON object");
  MetricReport r;
  try {
    if (j.contains("bleu")) r.bleu = j.at("bleu").template get<double>();
    if (j.contains("chrf_pp")) r.chrf_pp = j.at("chrf_pp").template get<double>();
    if (j.contains("wer")) r.wer = j.at("wer").template get<double>();
    if (j.contains("precisions")) r.precisions = j.at("precisions").template get<std::vector<double>>();
    if (j.contains("brevity_penalty")) r.brevity_penalty = j.at("brevity_penalty").template get<double>();
    if (j.contains("hyp_len")) r.hyp_len = j.at("hyp_len").template get<std::size_t>();
    if (j.contains("ref_len")) r.ref_len = j.at("ref_len").template get<std::size_t>();
    if (j.contains("edits")) {
      const auto& e = j.at("edits");
      r.edits = EditCounts{e.at("substitutions").template get<std::size_t>(),
                           e.at("deletions").template get<std::size_t>(),
                           e.at("insertions").template get<std::size_t>(), e.at("hits").template get<std::size_t>()};
    }
    r.segment_count = j.at("segment_count").template get<std::size_t>();
    if (j.contains("comet")) r.comet = j.at("comet").template get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad metric report: ") + e.what());
  }
  return r;
}

/// Reads an externally produced COMET score: a bare number, or an object
/// with "system_score" (or "score"), or a list of segment scores (mean).
inline double comet_from_json(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_object()) {
    for (const char* key : {"system_score", "score"}) {
      if (j.contains(key) && j.at(key).is_number()) return j.at(key).get<double>();
    }
    if (j.contains("scores")) return comet_from_json(j.at("scores"));
  }
  if (j.is_array() && !j.empty()) {
    double sum = 0.0;
    for (const auto& v : j) {
      if (!v.is_number()) throw ValidationError("COMET score list must hold numbers");
      sum += v.get<double>();
    }
    return sum / static_cast<double>(j.size());
  }
  throw ValidationError("unrecognized COMET score file");
}

inline std::string format_score(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

/// Two-column human-readable table.
inline std::string render_table(const MetricReport& r) {
  std::ostringstream os;
  const auto row = [&](std::string_view name, const std::string& value) {
    os << "  " << name;
    for (std::size_t i = name.size(); i < 18; ++i) os << ' ';
    os << value << '\n';
  };
  if (r.bleu) {
    std::string p;
    for (std::size_t i = 0; i < r.precisions->size(); ++i) {
      if (i) p += '/';
      p += format_score(100.0 * (*r.precisions)[i]);
    }
    row("BLEU", format_score(*r.bleu) + "  (" + p + ", BP " + format_score(*r.brevity_penalty) + ", " +
                    std::to_string(*r.hyp_len) + "/" + std::to_string(*r.ref_len) + ")");
  }
  if (r.chrf_pp) row("chrF++", format_score(*r.chrf_pp));
  if (r.wer) {
    row("WER", format_score(100.0 * *r.wer) + "%  (S " + std::to_string(r.edits->substitutions) + " D " +
                   std::to_string(r.edits->deletions) + " I " + std::to_string(r.edits->insertions) + ")");
  }
  if (r.comet) row("COMET", format_score(*r.comet));
  row("segments", std::to_string(r.segment_count));
  return os.str();
}

}  // namespace lrst::metrics
