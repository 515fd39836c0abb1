#pragma once

#include <string>
#include <vector>

#include "lrst/adapter/adapter.hpp"
#include "lrst/augment/quality.hpp"
#include "lrst/augment/segment_io.hpp"
#include "lrst/corpus/utterance.hpp"
#include "lrst/error.hpp"

namespace lrst::augment {

struct BacktranslateOptions {
  std::size_t in_flight = 4;
  int beam_size = adapter::kDefaultBeamSize;
};

struct BacktranslationResult {
  std::vector<ScoredSegment> segments;
  std::vector<Reject> rejects;
};

/// Translates monolingual target-language text back into the source language.
/// `direction` is the translation direction (e.g. eng -> bem); each segment
/// keeps the original text as `target_text` and the adapter output as
/// `source_text`. Per-item failures become rejects; transport failures throw.
inline BacktranslationResult synthesize_bt_corpus(const Corpus& mono, adapter::Adapter& backend,
                                                  const LanguagePair& direction,
                                                  const BacktranslateOptions& opts = {}) {
  if (mono.languages().src != direction.src) {
    throw ValidationError("corpus '" + mono.name() + "' holds " + mono.languages().src +
                          " text but the direction translates from " + direction.src);
  }
  BacktranslationResult result;
  if (mono.empty()) return result;
  adapter::require(backend.capabilities(), adapter::Task::translate, direction);

  std::vector<adapter::AdapterRequest> requests;
  requests.reserve(mono.size());
  for (const auto& u : mono) {
    adapter::AdapterRequest r;
    r.id = "bt:" + u.id;
    r.task = adapter::Task::translate;
    r.text = u.transcript;
    r.src_lang = direction.src;
    r.tgt_lang = direction.tgt;
    r.beam_size = opts.beam_size;
    r.return_score = true;
    requests.push_back(std::move(r));
  }

  const auto responses = backend.infer(requests, opts.in_flight);
  for (std::size_t i = 0; i < responses.size(); ++i) {
    const auto& u = mono[i];
    const auto& resp = responses[i];
    if (!resp.ok) {
      result.rejects.push_back({u.id, u.transcript, resp.error.value_or("unknown adapter error")});
    } else if (!text::has_content(*resp.text)) {
      result.rejects.push_back({u.id, u.transcript, "empty translation"});
    } else {
      result.segments.push_back(ScoredSegment::from_log_prob(*resp.text, u.transcript, *resp.avg_log_prob));
    }
  }
  return result;
}

}  // namespace lrst::augment
