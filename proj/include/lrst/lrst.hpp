#pragma once

// Umbrella header.

#include "lrst/error.hpp"
#include "lrst/text/normalize.hpp"
#include "lrst/text/utf8.hpp"

#include "lrst/corpus/io.hpp"
#include "lrst/corpus/ops.hpp"
#include "lrst/corpus/utterance.hpp"

#include "lrst/augment/backtranslate.hpp"
#include "lrst/augment/quality.hpp"
#include "lrst/augment/segment_io.hpp"
#include "lrst/augment/tag.hpp"
#include "lrst/augment/training_set.hpp"

#include "lrst/metrics/bleu.hpp"
#include "lrst/metrics/chrf.hpp"
#include "lrst/metrics/edit_distance.hpp"
#include "lrst/metrics/report.hpp"
#include "lrst/metrics/tokenize.hpp"
#include "lrst/metrics/wer.hpp"

#include "lrst/adapter/adapter.hpp"
#include "lrst/adapter/factory.hpp"
#include "lrst/adapter/mock.hpp"
#include "lrst/adapter/protocol.hpp"

#include "lrst/cascade/compare.hpp"
#include "lrst/cascade/config.hpp"
#include "lrst/cascade/pipeline.hpp"
#include "lrst/cascade/run_report.hpp"
