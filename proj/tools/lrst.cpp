// lrst: corpus preparation, back-translation augmentation, evaluation and
// pipeline orchestration for low-resource speech translation.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lrst/lrst.hpp"

namespace fs = std::filesystem;
using namespace lrst;

namespace {

struct CorpusArgs {
  std::string format;
  std::string src_lang = "bem";
  std::string tgt_lang = "eng";
  std::string split = "train";
  std::string name;
};

void add_corpus_args(CLI::App* cmd, CorpusArgs& a) {
  cmd->add_option("--format", a.format, "Corpus format: tsv or jsonl (default: from extension)");
  cmd->add_option("--src-lang", a.src_lang, "Source language code")->capture_default_str();
  cmd->add_option("--tgt-lang", a.tgt_lang, "Target language code")->capture_default_str();
  cmd->add_option("--split", a.split, "Split label: train, dev or test")->capture_default_str();
  cmd->add_option("--name", a.name, "Corpus name (default: file stem)");
}

CorpusFormat format_of(const std::string& explicit_format, const fs::path& p) {
  return explicit_format.empty() ? corpus_format_for(p) : parse_corpus_format(explicit_format);
}

Corpus load(const fs::path& p, const CorpusArgs& a, std::optional<Split> split = std::nullopt) {
  LoadOptions opts;
  opts.name = a.name;
  opts.split = split.value_or(parse_split(a.split));
  opts.langs = {a.src_lang, a.tgt_lang};
  return load_corpus(p, format_of(a.format, p), opts);
}

std::vector<std::string> read_lines(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError(p.string(), "cannot open for reading");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw IoError(p.string(), "cannot open for reading");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(p.string() + ": " + e.what());
  }
}

void print_stats(const Corpus& c, bool as_json) {
  const auto s = stats(c);
  if (as_json) {
    nlohmann::ordered_json j;
    j["name"] = c.name();
    j["count"] = s.count;
    j["with_audio"] = s.with_audio;
    j["with_translation"] = s.with_translation;
    j["synthetic"] = s.synthetic;
    j["split"] = std::string(to_string(s.split));
    j["src_lang"] = s.langs.src;
    j["tgt_lang"] = s.langs.tgt;
    std::cout << j.dump() << '\n';
    return;
  }
  std::cout << c.name() << " (" << to_string(s.split) << ", " << s.langs.str() << ")\n"
            << "  utterances        " << s.count << '\n'
            << "  with audio        " << s.with_audio << '\n'
            << "  with translation  " << s.with_translation << '\n'
            << "  synthetic         " << s.synthetic << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lrst - low-resource speech translation corpus and evaluation toolkit"};
  app.require_subcommand(1);

  // corpus ------------------------------------------------------------------
  auto* corpus_cmd = app.add_subcommand("corpus", "Ingest, deduplicate, merge and summarize corpora");
  corpus_cmd->require_subcommand(1);

  CorpusArgs stats_args;
  std::vector<std::string> stats_paths;
  bool stats_json = false;
  auto* stats_cmd = corpus_cmd->add_subcommand("stats", "Count utterances, audio and translations");
  stats_cmd->add_option("corpus", stats_paths, "Corpus files")->required();
  stats_cmd->add_flag("--json", stats_json, "Emit one JSON object per corpus");
  add_corpus_args(stats_cmd, stats_args);

  CorpusArgs dedup_args;
  std::string dedup_train, dedup_out;
  std::vector<std::string> held_paths;
  bool exact_match = false;
  auto* dedup_cmd = corpus_cmd->add_subcommand("dedup", "Remove train utterances whose transcript occurs in held-out sets");
  dedup_cmd->add_option("train", dedup_train, "Training corpus")->required();
  dedup_cmd->add_option("--against", held_paths, "Held-out corpora (dev/test)")->required();
  dedup_cmd->add_option("--out", dedup_out, "Output path")->required();
  dedup_cmd->add_flag("--exact-match", exact_match, "Compare raw transcripts instead of normalized keys");
  add_corpus_args(dedup_cmd, dedup_args);

  CorpusArgs merge_args;
  std::vector<std::string> merge_inputs;
  std::string merge_out, merge_name = "merged";
  auto* merge_cmd = corpus_cmd->add_subcommand("merge", "Concatenate corpora, prefixing colliding ids");
  merge_cmd->add_option("corpora", merge_inputs, "Input corpora")->required();
  merge_cmd->add_option("--out", merge_out, "Output path")->required();
  merge_cmd->add_option("--merged-name", merge_name, "Name of the merged corpus")->capture_default_str();
  add_corpus_args(merge_cmd, merge_args);

  CorpusArgs convert_args;
  std::string convert_in, convert_out, convert_to;
  auto* convert_cmd = corpus_cmd->add_subcommand("convert", "Convert between TSV and JSONL");
  convert_cmd->add_option("input", convert_in, "Input corpus")->required();
  convert_cmd->add_option("--out", convert_out, "Output path")->required();
  convert_cmd->add_option("--to", convert_to, "Output format (default: from --out extension)");
  add_corpus_args(convert_cmd, convert_args);

  // augment -----------------------------------------------------------------
  auto* augment_cmd = app.add_subcommand("augment", "Back-translation augmentation");
  augment_cmd->require_subcommand(1);

  CorpusArgs bt_args;
  bt_args.src_lang = "eng";
  bt_args.tgt_lang = "bem";
  std::string bt_adapter, bt_corpus, bt_out, bt_rejects;
  std::size_t bt_concurrency = 4;
  int bt_beam = adapter::kDefaultBeamSize;
  auto* bt_cmd = augment_cmd->add_subcommand("backtranslate", "Translate monolingual target text into scored segments");
  bt_cmd->add_option("--adapter", bt_adapter, "Adapter spec: mock, mock:<file>, exec:<cmd>, http://host:port")
      ->required();
  bt_cmd->add_option("--corpus", bt_corpus, "Monolingual corpus (transcript column holds the text)")->required();
  bt_cmd->add_option("--out", bt_out, "Scored-segment JSONL output")->required();
  bt_cmd->add_option("--rejects", bt_rejects, "Rejects sidecar (default: <out>.rejects.jsonl)");
  bt_cmd->add_option("--concurrency", bt_concurrency, "Requests in flight")->capture_default_str();
  bt_cmd->add_option("--beam-size", bt_beam, "Beam size")->capture_default_str();
  add_corpus_args(bt_cmd, bt_args);

  std::string filter_in, filter_out;
  double filter_threshold = 0.77;
  auto* filter_cmd = augment_cmd->add_subcommand("filter", "Drop segments scoring below the threshold");
  filter_cmd->add_option("--in", filter_in, "Scored-segment JSONL")->required();
  filter_cmd->add_option("--out", filter_out, "Kept segments")->required();
  filter_cmd->add_option("--threshold", filter_threshold, "Minimum quality kept")->capture_default_str();

  CorpusArgs tag_args;
  std::string tag_in, tag_out, tag_value = std::string(augment::kDefaultTag);
  bool tag_apply = false, tag_strip = false, tag_all = false;
  auto* tag_cmd = augment_cmd->add_subcommand("tag", "Add or remove the back-translation tag on source text");
  auto* apply_flag = tag_cmd->add_flag("--apply", tag_apply, "Prepend the tag");
  auto* strip_flag = tag_cmd->add_flag("--strip", tag_strip, "Remove a leading tag");
  apply_flag->excludes(strip_flag);
  tag_cmd->add_option("--in", tag_in, "Input corpus")->required();
  tag_cmd->add_option("--out", tag_out, "Output corpus")->required();
  tag_cmd->add_option("--tag", tag_value, "Tag text")->capture_default_str();
  tag_cmd->add_flag("--all", tag_all, "Touch authentic utterances too (default: synthetic only)");
  add_corpus_args(tag_cmd, tag_args);

  CorpusArgs build_args;
  std::string build_authentic, build_synthetic, build_out, build_policy = "none", build_tag = "<bt>";
  double build_threshold = 0.77;
  auto* build_cmd = augment_cmd->add_subcommand("build", "Append filtered synthetic data to an authentic corpus");
  build_cmd->add_option("--authentic", build_authentic, "Authentic corpus")->required();
  build_cmd->add_option("--synthetic", build_synthetic, "Scored-segment JSONL")->required();
  build_cmd->add_option("--out", build_out, "Output corpus")->required();
  build_cmd->add_option("--threshold", build_threshold, "Minimum quality kept")->capture_default_str();
  build_cmd->add_option("--tag-policy", build_policy, "none or prepend")->capture_default_str();
  build_cmd->add_option("--tag", build_tag, "Tag text")->capture_default_str();
  add_corpus_args(build_cmd, build_args);

  // eval --------------------------------------------------------------------
  std::string eval_refs, eval_hyps, eval_metrics = "bleu,chrf,wer", eval_wer_norm = "lowercase_nopunct";
  std::string eval_smoothing = "exp", eval_comet, eval_json_out;
  auto* eval_cmd = app.add_subcommand("eval", "Score hypotheses against references (one segment per line)");
  eval_cmd->add_option("--refs", eval_refs, "Reference file")->required();
  eval_cmd->add_option("--hyps", eval_hyps, "Hypothesis file")->required();
  eval_cmd->add_option("--metrics", eval_metrics, "Comma-separated: bleu,chrf,wer")->capture_default_str();
  eval_cmd->add_option("--wer-norm", eval_wer_norm, "lowercase_nopunct or verbatim")->capture_default_str();
  eval_cmd->add_option("--smoothing", eval_smoothing, "BLEU smoothing: exp or none")->capture_default_str();
  eval_cmd->add_option("--comet-file", eval_comet, "Externally computed COMET scores (JSON)");
  eval_cmd->add_option("--json-out", eval_json_out, "Also write the JSON report here");

  // pipeline ----------------------------------------------------------------
  auto* pipeline_cmd = app.add_subcommand("pipeline", "Run and compare cascaded / end-to-end / MT-only systems");
  pipeline_cmd->require_subcommand(1);

  CorpusArgs run_args;
  run_args.split = "test";
  std::string run_config, run_corpus, run_out, run_comet, run_system;
  auto* run_cmd = pipeline_cmd->add_subcommand("run", "Run a system over a corpus through an adapter");
  run_cmd->add_option("--config", run_config, "Pipeline config (JSON)")->required();
  run_cmd->add_option("--corpus", run_corpus, "Evaluation corpus")->required();
  run_cmd->add_option("--out", run_out, "Report path")->required();
  run_cmd->add_option("--system", run_system, "Override the system label");
  run_cmd->add_option("--comet-file", run_comet, "Attach externally computed COMET scores");
  add_corpus_args(run_cmd, run_args);

  std::vector<std::string> compare_inputs;
  std::string compare_format = "markdown";
  auto* compare_cmd = pipeline_cmd->add_subcommand("compare", "Tabulate reports, best score per column in bold");
  compare_cmd->add_option("reports", compare_inputs, "Report files")->required();
  compare_cmd->add_option("--format", compare_format, "markdown, csv or json")->capture_default_str();

  CorpusArgs replay_args;
  replay_args.split = "test";
  std::string replay_corpus, replay_hyps, replay_out, replay_system = "Replay", replay_mode = "cascaded";
  auto* replay_cmd = pipeline_cmd->add_subcommand("replay", "Build a report from canned hypotheses");
  replay_cmd->add_option("--corpus", replay_corpus, "Evaluation corpus")->required();
  replay_cmd->add_option("--hyps", replay_hyps, "Hypotheses, one per line in corpus order")->required();
  replay_cmd->add_option("--out", replay_out, "Report path")->required();
  replay_cmd->add_option("--system", replay_system, "System label")->capture_default_str();
  replay_cmd->add_option("--mode", replay_mode, "Mode recorded in the report")->capture_default_str();
  add_corpus_args(replay_cmd, replay_args);

  std::string verify_input;
  auto* verify_cmd = pipeline_cmd->add_subcommand("verify", "Re-score a report from its stored outputs");
  verify_cmd->add_option("report", verify_input, "Report file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (stats_cmd->parsed()) {
      for (const auto& p : stats_paths) print_stats(load(p, stats_args), stats_json);
    } else if (dedup_cmd->parsed()) {
      const auto mode = exact_match ? MatchMode::exact : MatchMode::normalized;
      const auto train = load(dedup_train, dedup_args, Split::train);
      std::vector<Corpus> held;
      for (const auto& p : held_paths) {
        CorpusArgs a = dedup_args;
        a.name.clear();
        held.push_back(load(p, a, Split::test));
      }
      const auto result = dedup_against(train, held, mode);
      write_corpus(result.corpus, dedup_out, format_of(dedup_args.format, dedup_out));
      std::cout << "removed " << result.removed_count << " of " << train.size() << " utterances; kept "
                << result.corpus.size() << '\n';
      for (std::size_t i = 0; i < held.size(); ++i) {
        for (std::size_t k = i + 1; k < held.size(); ++k) {
          std::cout << "overlap " << held[i].name() << " / " << held[k].name() << ": "
                    << count_overlap(held[i], held[k], mode) << " (not removed)\n";
        }
      }
    } else if (merge_cmd->parsed()) {
      std::vector<Corpus> inputs;
      for (const auto& p : merge_inputs) {
        CorpusArgs a = merge_args;
        a.name.clear();
        inputs.push_back(load(p, a));
      }
      const auto merged = merge(inputs, merge_name);
      write_corpus(merged, merge_out, format_of(merge_args.format, merge_out));
      std::cout << "merged " << inputs.size() << " corpora: " << merged.size() << " utterances\n";
    } else if (convert_cmd->parsed()) {
      const auto c = load(convert_in, convert_args);
      const auto to = convert_to.empty() ? corpus_format_for(convert_out) : parse_corpus_format(convert_to);
      write_corpus(c, convert_out, to);
    } else if (bt_cmd->parsed()) {
      auto backend = adapter::make_adapter(bt_adapter);
      const auto mono = load(bt_corpus, bt_args);
      augment::BacktranslateOptions opts;
      opts.in_flight = bt_concurrency;
      opts.beam_size = bt_beam;
      const auto result = augment::synthesize_bt_corpus(mono, *backend, mono.languages(), opts);
      augment::save_segments(bt_out, result.segments);
      const auto rejects_path = bt_rejects.empty() ? bt_out + ".rejects.jsonl" : bt_rejects;
      augment::save_rejects(rejects_path, result.rejects);
      std::cout << "segments " << result.segments.size() << ", rejects " << result.rejects.size() << " ("
                << rejects_path << ")\n";
    } else if (filter_cmd->parsed()) {
      const auto segments = augment::load_segments(filter_in);
      const auto r = augment::filter_by_quality(segments, filter_threshold);
      augment::save_segments(filter_out, r.kept);
      std::cout << "kept " << r.kept.size() << ", removed " << r.removed_count << " (threshold " << filter_threshold
                << ")\n";
    } else if (tag_cmd->parsed()) {
      if (!tag_apply && !tag_strip) throw ValidationError("pass --apply or --strip");
      if (tag_apply) augment::validate_tag(tag_value);
      const auto c = load(tag_in, tag_args);
      std::vector<Utterance> utts(c.begin(), c.end());
      for (auto& u : utts) {
        if (!tag_all && u.origin != Origin::synthetic) continue;
        u.transcript = tag_apply ? augment::apply_bt_tag(u.transcript, tag_value)
                                 : augment::strip_bt_tag(u.transcript, tag_value);
      }
      write_corpus(Corpus(c.name(), c.split(), c.languages(), std::move(utts)), tag_out,
                   format_of(tag_args.format, tag_out));
    } else if (build_cmd->parsed()) {
      const auto authentic = load(build_authentic, build_args);
      const auto synthetic = augment::load_segments(build_synthetic);
      augment::AugmentConfig cfg;
      cfg.threshold = build_threshold;
      cfg.tag = build_tag;
      if (build_policy == "prepend") {
        cfg.tag_policy = augment::TagPolicy::prepend;
      } else if (build_policy != "none") {
        throw ValidationError("--tag-policy must be none or prepend");
      }
      const auto out = augment::build_training_set(authentic, synthetic, cfg, authentic.languages());
      write_corpus(out, build_out, format_of(build_args.format, build_out));
      std::cout << "training set: " << authentic.size() << " authentic + " << out.size() - authentic.size()
                << " synthetic\n";
    } else if (eval_cmd->parsed()) {
      const auto refs = read_lines(eval_refs);
      const auto hyps = read_lines(eval_hyps);
      metrics::EvalOptions opts;
      opts.smoothing = metrics::parse_bleu_smoothing(eval_smoothing);
      opts.wer_normalization = metrics::parse_wer_normalization(eval_wer_norm);
      auto report = metrics::evaluate(refs, hyps, metrics::parse_metric_set(eval_metrics), opts);
      if (!eval_comet.empty()) report.comet = metrics::comet_from_json(read_json(eval_comet));
      const auto j = metrics::to_json(report);
      std::cout << j.dump(2) << '\n' << metrics::render_table(report);
      if (!eval_json_out.empty()) {
        std::ofstream out(eval_json_out);
        if (!(out << j.dump(2) << '\n')) throw IoError(eval_json_out, "write failed");
      }
    } else if (run_cmd->parsed()) {
      auto config = cascade::load_config(run_config);
      if (!run_system.empty()) config.system = run_system;
      const auto corpus = load(run_corpus, run_args, parse_split(run_args.split));
      auto backend = adapter::make_adapter(config.adapter, fs::path(run_config).parent_path());
      auto report = cascade::run_pipeline(corpus, config, *backend);
      if (!run_comet.empty() && report.metrics) report.metrics->comet = metrics::comet_from_json(read_json(run_comet));
      cascade::save_report(report, run_out);
      std::cout << cascade::compare(std::span(&report, 1), cascade::TableFormat::markdown) << "evaluated "
                << report.evaluated << ", failed " << report.failed << " -> " << run_out << '\n';
    } else if (compare_cmd->parsed()) {
      std::vector<cascade::RunReport> reports;
      for (const auto& p : compare_inputs) reports.push_back(cascade::load_report(p));
      std::cout << cascade::compare(reports, cascade::parse_table_format(compare_format));
    } else if (replay_cmd->parsed()) {
      const auto corpus = load(replay_corpus, replay_args, parse_split(replay_args.split));
      cascade::PipelineConfig config;
      config.mode = cascade::parse_mode(replay_mode);
      config.system = replay_system;
      config.adapter = "replay:" + replay_hyps;
      const auto report = cascade::replay_hypotheses(corpus, read_lines(replay_hyps), config);
      cascade::save_report(report, replay_out);
      std::cout << cascade::compare(std::span(&report, 1), cascade::TableFormat::markdown);
    } else if (verify_cmd->parsed()) {
      const auto report = cascade::load_report(verify_input);
      if (!cascade::verify_report(report)) {
        std::cerr << verify_input << ": aggregates do NOT match the stored outputs\n";
        return 1;
      }
      std::cout << verify_input << ": aggregates reproduce from " << report.records.size() << " records\n";
    }
  } catch (const lrst::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
