#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "lrst/corpus/io.hpp"
#include "lrst/corpus/ops.hpp"
#include "support/test_support.hpp"

using namespace lrst;
using lrst::testing::TempDir;
using lrst::testing::utt;

namespace {

Corpus make(std::string name, std::vector<Utterance> utts, Split split = Split::train) {
  return Corpus(std::move(name), split, {"bem", "eng"}, std::move(utts));
}

Corpus parse(const std::string& text, CorpusFormat fmt) {
  std::istringstream in(text);
  return read_corpus(in, fmt, LoadOptions{"t", Split::train, {"bem", "eng"}});
}

std::string header() { return std::string(kTsvHeader) + "\n"; }

}  // namespace

TEST(Utterance, ValidateRejectsBadRecords) {
  EXPECT_NO_THROW(validate(utt("a", "x")));
  EXPECT_THROW(validate(utt("", "x")), ValidationError);
  EXPECT_THROW(validate(utt("a", "  \t")), ValidationError);
  auto u = utt("a", "x");
  u.quality = 1.5;
  EXPECT_THROW(validate(u), ValidationError);
  u.quality = 0.0;
  EXPECT_THROW(validate(u), ValidationError);
  auto s = utt("s", "x");
  s.origin = Origin::synthetic;
  EXPECT_THROW(validate(s), ValidationError);
  s.quality = 0.9;
  EXPECT_NO_THROW(validate(s));
}

TEST(Corpus, EnforcesUniqueIdsAndLanguagePair) {
  EXPECT_THROW(make("c", {utt("a", "x"), utt("a", "y")}), ValidationError);
  EXPECT_THROW(make("c", {utt("a", "x", std::nullopt, std::nullopt, "nya", "eng")}), ValidationError);
  const auto c = make("c", {utt("a", "x"), utt("b", "y")});
  EXPECT_EQ(c.size(), 2u);
  EXPECT_EQ(c[1].id, "b");
  EXPECT_THROW((void)c[2], std::out_of_range);
}

TEST(EnumStrings, RoundTrip) {
  for (auto s : {Split::train, Split::dev, Split::test}) EXPECT_EQ(parse_split(to_string(s)), s);
  for (auto o : {Origin::authentic, Origin::synthetic}) EXPECT_EQ(parse_origin(to_string(o)), o);
  EXPECT_THROW(parse_split("valid"), ValidationError);
  EXPECT_THROW(parse_origin("fake"), ValidationError);
}

TEST(CorpusIo, TsvAndJsonlRoundTrip) {
  auto s = utt("s1", "tab\there\\ and\nnewline \xC3\xA9", std::string("T\r"), std::string("a b.wav"));
  s.origin = Origin::synthetic;
  s.quality = 0.1 + 0.2;  // not exactly representable in short decimal
  const auto c = make("t", {utt("u1", "muli shani", std::string("how are you")), s, utt("u2", "x")});
  for (auto fmt : {CorpusFormat::tsv, CorpusFormat::jsonl}) {
    std::ostringstream out;
    write_corpus(out, c, fmt);
    EXPECT_EQ(parse(out.str(), fmt), c);
  }
}

TEST(CorpusIo, FileRoundTripUsesStemAsName) {
  TempDir dir;
  const auto c = make("whatever", {utt("u1", "x", std::string("y"), std::string("u1.wav"))});
  write_corpus(c, dir / "dev_set.jsonl", CorpusFormat::jsonl);
  const auto back = load_corpus(dir / "dev_set.jsonl", CorpusFormat::jsonl, {"", Split::dev, {"bem", "eng"}});
  EXPECT_EQ(back.name(), "dev_set");
  EXPECT_EQ(back.split(), Split::dev);
  EXPECT_EQ(back[0], c[0]);
}

TEST(CorpusIo, HeaderOnlyTsvIsEmptyCorpus) {
  EXPECT_TRUE(parse(header(), CorpusFormat::tsv).empty());
  std::ostringstream out;
  write_corpus(out, make("t", {}), CorpusFormat::tsv);
  EXPECT_EQ(out.str(), header());
}

TEST(CorpusIo, EmptyInputIsAnError) {
  EXPECT_THROW(parse("", CorpusFormat::tsv), ParseError);
  EXPECT_THROW(parse("", CorpusFormat::jsonl), ParseError);
  EXPECT_THROW(parse("\n  \n", CorpusFormat::jsonl), ParseError);
}

TEST(CorpusIo, EmptyOriginMeansAuthentic) {
  const auto c = parse(header() + "u1\t\tx\t\t\t\n", CorpusFormat::tsv);
  EXPECT_EQ(c[0].origin, Origin::authentic);
  EXPECT_FALSE(c[0].audio);
  EXPECT_FALSE(c[0].translation);
}

TEST(CorpusIo, CrlfAccepted) {
  const auto c = parse(std::string(kTsvHeader) + "\r\nu1\t\tx\ty\tauthentic\t\r\n", CorpusFormat::tsv);
  EXPECT_EQ(*c[0].translation, "y");
}

TEST(CorpusIo, JsonlNullMeansAbsentAndBlankLinesSkipped) {
  const auto c = parse("{\"id\":\"a\",\"transcript\":\"x\",\"audio\":null}\n\n{\"id\":\"b\",\"transcript\":\"y\"}\n",
                       CorpusFormat::jsonl);
  EXPECT_EQ(c.size(), 2u);
  EXPECT_FALSE(c[0].audio);
}

struct BadInput {
  const char* name;
  CorpusFormat fmt;
  std::string text;
  std::size_t line;
  const char* needle;
};

class CorpusIoErrors : public ::testing::TestWithParam<BadInput> {};

TEST_P(CorpusIoErrors, ReportsLineAndCause) {
  const auto& p = GetParam();
  try {
    parse(p.text, p.fmt);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), p.line) << e.what();
    EXPECT_NE(std::string(e.what()).find(p.needle), std::string::npos) << e.what();
  }
}

INSTANTIATE_TEST_SUITE_P(
    Cases, CorpusIoErrors,
    ::testing::Values(
        BadInput{"bad_header", CorpusFormat::tsv, "id\ttext\n", 1, "header"},
        BadInput{"field_count", CorpusFormat::tsv, header() + "u1\t\tx\n", 2, "6 tab-separated"},
        BadInput{"duplicate", CorpusFormat::tsv, header() + "u1\t\tx\t\t\t\nu1\t\ty\t\t\t\n", 3, "duplicate id"},
        BadInput{"bad_utf8", CorpusFormat::tsv, header() + "u1\t\tx\xFF\t\t\t\n", 2, "UTF-8"},
        BadInput{"bad_origin", CorpusFormat::tsv, header() + "u1\t\tx\t\tmaybe\t\n", 2, "origin"},
        BadInput{"bad_quality", CorpusFormat::tsv, header() + "u1\t\tx\t\tsynthetic\t0.5x\n", 2, "bad number"},
        BadInput{"synthetic_no_quality", CorpusFormat::tsv, header() + "u1\t\tx\t\tsynthetic\t\n", 2, "quality"},
        BadInput{"empty_transcript", CorpusFormat::tsv, header() + "u1\t\t \t\t\t\n", 2, "transcript"},
        BadInput{"bad_escape", CorpusFormat::tsv, header() + "u1\t\ta\\q\t\t\t\n", 2, "escape"},
        BadInput{"malformed_json", CorpusFormat::jsonl, "{\"id\":\"a\",\"transcript\":\"x\"}\n{oops\n", 2, "malformed"},
        BadInput{"unknown_key", CorpusFormat::jsonl, "{\"id\":\"a\",\"transcript\":\"x\",\"lang\":\"bem\"}\n", 1,
                 "unknown key"},
        BadInput{"missing_id", CorpusFormat::jsonl, "{\"transcript\":\"x\"}\n", 1, "missing key 'id'"},
        BadInput{"not_object", CorpusFormat::jsonl, "[1,2]\n", 1, "not a JSON object"},
        BadInput{"quality_type", CorpusFormat::jsonl, "{\"id\":\"a\",\"transcript\":\"x\",\"quality\":\"hi\"}\n", 1,
                 "number"}),
    [](const auto& info) { return std::string(info.param.name); });

TEST(CorpusIo, LoadErrorsNameTheFile) {
  TempDir dir;
  lrst::testing::write_file(dir / "c.tsv", header() + "u1\tonly-two\n");
  try {
    load_corpus(dir / "c.tsv", CorpusFormat::tsv);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("c.tsv:2:"), std::string::npos) << e.what();
  }
  EXPECT_THROW(load_corpus(dir / "missing.tsv", CorpusFormat::tsv), IoError);
}

TEST(CorpusIo, FormatFromExtension) {
  EXPECT_EQ(corpus_format_for("a/b.tsv"), CorpusFormat::tsv);
  EXPECT_EQ(corpus_format_for("b.jsonl"), CorpusFormat::jsonl);
  EXPECT_THROW(corpus_format_for("b.csv"), ValidationError);
  EXPECT_THROW(parse_corpus_format("xml"), ValidationError);
}

TEST(Dedup, RemovesNormalizedMatchesOnly) {
  const auto train = make("train", {utt("t1", "Muli shani?"), utt("t2", "natotela sana"), utt("t3", "umwana")});
  const auto test = make("test", {utt("x1", "muli shani")}, Split::test);
  const auto dev = make("dev", {utt("d1", "NATOTELA, sana!")}, Split::dev);
  const std::vector<Corpus> held{test, dev};

  const auto r = dedup_against(train, held);
  EXPECT_EQ(r.removed_count, 2u);
  ASSERT_EQ(r.corpus.size(), 1u);
  EXPECT_EQ(r.corpus[0].id, "t3");
  EXPECT_EQ(r.corpus.name(), "train");

  const auto exact = dedup_against(train, held, MatchMode::exact);
  EXPECT_EQ(exact.removed_count, 0u);
}

TEST(Dedup, HeldOutSourceLanguageMustMatch) {
  const auto train = make("train", {utt("t1", "x")});
  const Corpus other("o", Split::test, {"nya", "eng"}, {utt("o1", "x", std::nullopt, std::nullopt, "nya", "eng")});
  EXPECT_THROW(dedup_against(train, std::span(&other, 1)), ValidationError);
}

TEST(Dedup, CountOverlapBetweenHeldOutSets) {
  const auto dev = make("dev", {utt("d1", "A b"), utt("d2", "c")}, Split::dev);
  const auto test = make("test", {utt("x1", "a B."), utt("x2", "z")}, Split::test);
  EXPECT_EQ(count_overlap(dev, test), 1u);
  EXPECT_EQ(count_overlap(dev, test, MatchMode::exact), 0u);
}

TEST(Merge, PrefixesCollidingIdsOnly) {
  const auto a = make("a", {utt("1", "x"), utt("2", "y")});
  const auto b = make("b", {utt("1", "z"), utt("3", "w")});
  const std::vector<Corpus> in{a, b};
  const auto m = merge(in, "ab");
  std::vector<std::string> ids;
  for (const auto& u : m) ids.push_back(u.id);
  EXPECT_EQ(ids, (std::vector<std::string>{"a/1", "2", "b/1", "3"}));
  EXPECT_EQ(m.name(), "ab");
}

TEST(Merge, Errors) {
  EXPECT_THROW(merge(std::span<const Corpus>{}, "m"), ValidationError);
  const auto a = make("same", {utt("1", "x")});
  const std::vector<Corpus> same{a, a};
  EXPECT_THROW(merge(same, "m"), ValidationError);
  const Corpus other("o", Split::train, {"bem", "nya"}, {utt("1", "x", std::nullopt, std::nullopt, "bem", "nya")});
  const std::vector<Corpus> mixed{a, other};
  EXPECT_THROW(merge(mixed, "m"), ValidationError);
}

TEST(Stats, CountsFields) {
  auto s = utt("s", "x", std::string("y"));
  s.origin = Origin::synthetic;
  s.quality = 0.8;
  const auto c = make("c", {utt("a", "x", std::string("y"), std::string("a.wav")), utt("b", "x"), s});
  const auto st = stats(c);
  EXPECT_EQ(st.count, 3u);
  EXPECT_EQ(st.with_audio, 1u);
  EXPECT_EQ(st.with_translation, 2u);
  EXPECT_EQ(st.synthetic, 1u);
}

TEST(Fixtures, PipelineCorpusLoads) {
  const auto c = load_corpus(lrst::testing::fixture_dir() / "pipeline" / "test20.tsv", CorpusFormat::tsv,
                             {"", Split::test, {"bem", "eng"}});
  EXPECT_EQ(c.size(), 20u);
  EXPECT_EQ(c[0].transcript, "nafwala na amakalashi ku menso");
  EXPECT_EQ(*c[0].translation, "He is wearing glasses.");
}
