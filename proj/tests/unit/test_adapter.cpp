#include <gtest/gtest.h>

#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "lrst/adapter/factory.hpp"
#include "lrst/adapter/http.hpp"
#include "lrst/adapter/mock.hpp"
#include "lrst/adapter/protocol.hpp"
#include "lrst/adapter/subprocess.hpp"
#include "support/test_support.hpp"

using namespace lrst;
using namespace lrst::adapter;
using nlohmann::json;

namespace {

std::filesystem::path fixture_path() { return lrst::testing::fixture_dir() / "pipeline" / "mock_adapter.json"; }

std::string server_command(const std::string& extra = "") {
  return std::string("'") + LRST_MOCK_SERVER + "' '" + fixture_path().string() + "' " + extra;
}

AdapterRequest translate(std::string id, std::string text, bool score = false) {
  AdapterRequest r;
  r.id = std::move(id);
  r.task = Task::translate;
  r.text = std::move(text);
  r.src_lang = "bem";
  r.tgt_lang = "eng";
  r.return_score = score;
  return r;
}

AdapterRequest transcribe(std::string id, std::string audio) {
  AdapterRequest r;
  r.id = std::move(id);
  r.task = Task::transcribe;
  r.audio = std::move(audio);
  r.src_lang = "bem";
  r.tgt_lang = "eng";
  return r;
}

std::vector<AdapterRequest> mixed_batch() {
  std::vector<AdapterRequest> reqs;
  for (int i = 1; i <= 20; ++i) {
    char id[8];
    std::snprintf(id, sizeof id, "u%02d", i);
    reqs.push_back(transcribe(std::string("asr:") + id, std::string("clips/") + id + ".wav"));
  }
  reqs.push_back(translate("mt:1", "natotela sana"));
  reqs.push_back(translate("mt:2", "not in the table"));
  reqs.push_back(transcribe("asr:missing", "clips/zz.wav"));
  return reqs;
}

/// In-process HTTP endpoint answering from the mock table.
class MockHttpServer {
 public:
  enum class Mode { normal, garbage, wrong_id };

  explicit MockHttpServer(const std::filesystem::path& fixture) : mock_(MockAdapter::from_file(fixture)) {
    server_.Post(kInferPath, [this](const httplib::Request& req, httplib::Response& res) {
      switch (mode_.load()) {
        case Mode::normal: res.set_content(mock_.answer_line(req.body), "application/json"); break;
        case Mode::garbage:
          res.status = 502;
          res.set_content("<html>bad gateway</html>", "text/html");
          break;
        case Mode::wrong_id: {
          auto j = json::parse(mock_.answer_line(req.body));
          j["id"] = "someone-else";
          res.set_content(j.dump(), "application/json");
          break;
        }
      }
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~MockHttpServer() {
    server_.stop();
    thread_.join();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
  void set_mode(Mode m) { mode_ = m; }

 private:
  MockAdapter mock_;
  httplib::Server server_;
  std::atomic<Mode> mode_{Mode::normal};
  int port_ = 0;
  std::thread thread_;
};

}  // namespace

TEST(Protocol, RequestJsonRoundTrip) {
  auto r = transcribe("asr:u1", "clips/u1.wav");
  r.beam_size = 3;
  r.return_score = true;
  const auto j = to_json(r);
  EXPECT_EQ(j.dump(),
            R"({"id":"asr:u1","task":"transcribe","audio":"clips/u1.wav","src_lang":"bem","tgt_lang":"eng",)"
            R"("beam_size":3,"return_score":true})");
  EXPECT_EQ(request_from_json(json::parse(j.dump())), r);
}

TEST(Protocol, RequestDefaultsAndErrors) {
  const auto r = request_from_json(json::parse(R"({"id":"x","task":"translate","text":"a"})"));
  EXPECT_EQ(r.beam_size, kDefaultBeamSize);
  EXPECT_FALSE(r.return_score);
  EXPECT_THROW(request_from_json(json::parse(R"({"id":"x","task":"summarize"})")), ProtocolError);
  EXPECT_THROW(request_from_json(json::parse(R"({"id":"x","task":"translate"})")), ProtocolError);
  EXPECT_THROW(request_from_json(json::parse(R"({"id":"x","task":"transcribe"})")), ProtocolError);
  EXPECT_THROW(request_from_json(json::parse(R"({"task":"translate","text":"a"})")), ProtocolError);
  EXPECT_THROW(request_from_json(json::parse(R"({"id":"x","task":"translate","text":"a","beam_size":0})")),
               ProtocolError);
  EXPECT_THROW(request_from_json(json::parse("[]")), ProtocolError);
}

TEST(Protocol, ResponseJsonRoundTrip) {
  for (const auto& r : {AdapterResponse::success("a", "hi", -0.25), AdapterResponse::success("b", "x"),
                        AdapterResponse::failure("c", "no such file: c.wav")}) {
    EXPECT_EQ(parse_response_line(to_json(r).dump()), r);
  }
  EXPECT_THROW(parse_response_line("{oops"), ProtocolError);
  EXPECT_THROW(parse_response_line(R"({"id":"a"})"), ProtocolError);
}

TEST(Protocol, CheckResponse) {
  const auto req = translate("a", "x", true);
  EXPECT_NO_THROW(check_response(req, AdapterResponse::success("a", "y", -0.1)));
  EXPECT_NO_THROW(check_response(req, AdapterResponse::success("a", "y", 0.0)));
  EXPECT_NO_THROW(check_response(req, AdapterResponse::failure("a", "boom")));
  EXPECT_THROW(check_response(req, AdapterResponse::success("b", "y", -0.1)), ProtocolError);
  EXPECT_THROW(check_response(req, AdapterResponse::success("a", "y")), ProtocolError);
  EXPECT_THROW(check_response(req, AdapterResponse::success("a", "y", 0.3)), ProtocolError);
  EXPECT_THROW(check_response(req, AdapterResponse::success("a", "y", std::nan(""))), ProtocolError);
  AdapterResponse no_text{"a", true, std::nullopt, -0.1, std::nullopt};
  EXPECT_THROW(check_response(req, no_text), ProtocolError);
}

TEST(Protocol, CapabilitiesJson) {
  Capabilities c{{Task::translate, Task::transcribe}, {{"bem", "eng"}}, "test", json{{"k", 1}}};
  const auto back = capabilities_from_json(json::parse(capabilities_to_json(c, "q").dump()));
  EXPECT_EQ(back.tasks, c.tasks);
  EXPECT_EQ(back.language_pairs, c.language_pairs);
  EXPECT_EQ(back.backend, "test");
  EXPECT_EQ(back.metadata, c.metadata);
  EXPECT_EQ(language_pair_from_json("bem-eng"), (LanguagePair{"bem", "eng"}));
  EXPECT_EQ(language_pair_from_json(json{{"src", "a"}, {"tgt", "b"}}), (LanguagePair{"a", "b"}));
  EXPECT_THROW(language_pair_from_json("bem"), ProtocolError);
  EXPECT_THROW(capabilities_from_json(json{{"ok", false}, {"error", "down"}}), CapabilityError);
}

TEST(Protocol, Require) {
  Capabilities c{{Task::translate}, {{"bem", "eng"}}, "t", json::object()};
  EXPECT_NO_THROW(require(c, Task::translate, {"bem", "eng"}));
  EXPECT_THROW(require(c, Task::transcribe, {"bem", "eng"}), CapabilityError);
  EXPECT_THROW(require(c, Task::translate, {"eng", "bem"}), CapabilityError);
}

TEST(Mock, AnswersFromTable) {
  const auto mock = MockAdapter::from_file(fixture_path());
  EXPECT_EQ(mock.answer(transcribe("a", "clips/u01.wav")).text, "nafwala na amakalashi ku menso");
  EXPECT_EQ(mock.answer(transcribe("a", "u01")).text, "nafwala na amakalashi ku menso");
  EXPECT_EQ(mock.answer(transcribe("a", "clips/u19.wav")).error, "audio decode failed");
  EXPECT_EQ(mock.answer(transcribe("a", "nope.wav")).error, "no such file: nope.wav");
  EXPECT_EQ(mock.answer(translate("b", "nafwala na amakalashi ku menso")).text, "he is wearing glasses as well");
  EXPECT_FALSE(mock.answer(translate("b", "unknown")).ok);
  auto wrong_pair = translate("c", "x");
  wrong_pair.src_lang = "nya";
  EXPECT_NE(mock.answer(wrong_pair).error->find("capability"), std::string::npos);
}

TEST(Mock, ScoresOnlyWhenAsked) {
  const auto mock = MockAdapter::from_file(fixture_path());
  EXPECT_FALSE(mock.answer(translate("a", "natotela sana")).avg_log_prob);
  EXPECT_DOUBLE_EQ(*mock.answer(translate("a", "natotela sana", true)).avg_log_prob, -0.1);
}

TEST(Mock, IdentityFallbackAndUnsupportedTask) {
  MockAdapter mock(json{{"tasks", {"translate"}}, {"language_pairs", json::array({json::array({"bem", "eng"})})}, {"translate_fallback", "identity"}});
  EXPECT_EQ(mock.answer(translate("a", "anything")).text, "anything");
  EXPECT_FALSE(mock.answer(transcribe("b", "u.wav")).ok);
  EXPECT_EQ(mock.capabilities().backend, "mock");
}

TEST(Mock, BadTables) {
  EXPECT_THROW(MockAdapter(json::array()), std::exception);
  EXPECT_THROW(MockAdapter::from_file("/nonexistent/table.json"), std::exception);
}

TEST(Mock, AnswerLineHandlesGarbage) {
  const auto mock = MockAdapter::from_file(fixture_path());
  const auto bad = json::parse(mock.answer_line("not json"));
  EXPECT_FALSE(bad["ok"].get<bool>());
  EXPECT_TRUE(bad["id"].is_null());
  const auto unknown = json::parse(mock.answer_line(R"({"id":"q","task":"dance"})"));
  EXPECT_EQ(unknown["id"], "q");
  EXPECT_FALSE(unknown["ok"].get<bool>());
  const auto caps = json::parse(mock.answer_line(R"({"id":"c","task":"capabilities"})"));
  EXPECT_EQ(caps["id"], "c");
  EXPECT_EQ(caps["backend"], "mock");
}

TEST(Mock, InferPreservesOrderAtAnyConcurrency) {
  auto mock = MockAdapter::from_file(fixture_path());
  const auto reqs = mixed_batch();
  const auto a = mock.infer(reqs, 1);
  const auto b = mock.infer(reqs, 8);
  EXPECT_EQ(a, b);
  for (std::size_t i = 0; i < reqs.size(); ++i) EXPECT_EQ(a[i].id, reqs[i].id);
}

TEST(Mock, DuplicateIdsRejected) {
  auto mock = MockAdapter::from_file(fixture_path());
  const std::vector<AdapterRequest> reqs{translate("x", "a"), translate("x", "b")};
  EXPECT_THROW(mock.infer(reqs, 2), ValidationError);
}

TEST(ParallelFor, RethrowsFirstError) {
  std::atomic<int> calls{0};
  EXPECT_THROW(parallel_for(100, 4,
                            [&](std::size_t i) {
                              ++calls;
                              if (i == 17) throw AdapterError("boom");
                            }),
               AdapterError);
  EXPECT_LE(calls.load(), 100);
  std::vector<int> seen(50, 0);
  parallel_for(50, 7, [&](std::size_t i) { seen[i]++; });
  for (int v : seen) EXPECT_EQ(v, 1);
}

TEST(Subprocess, MatchesInProcessMock) {
  auto mock = MockAdapter::from_file(fixture_path());
  SubprocessAdapter proc(server_command());
  const auto caps = proc.capabilities();
  EXPECT_EQ(caps.backend, "mock");
  EXPECT_TRUE(caps.supports(Task::translate_audio));
  const auto reqs = mixed_batch();
  EXPECT_EQ(proc.infer(reqs, 1), mock.infer(reqs, 1));
  EXPECT_EQ(proc.infer(reqs, 8), mock.infer(reqs, 1));
}

TEST(Subprocess, PairsOutOfOrderResponsesById) {
  auto mock = MockAdapter::from_file(fixture_path());
  SubprocessAdapter proc(server_command("--reverse"));
  const auto reqs = mixed_batch();
  EXPECT_EQ(proc.infer(reqs, 8), mock.infer(reqs, 1));
}

TEST(Subprocess, ChildExitIsAdapterError) {
  SubprocessAdapter proc(server_command("--exit-after 3"));
  try {
    proc.infer(mixed_batch(), 4);
    FAIL();
  } catch (const ProtocolError&) {
    FAIL() << "expected a transport error";
  } catch (const AdapterError& e) {
    // Either the read sees EOF or the next write hits the closed socket.
    const std::string what = e.what();
    EXPECT_TRUE(what.find("closed") != std::string::npos || what.find("not accepting") != std::string::npos) << what;
  }
}

TEST(Subprocess, GarbageLineIsProtocolError) {
  SubprocessAdapter proc(server_command("--garbage-after 2"));
  EXPECT_THROW(proc.infer(mixed_batch(), 1), ProtocolError);
}

TEST(Subprocess, MissingCommandFails) {
  SubprocessAdapter proc("/nonexistent/adapter-binary");
  EXPECT_THROW(proc.capabilities(), AdapterError);
}

TEST(Subprocess, TimeoutIsAdapterError) {
  SubprocessAdapter proc("sleep 5", std::chrono::milliseconds(200));
  EXPECT_THROW(proc.capabilities(), AdapterError);
}

TEST(Http, MatchesInProcessMock) {
  MockHttpServer server(fixture_path());
  auto mock = MockAdapter::from_file(fixture_path());
  HttpAdapter http(server.url() + "/");
  EXPECT_EQ(http.capabilities().backend, "mock");
  const auto reqs = mixed_batch();
  EXPECT_EQ(http.infer(reqs, 1), mock.infer(reqs, 1));
  EXPECT_EQ(http.infer(reqs, 8), mock.infer(reqs, 1));
  EXPECT_EQ(http.describe(), server.url());
}

TEST(Http, NonJsonBodyIsProtocolError) {
  MockHttpServer server(fixture_path());
  server.set_mode(MockHttpServer::Mode::garbage);
  HttpAdapter http(server.url());
  EXPECT_THROW(http.infer(mixed_batch(), 4), ProtocolError);
}

TEST(Http, MismatchedIdIsProtocolError) {
  MockHttpServer server(fixture_path());
  server.set_mode(MockHttpServer::Mode::wrong_id);
  HttpAdapter http(server.url());
  EXPECT_THROW(http.infer(mixed_batch(), 2), ProtocolError);
}

TEST(Http, UnreachableIsAdapterError) {
  HttpAdapter http("http://127.0.0.1:1");
  try {
    http.capabilities();
    FAIL();
  } catch (const ProtocolError&) {
    FAIL() << "expected a transport error";
  } catch (const AdapterError& e) {
    EXPECT_NE(std::string(e.what()).find("unreachable"), std::string::npos);
  }
}

TEST(Factory, Specs) {
  EXPECT_EQ(make_adapter("mock:" + fixture_path().string())->describe().rfind("mock:", 0), 0u);
  EXPECT_NO_THROW(make_adapter("mock:mock_adapter.json", fixture_path().parent_path()));
  EXPECT_EQ(make_adapter("exec:cat")->describe(), "exec:cat");
  EXPECT_EQ(make_adapter("http://localhost:1")->describe(), "http://localhost:1");
  EXPECT_THROW(make_adapter("grpc://x"), ValidationError);
  EXPECT_THROW(make_adapter("exec:"), ValidationError);
}

TEST(Factory, MockFromEnvironment) {
  ::unsetenv(kFixtureEnv);
  EXPECT_THROW(make_adapter("mock"), AdapterError);
  ::setenv(kFixtureEnv, fixture_path().c_str(), 1);
  auto a = make_adapter("mock");
  EXPECT_EQ(a->capabilities().backend, "mock");
  ::unsetenv(kFixtureEnv);
}
