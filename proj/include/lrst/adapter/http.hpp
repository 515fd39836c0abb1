#pragma once

#include <atomic>
#include <chrono>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <httplib.h>

#include "lrst/adapter/adapter.hpp"
#include "lrst/adapter/protocol.hpp"
#include "lrst/error.hpp"

namespace lrst::adapter {

inline constexpr const char* kInferPath = "/v1/infer";

/// Mirror transport: one POST /v1/infer per request, same JSON bodies as the
/// stdio protocol. Each worker thread owns its own connection.
class HttpAdapter final : public Adapter {
 public:
  explicit HttpAdapter(std::string base_url, std::chrono::seconds timeout = std::chrono::seconds(300))
      : base_url_(std::move(base_url)), timeout_(timeout) {
    while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
  }

  Capabilities capabilities() override {
    std::lock_guard lock(mutex_);
    if (!caps_) {
      auto client = make_client();
      const nlohmann::json body{{"id", "__capabilities__"}, {"task", "capabilities"}};
      caps_ = capabilities_from_json(post(client, body.dump()));
    }
    return *caps_;
  }

  std::vector<AdapterResponse> infer(std::span<const AdapterRequest> requests, std::size_t in_flight) override {
    validate_batch(requests);
    std::vector<AdapterResponse> out(requests.size());
    const std::size_t workers = std::max<std::size_t>(1, std::min(in_flight, requests.size()));
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    parallel_for(workers, workers, [&](std::size_t) {
      auto client = make_client();
      try {
        for (auto i = next.fetch_add(1); i < requests.size() && !failed.load(); i = next.fetch_add(1)) {
          auto resp = response_from_json(post(client, to_json(requests[i]).dump()));
          check_response(requests[i], resp);
          out[i] = std::move(resp);
        }
      } catch (...) {
        failed.store(true);
        throw;
      }
    });
    return out;
  }

  std::string describe() const override { return base_url_; }

 private:
  httplib::Client make_client() const {
    httplib::Client c(base_url_);
    c.set_connection_timeout(std::chrono::seconds(10));
    c.set_read_timeout(timeout_);
    c.set_write_timeout(timeout_);
    return c;
  }

  nlohmann::json post(httplib::Client& client, const std::string& body) const {
    auto res = client.Post(kInferPath, body, "application/json");
    if (!res) {
      throw AdapterError("adapter " + base_url_ + " unreachable: " + httplib::to_string(res.error()));
    }
    try {
      return nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::parse_error&) {
      throw ProtocolError("adapter " + base_url_ + " answered HTTP " + std::to_string(res->status) +
                          " with a non-JSON body");
    }
  }

  std::string base_url_;
  std::chrono::seconds timeout_;
  std::mutex mutex_;
  std::optional<Capabilities> caps_;
};

}  // namespace lrst::adapter
