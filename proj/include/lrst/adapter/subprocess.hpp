#pragma once

#include <cerrno>
#include <chrono>
#include <cstring>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include "lrst/adapter/adapter.hpp"
#include "lrst/adapter/protocol.hpp"
#include "lrst/error.hpp"

extern char** environ;

namespace lrst::adapter {

/// Speaks newline-delimited JSON with a child process over its stdin/stdout.
/// The child's stdin and stdout are one end of a socketpair, which lets the
/// client write with MSG_NOSIGNAL instead of touching the SIGPIPE disposition.
class SubprocessAdapter final : public Adapter {
 public:
  explicit SubprocessAdapter(std::string command, std::chrono::milliseconds timeout = std::chrono::minutes(5))
      : command_(std::move(command)), timeout_(timeout) {
    int fds[2];
    if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, fds) != 0) {
      throw AdapterError("socketpair failed: " + std::string(std::strerror(errno)));
    }
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, fds[1], STDIN_FILENO);
    posix_spawn_file_actions_adddup2(&actions, fds[1], STDOUT_FILENO);
    const char* argv[] = {"/bin/sh", "-c", command_.c_str(), nullptr};
    const int rc = ::posix_spawn(&pid_, "/bin/sh", &actions, nullptr, const_cast<char* const*>(argv), environ);
    posix_spawn_file_actions_destroy(&actions);
    ::close(fds[1]);
    if (rc != 0) {
      ::close(fds[0]);
      throw AdapterError("cannot start adapter '" + command_ + "': " + std::strerror(rc));
    }
    fd_ = fds[0];
  }

  SubprocessAdapter(const SubprocessAdapter&) = delete;
  SubprocessAdapter& operator=(const SubprocessAdapter&) = delete;

  ~SubprocessAdapter() override {
    if (fd_ >= 0) {
      ::shutdown(fd_, SHUT_WR);
      ::close(fd_);
    }
    if (pid_ > 0) reap();
  }

  Capabilities capabilities() override {
    std::lock_guard lock(mutex_);
    if (!caps_) {
      nlohmann::ordered_json req{{"id", "__capabilities__"}, {"task", "capabilities"}};
      send_line(req.dump());
      const auto line = read_line();
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error& e) {
        throw ProtocolError(std::string("malformed capabilities response: ") + e.what());
      }
      caps_ = capabilities_from_json(j);
    }
    return *caps_;
  }

  std::vector<AdapterResponse> infer(std::span<const AdapterRequest> requests, std::size_t in_flight) override {
    validate_batch(requests);
    std::lock_guard lock(mutex_);
    in_flight = std::max<std::size_t>(1, in_flight);

    std::unordered_map<std::string, std::size_t> pending;
    std::vector<std::optional<AdapterResponse>> slots(requests.size());
    std::size_t sent = 0;
    std::size_t received = 0;
    while (received < requests.size()) {
      while (sent < requests.size() && pending.size() < in_flight) {
        pending.emplace(requests[sent].id, sent);
        send_line(to_json(requests[sent]).dump());
        ++sent;
      }
      auto resp = parse_response_line(read_line());
      const auto it = pending.find(resp.id);
      if (it == pending.end()) {
        throw ProtocolError("response for unknown or already answered id '" + resp.id + "'" +
                            (resp.error ? " (" + *resp.error + ")" : ""));
      }
      const auto index = it->second;
      pending.erase(it);
      check_response(requests[index], resp);
      slots[index] = std::move(resp);
      ++received;
    }

    std::vector<AdapterResponse> out;
    out.reserve(slots.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
  }

  std::string describe() const override { return "exec:" + command_; }

 private:
  void send_line(const std::string& line) {
    std::string buf = line;
    buf.push_back('\n');
    std::size_t off = 0;
    while (off < buf.size()) {
      const auto n = ::send(fd_, buf.data() + off, buf.size() - off, MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw AdapterError("adapter '" + command_ + "' is not accepting requests: " + std::strerror(errno));
      }
      off += static_cast<std::size_t>(n);
    }
  }

  std::string read_line() {
    const auto deadline = std::chrono::steady_clock::now() + timeout_;
    while (true) {
      if (const auto nl = buffer_.find('\n'); nl != std::string::npos) {
        std::string line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        return line;
      }
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0) throw AdapterError("adapter '" + command_ + "' timed out");
      pollfd p{fd_, POLLIN, 0};
      const int rc = ::poll(&p, 1, static_cast<int>(std::min<long long>(left.count(), 1 << 30)));
      if (rc < 0 && errno == EINTR) continue;
      if (rc < 0) throw AdapterError(std::string("poll failed: ") + std::strerror(errno));
      if (rc == 0) continue;
      char chunk[8192];
      const auto n = ::read(fd_, chunk, sizeof chunk);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) throw AdapterError("adapter '" + command_ + "' closed the connection");
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

  void reap() {
    for (int i = 0; i < 200; ++i) {
      if (::waitpid(pid_, nullptr, WNOHANG) != 0) return;
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    ::kill(pid_, SIGKILL);
    ::waitpid(pid_, nullptr, 0);
  }

  std::string command_;
  std::chrono::milliseconds timeout_;
  pid_t pid_ = -1;
  int fd_ = -1;
  std::string buffer_;
  std::mutex mutex_;
  std::optional<Capabilities> caps_;
};

}  // namespace lrst::adapter
