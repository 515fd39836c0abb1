#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

#include "lrst/adapter/adapter.hpp"
#include "lrst/adapter/http.hpp"
#include "lrst/adapter/mock.hpp"
#include "lrst/adapter/subprocess.hpp"
#include "lrst/error.hpp"

namespace lrst::adapter {

/// Builds an adapter from an endpoint spec:
///
///   mock                 table from $LRST_ADAPTER_FIXTURE
///   mock:<fixture.json>  table from the given file
///   exec:<command>       stdio JSONL child process (run through /bin/sh -c)
///   http://host:port     POST /v1/infer
///
/// Relative fixture paths resolve against `base_dir` when given.
inline std::unique_ptr<Adapter> make_adapter(std::string_view spec, const std::filesystem::path& base_dir = {}) {
  if (spec == "mock") return std::make_unique<MockAdapter>(MockAdapter::from_env());
  if (spec.starts_with("mock:")) {
    std::filesystem::path p(spec.substr(5));
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    return std::make_unique<MockAdapter>(MockAdapter::from_file(p));
  }
  if (spec.starts_with("exec:")) {
    if (spec.size() == 5) throw ValidationError("exec: adapter needs a command");
    return std::make_unique<SubprocessAdapter>(std::string(spec.substr(5)));
  }
  if (spec.starts_with("http://")) return std::make_unique<HttpAdapter>(std::string(spec));
  throw ValidationError("unknown adapter spec '" + std::string(spec) + "' (expected mock, mock:<file>, exec:<cmd> or http://...)");
}

}  // namespace lrst::adapter
