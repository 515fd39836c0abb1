#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "lrst/adapter/protocol.hpp"
#include "lrst/error.hpp"

namespace lrst::adapter {

/// Client handle to an inference backend.
///
/// `infer` answers a batch; `result[i]` always pairs with `requests[i]`
/// whatever order the backend replied in. Implementations keep at most
/// `in_flight` requests outstanding. Per-request failures come back as
/// `ok == false`; a backend that cannot be reached, dies, or breaks the
/// protocol raises AdapterError (or ProtocolError) instead.
class Adapter {
 public:
  virtual ~Adapter() = default;

  virtual Capabilities capabilities() = 0;
  virtual std::vector<AdapterResponse> infer(std::span<const AdapterRequest> requests, std::size_t in_flight) = 0;
  virtual std::string describe() const = 0;
};

/// Rejects batches the pairing logic could not disambiguate.
inline void validate_batch(std::span<const AdapterRequest> requests) {
  std::unordered_set<std::string_view> ids;
  for (const auto& r : requests) {
    validate(r);
    if (!ids.insert(r.id).second) throw ValidationError("duplicate request id '" + r.id + "' in batch");
  }
}

/// Runs fn(i) for i in [0, n) on up to `workers` threads. The first exception
/// thrown by any call is rethrown after all threads have joined.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn&& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        while (!stop.load()) {
          const auto i = next.fetch_add(1);
          if (i >= n) return;
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
            stop.store(true);
          }
        }
      });
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace lrst::adapter
