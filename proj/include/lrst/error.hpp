#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lrst {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input record. `line()` is 1-based; 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& detail, const std::string& source = {})
      : Error(compose(line, detail, source)), line_(line), detail_(detail) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  static std::string compose(std::size_t line, const std::string& detail, const std::string& source) {
    std::string where = source;
    if (line != 0) where += (where.empty() ? "line " : ":") + std::to_string(line);
    return where.empty() ? detail : where + ": " + detail;
  }

  std::size_t line_;
  std::string detail_;
};

/// A value violates a type invariant or an operation precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  IoError(const std::string& path, const std::string& what)
      : Error(path + ": " + what), path_(path) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// The inference backend could not be reached or stopped answering.
class AdapterError : public Error {
 public:
  using Error::Error;
};

/// The backend answered, but not according to the wire protocol.
class ProtocolError : public AdapterError {
 public:
  using AdapterError::AdapterError;
};

/// The backend does not offer a task or language pair the caller needs.
class CapabilityError : public AdapterError {
 public:
  using AdapterError::AdapterError;
};

}  // namespace lrst
