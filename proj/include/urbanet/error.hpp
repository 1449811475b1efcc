#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace urbanet {

/// Base for every error the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document. `offset()` is the byte offset where parsing
/// stopped, or npos when the problem is semantic (bad coordinate, dangling
/// reference) rather than syntactic.
class ParseError : public Error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  explicit ParseError(const std::string& what, std::size_t offset = npos)
      : Error(offset == npos ? what : what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Invalid parameters or configuration, detected before any work is done.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An analysis could not produce a defined result (missing weights,
/// negative costs, undefined modularity, ...).
class AnalysisError : public Error {
 public:
  using Error::Error;
};

/// On-disk bundle written by an incompatible format version.
class FormatVersionError : public Error {
 public:
  using Error::Error;
};

}  // namespace urbanet
