#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace curator {

enum class ErrorCode {
  MalformedUrl,
  BadTimestamp,
  InvalidTag,
  ManifestSyntax,
  ManifestSemantic,
  DuplicateCollection,
  BadQuery,
  ProviderUnavailable,
  UpstreamUnavailable,
  CdxSyntax,
  ReadOnlyViolation,
  DepthExceeded,
  DuplicateInGroup,
  NotMember,
  EmptyBody,
  Validation,
  NotFound,
  Unauthorized,
  StorageFailure,
  CorruptState,
  BindFailure,
};

std::string_view to_string(ErrorCode code);

/// Every failure surfaced by the library carries a stable code, a human
/// message and an optional machine-oriented detail (line number, offending id).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::string detail = {})
      : std::runtime_error(std::move(message)), code_(code), detail_(std::move(detail)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

/// Error tied to a 1-based line of some line-oriented input.
class LineError : public Error {
 public:
  LineError(ErrorCode code, std::size_t line, std::string message)
      : Error(code, "line " + std::to_string(line) + ": " + message, std::to_string(line)),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace curator
