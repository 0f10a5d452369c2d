#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nass {

enum class ErrorCode {
  InvalidEncoding,
  UnknownToken,
  NoMatch,
  LexiconFormat,
  InvalidRecord,
  MalformedXml,
  SchemaViolation,
  InvalidProfile,
  InvalidContext,
  ZeroLines,
  NoTargetTokens,
  InsufficientDistractors,
  SubclassAbsent,
  InvalidRequest,
  UnknownItemId,
  MissingAnswerKeys,
  CollectionExhausted,
  EmptyText,
  StorageFailure,
  NotFound,
  CorruptStore,
  UnknownSession,
  Unauthenticated,
  InvalidConfig,
};

/// Stable machine-readable name, used in CLI diagnostics and API error bodies.
std::string_view to_string(ErrorCode code) noexcept;

/// Every engine failure surfaces as this exception type; `code()` selects the
/// exit status / HTTP status at the front ends.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nass
