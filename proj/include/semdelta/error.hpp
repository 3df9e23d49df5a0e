#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace semdelta {

enum class ErrorCode {
  // lexicon
  kMalformedLine,
  kDuplicateCategory,
  kEmptyCategory,
  kInvalidTerm,
  kEmptyLexicon,
  kNotUtf8,
  // metrics
  kNoMatches,
  // stats
  kEmptySample,
  kInsufficientSample,
  kDegenerateVariance,
  kNoConvergence,
  // corpus
  kMissingColumn,
  kMalformedJsonLine,
  kMalformedCsv,
  kDuplicateId,
  kEmptyCorpus,
  kInvalidConfig,
  // genclient
  kAuthMissing,
  kEndpointUnreachable,
  kMalformedResponse,
  kRateLimited,
  // io
  kIo,
};

std::string_view error_code_name(ErrorCode code);

// Thrown by every fallible operation in the library. `line` is 1-based and 0
// when the error is not tied to a position in an input stream.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::size_t line = 0);

  ErrorCode code() const noexcept { return code_; }
  std::size_t line() const noexcept { return line_; }
  // Message without the code name and line prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
  std::size_t line_;
};

}  // namespace semdelta
