#include "semdelta/error.hpp"

namespace semdelta {

namespace {

std::string format_message(ErrorCode code, const std::string& message, std::size_t line) {
  std::string out(error_code_name(code));
  if (line > 0) {
    out += " (line " + std::to_string(line) + ")";
  }
  if (!message.empty()) {
    out += ": " + message;
  }
  return out;
}

}  // namespace

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kDuplicateCategory: return "DuplicateCategory";
    case ErrorCode::kEmptyCategory: return "EmptyCategory";
    case ErrorCode::kInvalidTerm: return "InvalidTerm";
    case ErrorCode::kEmptyLexicon: return "EmptyLexicon";
    case ErrorCode::kNotUtf8: return "NotUtf8";
    case ErrorCode::kNoMatches: return "NoMatches";
    case ErrorCode::kEmptySample: return "EmptySample";
    case ErrorCode::kInsufficientSample: return "InsufficientSample";
    case ErrorCode::kDegenerateVariance: return "DegenerateVariance";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kMissingColumn: return "MissingColumn";
    case ErrorCode::kMalformedJsonLine: return "MalformedJsonLine";
    case ErrorCode::kMalformedCsv: return "MalformedCsv";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kAuthMissing: return "AuthMissing";
    case ErrorCode::kEndpointUnreachable: return "EndpointUnreachable";
    case ErrorCode::kMalformedResponse: return "MalformedResponse";
    case ErrorCode::kRateLimited: return "RateLimited";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::size_t line)
    : std::runtime_error(format_message(code, message, line)),
      code_(code),
      detail_(message),
      line_(line) {}

}  // namespace semdelta
