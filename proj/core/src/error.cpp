#include "planrec/error.hpp"

namespace planrec {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kFormat: return "format error";
    case ErrorCode::kEmptyCorpus: return "empty corpus";
    case ErrorCode::kInvalidConfig: return "invalid config";
    case ErrorCode::kDegenerateVocabulary: return "degenerate vocabulary";
    case ErrorCode::kIndex: return "index error";
    case ErrorCode::kUnknownAction: return "unknown action";
    case ErrorCode::kTooLarge: return "too large";
    case ErrorCode::kNumeric: return "numeric error";
    case ErrorCode::kEmptyLibrary: return "empty library";
    case ErrorCode::kInvalidInput: return "invalid input";
    case ErrorCode::kShapeMismatch: return "shape mismatch";
    case ErrorCode::kIo: return "i/o error";
  }
  return "error";
}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, std::string(to_string(code)) + ": " + message);
}

}  // namespace planrec
