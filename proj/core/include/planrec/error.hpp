#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace planrec {

enum class ErrorCode {
  kFormat,
  kEmptyCorpus,
  kInvalidConfig,
  kDegenerateVocabulary,
  kIndex,
  kUnknownAction,
  kTooLarge,
  kNumeric,
  kEmptyLibrary,
  kInvalidInput,
  kShapeMismatch,
  kIo,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so
// callers (CLI exit codes, HTTP statuses) can map it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace planrec
