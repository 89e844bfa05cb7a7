#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace yw {

enum class ErrorCode {
  UnknownLanguage,
  UnterminatedBlockComment,
  MissingValue,
  InvalidValue,
  MalformedRecord,
  UnbalancedEnd,
  UnclosedBlock,
  MismatchedEndName,
  PortOutsideBlock,
  DuplicateBlock,
  DuplicatePort,
  NoBlocks,
  AmbiguousWriter,
  MalformedModel,
  InvalidFocus,
  MalformedStyle,
  UnknownName,
  CyclicDerivation,
  AmbiguousLineage,
  InvalidManifest,
  UsageError,
  FormatMismatch,
  Io,
};

std::string_view error_code_name(ErrorCode code);

// Every failure raised by the library. `file`/`line` are empty/0 when the
// error has no source location.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::string file = {},
        int line = 0);

  ErrorCode code() const noexcept { return code_; }
  const std::string& file() const noexcept { return file_; }
  int line() const noexcept { return line_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string file_;
  int line_;
  std::string detail_;
};

}  // namespace yw
