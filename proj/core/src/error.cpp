#include "yw/error.hpp"

namespace yw {
namespace {

std::string decorate(ErrorCode code, const std::string& message,
                     const std::string& file, int line) {
  std::string out;
  if (!file.empty()) {
    out += file;
    out += ':';
    if (line > 0) {
      out += std::to_string(line);
      out += ':';
    }
    out += ' ';
  } else if (line > 0) {
    out += "line " + std::to_string(line) + ": ";
  }
  out += error_code_name(code);
  out += ": ";
  out += message;
  return out;
}

}  // namespace

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownLanguage: return "UnknownLanguage";
    case ErrorCode::UnterminatedBlockComment: return "UnterminatedBlockComment";
    case ErrorCode::MissingValue: return "MissingValue";
    case ErrorCode::InvalidValue: return "InvalidValue";
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::UnbalancedEnd: return "UnbalancedEnd";
    case ErrorCode::UnclosedBlock: return "UnclosedBlock";
    case ErrorCode::MismatchedEndName: return "MismatchedEndName";
    case ErrorCode::PortOutsideBlock: return "PortOutsideBlock";
    case ErrorCode::DuplicateBlock: return "DuplicateBlock";
    case ErrorCode::DuplicatePort: return "DuplicatePort";
    case ErrorCode::NoBlocks: return "NoBlocks";
    case ErrorCode::AmbiguousWriter: return "AmbiguousWriter";
    case ErrorCode::MalformedModel: return "MalformedModel";
    case ErrorCode::InvalidFocus: return "InvalidFocus";
    case ErrorCode::MalformedStyle: return "MalformedStyle";
    case ErrorCode::UnknownName: return "UnknownName";
    case ErrorCode::CyclicDerivation: return "CyclicDerivation";
    case ErrorCode::AmbiguousLineage: return "AmbiguousLineage";
    case ErrorCode::InvalidManifest: return "InvalidManifest";
    case ErrorCode::UsageError: return "UsageError";
    case ErrorCode::FormatMismatch: return "FormatMismatch";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, std::string message, std::string file, int line)
    : std::runtime_error(decorate(code, message, file, line)),
      code_(code),
      file_(std::move(file)),
      line_(line),
      detail_(std::move(message)) {}

}  // namespace yw
